// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_ASSEMBLY_HPP
#define FOSLS_ASSEMBLY_HPP

#include <memory>
#include <string>

#include "fosls/problem.hpp"
#include "fosls/space.hpp"
#include "fosls/types.hpp"

namespace fosls
{

// Least-squares system over the combined [V; W] coefficient vector:
//   b((phi,u),(psi,v)) = (ik phi + grad u, ik psi + grad v) + (ik u + div phi, ik v + div psi)
//                        + k <phi.n + sigma u, psi.n + sigma v>_boundary
//   rhs(psi,v)         = (-i f / k, ik v + div psi) + <i g, psi.n + sigma v>_boundary
// with (a, b) = int a conj(b). Row i holds the test function, column j the trial function.
struct FoslsSystem
{
  std::shared_ptr<const FESpacePair> spaces;
  SparseMatrix B;
  CVector rhs;
  double k = 1.0;
  int sigma = 1;

  int size() const { return static_cast<int>(rhs.size()); }
};

struct AssemblyOptions
{
  // Worker threads for element computations; the global merge is serial in element order,
  // so results do not depend on this value.
  int threads = 1;
};

FoslsSystem assemble(std::shared_ptr<const FESpacePair> spaces, const ProblemSpec &prob,
                     const AssemblyOptions &opts = {});

// Gram matrix of ||phi||^2 + ||u||^2 + k ||phi.n + sigma u||^2_boundary.
SparseMatrix assemble_gram(const FESpacePair &spaces, double k, int sigma);

// R((phi_h,u_h);(f,g)) = ||ik phi + grad u||^2 + ||ik u + div phi + i f/k||^2
//                        + k ||phi.n + sigma u - i g/k||^2_boundary,
// evaluated by quadrature of the represented fields.
double residual_functional(const FESpacePair &spaces, const CVector &coeff,
                           const ProblemSpec &prob);
double residual_functional(const FoslsSystem &sys, const CVector &coeff,
                           const ProblemSpec &prob);

// max |B - B^H| / max |B| over stored entries.
double hermitian_defect(const SparseMatrix &B);

// Coordinate text dump: "row col re im" per entry and "index re im" per rhs entry.
void dump_system(const FoslsSystem &sys, const std::string &matrix_path,
                 const std::string &rhs_path);

}  // namespace fosls

#endif  // FOSLS_ASSEMBLY_HPP
