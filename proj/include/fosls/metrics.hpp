// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_METRICS_HPP
#define FOSLS_METRICS_HPP

#include <vector>

#include "fosls/manufactured.hpp"
#include "fosls/space.hpp"
#include "fosls/types.hpp"

namespace fosls
{

struct ErrorReport
{
  double rel_err_u = 0.0;    // ||u - u_h|| / ||u||
  double rel_err_phi = 0.0;  // ||phi - phi_h|| / ||phi||
  double fosls_residual = 0.0;
  long long ndof = 0;
  double h = 0.0;
  double k = 0.0;
  int p_plus_1 = 0;
  double kh_over_p = 0.0;  // k h / (p+1)
};

ErrorReport compute_errors(const FESpacePair &spaces, const CVector &coeff,
                           const ExactSolution &exact);

// Discrete u_h at a physical point.
Complex evaluate_u(const FESpacePair &spaces, const CVector &coeff, const Vec2 &x);

struct TraceSample
{
  double x;
  Complex u;
};

struct GridSample
{
  double x, y;
  Complex u;
};

// m equispaced samples of u_h along the horizontal line at height y.
std::vector<TraceSample> sample_trace(const FESpacePair &spaces, const CVector &coeff,
                                      double y, int m);

// m x m equispaced samples of u_h over the box, row-major in y.
std::vector<GridSample> sample_grid(const FESpacePair &spaces, const CVector &coeff, int m);

struct CoercivityResult
{
  double lambda_min = 0.0;
  int iterations = 0;
  long long ndof = 0;
};

// Smallest eigenvalue of B x = lambda M x, where B is the least-squares form and M the Gram
// matrix of ||phi||^2 + ||u||^2 + k ||phi.n + sigma u||^2_boundary. Shifted block inverse
// iteration with Rayleigh-Ritz; a shift tau is accepted only when B - tau M factors, which
// certifies tau < lambda_min.
CoercivityResult coercivity_probe(const FESpacePair &spaces, double k, int sigma,
                                  long long max_dofs = 200000, int max_iterations = 500,
                                  double tol = 1e-10);

}  // namespace fosls

#endif  // FOSLS_METRICS_HPP
