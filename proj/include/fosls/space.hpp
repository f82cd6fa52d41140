// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_SPACE_HPP
#define FOSLS_SPACE_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fosls/mesh.hpp"
#include "fosls/refelem.hpp"
#include "fosls/types.hpp"

namespace fosls
{

// Degree-of-freedom layout for V_h x W_h (RT_{p+1} x P_{p+1}). The combined coefficient
// vector is [V-block; W-block]. Within each block edge DOFs come first (global edge index,
// then moment degree or node position from the smaller vertex), then element interiors.
struct FESpacePair
{
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const ElementTables> tables;
  int order = 0;
  int n_V = 0, n_W = 0;
  int rt_local = 0, lag_local = 0;
  std::vector<int> v_dofs;      // triangle-major, rt_local per triangle
  std::vector<double> v_signs;  // +-1 per (triangle, local RT DOF)
  std::vector<int> w_dofs;      // triangle-major, lag_local per triangle; W-block indices

  int ndof() const { return n_V + n_W; }
  std::span<const int> v_dofs_of(int t) const
  {
    return {v_dofs.data() + static_cast<std::size_t>(t) * rt_local,
            static_cast<std::size_t>(rt_local)};
  }
  std::span<const double> v_signs_of(int t) const
  {
    return {v_signs.data() + static_cast<std::size_t>(t) * rt_local,
            static_cast<std::size_t>(rt_local)};
  }
  std::span<const int> w_dofs_of(int t) const
  {
    return {w_dofs.data() + static_cast<std::size_t>(t) * lag_local,
            static_cast<std::size_t>(lag_local)};
  }
};

FESpacePair build_spaces(std::shared_ptr<const Mesh> mesh, int p_plus_1);

// DOF counts for a uniform n x n mesh without building anything.
long long predicted_ndof(int n, int p_plus_1);

struct BoundaryEdge
{
  int edge, tri, local_edge;
  std::vector<int> v_dofs;  // RT DOFs on the edge (V-block indices)
  std::vector<int> w_dofs;  // W_h trace nodes on the edge (W-block indices)
};

struct BoundaryDofs
{
  std::vector<int> v_dofs;
  std::vector<BoundaryEdge> edges;
};

BoundaryDofs boundary_dofs(const FESpacePair &spaces);

// Local coefficients of triangle t in the reference orientation.
void gather(const FESpacePair &spaces, int t, const CVector &coeff, CVector &rt_local,
            CVector &lag_local);

struct PointValues
{
  Complex u;
  CVec2 grad_u;
  CVec2 phi;
  Complex div_phi;
};

PointValues evaluate(const FESpacePair &spaces, const CVector &coeff, int t, const Vec2 &xhat);

// Canonical interpolant (RT moments, Lagrange nodal values) of a pair (phi, u).
CVector interpolate(const FESpacePair &spaces,
                    const std::function<CVec2(const Vec2 &)> &phi,
                    const std::function<Complex(const Vec2 &)> &u);

}  // namespace fosls

#endif  // FOSLS_SPACE_HPP
