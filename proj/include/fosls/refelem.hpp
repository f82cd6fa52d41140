// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_REFELEM_HPP
#define FOSLS_REFELEM_HPP

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fosls/mesh.hpp"
#include "fosls/quadrature.hpp"
#include "fosls/types.hpp"

namespace fosls
{

inline constexpr int kMaxOrder = 4;

// Local edge j of the reference triangle runs from vertex (j+1)%3 to (j+2)%3.
struct ReferenceEdge
{
  Vec2 start, end;
  Vec2 normal;  // outward unit normal
  double length;

  Vec2 point(double s) const { return start + s * (end - start); }
};

const ReferenceEdge &reference_edge(int j);

// Legendre polynomial of degree m evaluated at 2s-1, s in [0,1].
double shifted_legendre(int m, double s);

struct LagrangeTabulation
{
  Eigen::MatrixXd values, dx, dy;  // (points x basis functions)
};

struct RTTabulation
{
  Eigen::MatrixXd vx, vy, div;  // (points x basis functions)
};

// Nodal P_{p+1} basis on the reference triangle. Node layout: the three vertices, then
// p nodes per local edge ordered from the edge's start vertex, then interior nodes.
class LagrangeBasis
{
public:
  explicit LagrangeBasis(int p_plus_1);

  int order() const { return order_; }
  int dim() const { return static_cast<int>(nodes_.size()); }
  int nodes_per_edge() const { return order_ - 1; }
  int num_interior() const { return dim() - 3 - 3 * nodes_per_edge(); }
  const std::vector<Vec2> &nodes() const { return nodes_; }

  // Local index of node m (1 <= m <= p) along local edge j.
  int edge_node(int j, int m) const { return 3 + j * nodes_per_edge() + (m - 1); }
  int interior_node(int i) const { return 3 + 3 * nodes_per_edge() + i; }

  LagrangeTabulation tabulate(std::span<const Vec2> points) const;

private:
  int order_;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;  // monomial -> basis
};

// Polynomials of total degree <= D orthonormal in L2 of the reference triangle, in graded
// order (all of degree 0, then degree 1, ...). Built by Cholesky orthogonalization of
// monomials centered at the centroid.
class OrthonormalPolynomials
{
public:
  explicit OrthonormalPolynomials(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  // Number of polynomials of degree <= d (a prefix of the graded order).
  static int count(int d) { return (d + 1) * (d + 2) / 2; }

  void eval(const Vec2 &x, Eigen::VectorXd &values, Eigen::VectorXd &dx,
            Eigen::VectorXd &dy) const;

private:
  int degree_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;  // centered monomial -> orthonormal polynomial
};

// Raviart-Thomas RT_{p+1} = P_{p+1}^2 + x P~_{p+1} on the reference triangle, with
// degrees of freedom
//   edge j, m = 0..p+1:   int_{E_j} psi.n L_m ds  (L_m Legendre along the local edge),
//   interior:             int_K psi_c w_i,  c in {x,y}, w_i orthonormal of degree <= p.
// Edge DOFs come first, ordered (edge, degree), interior DOFs last (component-major).
class RTBasis
{
public:
  explicit RTBasis(int p_plus_1);

  int order() const { return order_; }
  int dim() const { return static_cast<int>(span_.size()); }
  int dofs_per_edge() const { return order_ + 1; }
  int num_edge_dofs() const { return 3 * dofs_per_edge(); }
  int num_interior_dofs() const { return dim() - num_edge_dofs(); }
  int edge_dof(int j, int m) const { return j * dofs_per_edge() + m; }
  double vandermonde_condition() const { return condition_; }

  // Rank of the spanning set (computed, not assumed).
  int span_rank() const { return span_rank_; }

  RTTabulation tabulate(std::span<const Vec2> points) const;

  // Dual functionals applied to a reference-space vector field.
  CVector apply_functionals(const std::function<CVec2(const Vec2 &)> &field) const;

  // functional_i(spanning function k).
  const Eigen::MatrixXd &vandermonde() const { return vandermonde_; }

private:
  struct SpanFunction
  {
    int kind;   // 0: (w, 0), 1: (0, w), 2: (x - x_c) w with w of top degree
    int index;  // orthonormal polynomial index
  };
  void eval_span(const Vec2 &x, Eigen::VectorXd &vx, Eigen::VectorXd &vy,
                 Eigen::VectorXd &div) const;
  CVector functionals_of(const std::function<CVec2(const Vec2 &)> &field) const;

  int order_;
  OrthonormalPolynomials poly_;       // degree p+1, spans the vector part
  OrthonormalPolynomials test_poly_;  // degree p, interior moments
  std::vector<SpanFunction> span_;
  Eigen::MatrixXd vandermonde_;
  Eigen::MatrixXd coeffs_;  // spanning function -> basis
  double condition_ = 0.0;
  int span_rank_ = 0;
};

// Piola transform psi = B psihat / detB, div psi = divhat psihat / detB.
struct PiolaPushed
{
  std::vector<Vec2> values;
  std::vector<double> divergences;
};

PiolaPushed piola_push(const AffineMap &map, std::span<const Vec2> ref_values,
                       std::span<const double> ref_divergences);

// psi.n on the physical image of reference edge j, n the physical outward normal.
double piola_normal_trace(const AffineMap &map, int j, const Vec2 &ref_value);

// Physical outward normal and length of the image of reference edge j.
Vec2 mapped_edge_normal(const AffineMap &map, int j);
double mapped_edge_length(const AffineMap &map, int j);

// Canonical interpolant on one element: the dual functionals applied to the pulled-back
// field detB B^{-1} psi(G xhat). Coefficients refer to the reference orientation.
CVector rt_interpolate(const std::function<CVec2(const Vec2 &)> &field, const AffineMap &map,
                       const RTBasis &basis);

// Bases, quadrature and tabulations shared by every element at one order.
struct ElementTables
{
  int order;
  RTBasis rt;
  LagrangeBasis lag;
  QuadratureRule volume;
  RTTabulation rt_volume;
  LagrangeTabulation lag_volume;
  EdgeQuadratureRule edge;
  std::array<std::vector<Vec2>, 3> edge_points;  // reference coordinates per local edge
  std::array<RTTabulation, 3> rt_edge;
  std::array<LagrangeTabulation, 3> lag_edge;

  explicit ElementTables(int p_plus_1);

  // Cached instance per order; thread-safe.
  static std::shared_ptr<const ElementTables> get(int p_plus_1);
};

void check_order(int p_plus_1);

}  // namespace fosls

#endif  // FOSLS_REFELEM_HPP
