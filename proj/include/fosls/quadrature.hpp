// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_QUADRATURE_HPP
#define FOSLS_QUADRATURE_HPP

#include <vector>

#include "fosls/types.hpp"

namespace fosls
{

// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct QuadratureRule
{
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct EdgeQuadratureRule
{
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxQuadratureDegree = 60;

// n-point Gauss-Jacobi nodes and weights for (1-x)^alpha (1+x)^beta on [-1,1]
// (Golub-Welsch).
void gauss_jacobi(int n, double alpha, double beta, std::vector<double> &x,
                  std::vector<double> &w);

// Collapsed (Duffy) tensor product of Gauss-Jacobi(1,0) and Gauss-Legendre rules.
QuadratureRule triangle_quadrature(int degree);

EdgeQuadratureRule edge_quadrature(int degree);

// Degree used for all volume and edge integrals at element order p+1.
inline int quadrature_degree(int p_plus_1) { return 2 * (p_plus_1 + 1) + 4; }

}  // namespace fosls

#endif  // FOSLS_QUADRATURE_HPP
