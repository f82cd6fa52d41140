// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fosls
{

void gauss_jacobi(int n, double alpha, double beta, std::vector<double> &x,
                  std::vector<double> &w)
{
  if (n < 1)
  {
    throw std::invalid_argument("gauss_jacobi: need at least one point");
  }
  // Recurrence coefficients of the orthonormal Jacobi polynomials:
  //   b[m+1] p_{m+1} = (x - a[m]) p_m - b[m] p_{m-1}.
  using Real = long double;
  const Real A = alpha, Bt = beta, ab = A + Bt;
  std::vector<Real> a(n), b(n + 1, 0.0L);
  for (int i = 0; i < n; i++)
  {
    const Real s = 2.0L * i + ab;
    a[i] = (i == 0 && std::abs(ab) < 1e-15L) ? (Bt - A) / (ab + 2.0L)
                                            : (Bt * Bt - A * A) / (s * (s + 2.0L));
  }
  for (int m = 1; m <= n; m++)
  {
    const Real t = 2.0L * m + ab;
    const Real num = 4.0L * m * (m + A) * (m + Bt) * (m + ab);
    const Real den = t * t * (t + 1.0L) * (t - 1.0L);
    b[m] = std::sqrt(num / den);
  }
  const Real mu0 = std::pow(2.0L, ab + 1.0L) * std::tgamma(A + 1.0L) * std::tgamma(Bt + 1.0L) /
                   std::tgamma(ab + 2.0L);

  // Starting nodes from the eigenvalues of the Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; i++)
  {
    J(i, i) = static_cast<double>(a[i]);
    if (i + 1 < n)
    {
      J(i, i + 1) = J(i + 1, i) = static_cast<double>(b[i + 1]);
    }
  }
  const Eigen::VectorXd start =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J, Eigen::EigenvaluesOnly).eigenvalues();

  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; i++)
  {
    // Newton on p_n in extended precision; the weight is 1 / sum_{m<n} p_m(x)^2.
    Real z = start(i), sum = 0.0L;
    for (int it = 0; it < 8; it++)
    {
      Real p0 = 0.0L, p1 = 1.0L / std::sqrt(mu0), d0 = 0.0L, d1 = 0.0L;
      sum = p1 * p1;
      for (int m = 0; m < n; m++)
      {
        const Real p2 = ((z - a[m]) * p1 - b[m] * p0) / b[m + 1];
        const Real d2 = ((z - a[m]) * d1 + p1 - b[m] * d0) / b[m + 1];
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        if (m + 1 < n)
        {
          sum += p1 * p1;
        }
      }
      const Real dz = p1 / d1;
      z -= dz;
      if (std::abs(dz) < 1e-19L)
      {
        break;
      }
    }
    x[i] = static_cast<double>(z);
    w[i] = static_cast<double>(1.0L / sum);
  }
}

QuadratureRule triangle_quadrature(int degree)
{
  if (degree < 0 || degree > kMaxQuadratureDegree)
  {
    throw std::invalid_argument("triangle_quadrature: degree must lie in [0, 60]");
  }
  const int n = degree / 2 + 1;
  std::vector<double> xa, wa, xb, wb;
  gauss_jacobi(n, 1.0, 0.0, xa, wa);
  gauss_jacobi(n, 0.0, 0.0, xb, wb);
  QuadratureRule rule;
  rule.exact_degree = 2 * n - 1;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < n; j++)
    {
      // x = (1+a)/2, y = (1-a)(1+b)/4, dx dy = (1-a)/8 da db; (1-a) is in the Jacobi weight.
      rule.points.emplace_back(0.5 * (1.0 + xa[i]), 0.25 * (1.0 - xa[i]) * (1.0 + xb[j]));
      rule.weights.push_back(wa[i] * wb[j] / 8.0);
    }
  }
  return rule;
}

EdgeQuadratureRule edge_quadrature(int degree)
{
  if (degree < 0 || degree > kMaxQuadratureDegree)
  {
    throw std::invalid_argument("edge_quadrature: degree must lie in [0, 60]");
  }
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_jacobi(n, 0.0, 0.0, x, w);
  EdgeQuadratureRule rule;
  rule.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; i++)
  {
    rule.points.push_back(0.5 * (1.0 + x[i]));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

}  // namespace fosls
