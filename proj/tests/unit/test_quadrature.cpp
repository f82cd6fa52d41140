// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "fosls/quadrature.hpp"

using namespace fosls;
using fosls::testing::monomial_integral;

namespace
{

double integrate(const QuadratureRule &r, int a, int b)
{
  double s = 0.0;
  for (int i = 0; i < r.size(); i++)
  {
    s += r.weights[i] * std::pow(r.points[i].x(), a) * std::pow(r.points[i].y(), b);
  }
  return s;
}

}  // namespace

TEST_SUITE("quadrature")
{
  TEST_CASE("low-degree integrals")
  {
    CHECK(std::abs(integrate(triangle_quadrature(0), 0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(integrate(triangle_quadrature(1), 1, 0) - 1.0 / 6.0) <= 1e-15);
    CHECK(std::abs(integrate(triangle_quadrature(4), 2, 2) - 1.0 / 180.0) <= 1e-16);
  }

  TEST_CASE("monomials up to the exact degree")
  {
    for (const int degree : {0, 1, 2, 5, 8, 10, 12, 14, 20, 31, 45, 60})
    {
      const QuadratureRule r = triangle_quadrature(degree);
      CHECK(r.exact_degree >= degree);
      double wsum = 0.0;
      for (int i = 0; i < r.size(); i++)
      {
        CHECK(r.weights[i] > 0.0);
        CHECK(r.points[i].x() > 0.0);
        CHECK(r.points[i].y() > 0.0);
        CHECK(r.points[i].x() + r.points[i].y() < 1.0);
        wsum += r.weights[i];
      }
      CHECK(std::abs(wsum - 0.5) <= 1e-14);
      for (int a = 0; a <= degree; a++)
      {
        for (int b = 0; a + b <= degree; b++)
        {
          const double exact = monomial_integral(a, b);
          CHECK(std::abs(integrate(r, a, b) - exact) <= 1e-13 * exact);
        }
      }
    }
  }

  TEST_CASE("degree bounds")
  {
    CHECK_THROWS(triangle_quadrature(61));
    CHECK_THROWS(triangle_quadrature(-1));
    CHECK_THROWS(edge_quadrature(61));
  }

  TEST_CASE("edge rule integrates s^m on [0,1]")
  {
    for (const int degree : {0, 3, 10, 14, 30})
    {
      const EdgeQuadratureRule r = edge_quadrature(degree);
      double wsum = 0.0;
      for (int i = 0; i < r.size(); i++)
      {
        wsum += r.weights[i];
      }
      CHECK(std::abs(wsum - 1.0) <= 1e-14);
      for (int m = 0; m <= degree; m++)
      {
        double s = 0.0;
        for (int i = 0; i < r.size(); i++)
        {
          s += r.weights[i] * std::pow(r.points[i], m);
        }
        CHECK(std::abs(s - 1.0 / (m + 1)) <= 1e-14);
      }
    }
  }

  TEST_CASE("Gauss-Jacobi weights integrate the weight function")
  {
    std::vector<double> x, w;
    gauss_jacobi(6, 1.0, 0.0, x, w);
    double s = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < x.size(); i++)
    {
      s += w[i];
      s1 += w[i] * x[i];
    }
    // int (1-x) dx = 2, int (1-x) x dx = -2/3 on [-1,1].
    CHECK(std::abs(s - 2.0) <= 1e-14);
    CHECK(std::abs(s1 + 2.0 / 3.0) <= 1e-14);
  }

  TEST_CASE("assembly degree policy")
  {
    for (int q = 1; q <= 4; q++)
    {
      CHECK(quadrature_degree(q) == 2 * (q + 1) + 4);
    }
  }
}
