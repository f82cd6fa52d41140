// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "fosls/refelem.hpp"

using namespace fosls;
namespace ft = fosls::testing;

TEST_SUITE("refelem")
{
  TEST_CASE("order range")
  {
    CHECK_THROWS(check_order(0));
    CHECK_THROWS(check_order(5));
    CHECK_NOTHROW(check_order(4));
    CHECK(ElementTables::get(2) == ElementTables::get(2));
  }

  TEST_CASE("reference edges")
  {
    const Vec2 v[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    for (int j = 0; j < 3; j++)
    {
      const ReferenceEdge &E = reference_edge(j);
      CHECK((E.start - v[(j + 1) % 3]).norm() == 0.0);
      CHECK((E.end - v[(j + 2) % 3]).norm() == 0.0);
      CHECK(std::abs(E.normal.norm() - 1.0) <= 1e-15);
      CHECK(E.normal.dot(E.end - E.start) == doctest::Approx(0.0));
      CHECK(E.normal.dot(E.start - v[j]) > 0.0);
      CHECK(std::abs(E.length - (E.end - E.start).norm()) <= 1e-15);
    }
  }

  TEST_CASE("shifted Legendre matches the recurrence")
  {
    for (int m = 0; m <= 6; m++)
    {
      for (const double s : {0.0, 0.13, 0.5, 0.77, 1.0})
      {
        CHECK(std::abs(shifted_legendre(m, s) - ft::legendre01(m, s)) <= 1e-14);
      }
    }
    CHECK(std::abs(shifted_legendre(2, 0.75) - (3.0 * 0.25 - 1.0) / 2.0) <= 1e-15);
  }

  TEST_CASE("orthonormal polynomials have identity Gram matrix")
  {
    for (int d = 0; d <= 5; d++)
    {
      const OrthonormalPolynomials P(d);
      CHECK(P.size() == OrthonormalPolynomials::count(d));
      const QuadratureRule Q = triangle_quadrature(2 * d + 2);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(P.size(), P.size());
      Eigen::VectorXd v, dx, dy;
      for (int i = 0; i < Q.size(); i++)
      {
        P.eval(Q.points[i], v, dx, dy);
        G += Q.weights[i] * v * v.transpose();
      }
      CHECK((G - Eigen::MatrixXd::Identity(P.size(), P.size())).cwiseAbs().maxCoeff() <= 1e-11);
    }
  }

  TEST_CASE("Lagrange bases")
  {
    CHECK(LagrangeBasis(1).dim() == 3);
    CHECK(LagrangeBasis(4).dim() == 15);
    std::mt19937_64 rng(11);
    for (int q = 1; q <= 4; q++)
    {
      const LagrangeBasis L(q);
      CHECK(L.dim() == (q + 1) * (q + 2) / 2);
      const LagrangeTabulation at_nodes = L.tabulate(L.nodes());
      CHECK((at_nodes.values - Eigen::MatrixXd::Identity(L.dim(), L.dim())).cwiseAbs().maxCoeff() <=
            1e-12);
      std::vector<Vec2> pts;
      for (int i = 0; i < 20; i++)
      {
        pts.push_back(ft::random_reference_point(rng));
      }
      const LagrangeTabulation tab = L.tabulate(pts);
      for (int i = 0; i < 20; i++)
      {
        CHECK(std::abs(tab.values.row(i).sum() - 1.0) <= 1e-12);
        CHECK(std::abs(tab.dx.row(i).sum()) <= 1e-11);
        CHECK(std::abs(tab.dy.row(i).sum()) <= 1e-11);
      }
      // Edge nodes sit on their edge, equispaced from the edge's start vertex.
      for (int j = 0; j < 3; j++)
      {
        const ReferenceEdge &E = reference_edge(j);
        for (int m = 1; m <= L.nodes_per_edge(); m++)
        {
          CHECK((L.nodes()[L.edge_node(j, m)] - E.point(double(m) / q)).norm() <= 1e-15);
        }
      }
    }
    // P1 is the barycentric basis.
    const LagrangeBasis L1(1);
    const std::array<Vec2, 1> p = {Vec2(0.2, 0.3)};
    const LagrangeTabulation t1 = L1.tabulate(p);
    CHECK(std::abs(t1.values(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(t1.values(0, 1) - 0.2) <= 1e-15);
    CHECK(std::abs(t1.values(0, 2) - 0.3) <= 1e-15);
  }

  TEST_CASE("RT dimension, rank and conditioning")
  {
    CHECK(RTBasis(1).dim() == 8);
    for (int q = 1; q <= 4; q++)
    {
      const RTBasis rt(q);
      const int p = q - 1;
      CHECK(rt.dim() == (p + 2) * (p + 4));
      CHECK(rt.span_rank() == rt.dim());
      CHECK(rt.num_edge_dofs() == 3 * (p + 2));
      CHECK(rt.num_interior_dofs() == (p + 1) * (p + 2));
      CHECK(rt.vandermonde_condition() < 1e10);
    }
  }

  TEST_CASE("RT functionals are dual to the basis")
  {
    for (int q = 1; q <= 4; q++)
    {
      CAPTURE(q);
      CHECK(ft::rt_duality_error(q) <= 1e-10);
    }
  }

  TEST_CASE("RT divergence lies in P_q and normal traces in P_q of the edge")
  {
    for (int q = 1; q <= 4; q++)
    {
      const RTBasis rt(q);
      const OrthonormalPolynomials P(q);
      const QuadratureRule Q = triangle_quadrature(2 * q + 6);
      const RTTabulation tab = rt.tabulate(Q.points);
      Eigen::VectorXd v, dx, dy;
      for (int j = 0; j < rt.dim(); j++)
      {
        Eigen::VectorXd coeff = Eigen::VectorXd::Zero(P.size());
        for (int i = 0; i < Q.size(); i++)
        {
          P.eval(Q.points[i], v, dx, dy);
          coeff += Q.weights[i] * tab.div(i, j) * v;
        }
        double res = 0.0;
        for (int i = 0; i < Q.size(); i++)
        {
          P.eval(Q.points[i], v, dx, dy);
          res += Q.weights[i] * std::pow(tab.div(i, j) - v.dot(coeff), 2);
        }
        CHECK(std::sqrt(res) <= 1e-11);
      }

      std::vector<double> s, w;
      ft::gauss_legendre01(q + 6, s, w);
      for (int e = 0; e < 3; e++)
      {
        const ReferenceEdge &E = reference_edge(e);
        std::vector<Vec2> pts;
        for (const double si : s)
        {
          pts.push_back(E.point(si));
        }
        const RTTabulation et = rt.tabulate(pts);
        for (int j = 0; j < rt.dim(); j++)
        {
          std::vector<double> trace(s.size());
          for (std::size_t i = 0; i < s.size(); i++)
          {
            trace[i] = et.vx(i, j) * E.normal.x() + et.vy(i, j) * E.normal.y();
          }
          std::vector<double> c(q + 1, 0.0);
          for (int m = 0; m <= q; m++)
          {
            for (std::size_t i = 0; i < s.size(); i++)
            {
              c[m] += (2 * m + 1) * w[i] * trace[i] * ft::legendre01(m, s[i]);
            }
          }
          double res = 0.0;
          for (std::size_t i = 0; i < s.size(); i++)
          {
            double fit = 0.0;
            for (int m = 0; m <= q; m++)
            {
              fit += c[m] * ft::legendre01(m, s[i]);
            }
            res = std::max(res, std::abs(fit - trace[i]));
          }
          CHECK(res <= 1e-11);
        }
      }
    }
  }

  TEST_CASE("RT interpolation reproduces its own space")
  {
    std::mt19937_64 rng(5);
    for (int q = 1; q <= 4; q++)
    {
      const RTBasis rt(q);
      const AffineMap map = ft::random_affine_map(rng);
      const CVector c = ft::random_cvector(rng, rt.dim());
      // Physical field of the reference combination c.
      auto field = [&](const Vec2 &x)
      {
        const CVec2 ref = ft::rt_combination(rt, c, map.inverse(x)).value;
        return CVec2(map.B.cast<Complex>() * ref / map.detB);
      };
      const CVector back = rt_interpolate(field, map, rt);
      CHECK((back - c).cwiseAbs().maxCoeff() <= 1e-11 * c.cwiseAbs().maxCoeff());

      // Constants are in every RT_q.
      const CVector k = rt_interpolate([](const Vec2 &) { return CVec2(1.0, 0.0); },
                                       ft::map_from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)), rt);
      for (int i = 0; i < 10; i++)
      {
        const CVec2 val = ft::rt_combination(rt, k, ft::random_reference_point(rng)).value;
        CHECK(std::abs(val(0) - 1.0) <= 1e-12);
        CHECK(std::abs(val(1)) <= 1e-12);
      }
    }
    const RTBasis rt1(1);
    const CVector lin = rt_interpolate([](const Vec2 &x) { return CVec2(x.x(), x.y()); },
                                       ft::map_from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)), rt1);
    for (int i = 0; i < 10; i++)
    {
      CHECK(std::abs(ft::rt_combination(rt1, lin, ft::random_reference_point(rng)).div - 2.0) <=
            1e-12);
    }
  }

  TEST_CASE("commuting diagram: div of the interpolant is the projection of div")
  {
    std::mt19937_64 rng(17);
    // (y^2, -x^2) on the reference element at p+1 = 2.
    const AffineMap id = ft::map_from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    const double e0 = ft::commuting_diagram_error(
        2, id, [](const Vec2 &x) { return CVec2(x.y() * x.y(), -x.x() * x.x()); },
        [](const Vec2 &) { return Complex(0.0); });
    CHECK(e0 <= 1e-10);
    // Polynomial data: every moment is integrated exactly, so the identity holds to rounding.
    auto poly = [](const Vec2 &x)
    {
      return CVec2(x.x() * x.x() * x.x() * x.y(),
                   Complex(0.0, 1.0) * (x.x() * x.y() * x.y() + std::pow(x.y(), 4)));
    };
    auto poly_div = [](const Vec2 &x)
    {
      return Complex(3.0 * x.x() * x.x() * x.y(), 0.0) +
             Complex(0.0, 1.0) * (2.0 * x.x() * x.y() + 4.0 * std::pow(x.y(), 3));
    };
    for (int q = 1; q <= 4; q++)
    {
      for (int trial = 0; trial < 3; trial++)
      {
        CAPTURE(q);
        CHECK(ft::commuting_diagram_error(q, ft::random_affine_map(rng), poly, poly_div) <= 1e-10);
        // Smooth data on cells of mesh size, where the moment quadrature is resolved.
        CHECK(ft::commuting_diagram_error(q, ft::random_affine_map(rng, 0.05), ft::smooth_field,
                                          ft::smooth_field_div) <= 1e-10);
      }
    }
  }

  TEST_CASE("Piola transform")
  {
    const std::vector<Vec2> vals = {Vec2(1.0, -2.0), Vec2(0.5, 3.0)};
    const std::vector<double> divs = {4.0, -8.0};
    const AffineMap id = ft::map_from_vertices(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    const PiolaPushed same = piola_push(id, vals, divs);
    for (int i = 0; i < 2; i++)
    {
      CHECK((same.values[i] - vals[i]).norm() == 0.0);
      CHECK(same.divergences[i] == divs[i]);
    }
    const AffineMap two = ft::map_from_vertices(Vec2(0, 0), Vec2(2, 0), Vec2(0, 2));
    const PiolaPushed scaled = piola_push(two, vals, divs);
    for (int i = 0; i < 2; i++)
    {
      CHECK((scaled.values[i] - vals[i] / 2.0).norm() <= 1e-15);
      CHECK(std::abs(scaled.divergences[i] - divs[i] / 4.0) <= 1e-15);
    }
    AffineMap singular = two;
    singular.B << 1.0, 2.0, 2.0, 4.0;
    singular.detB = 0.0;
    CHECK_THROWS(piola_push(singular, vals, divs));

    std::mt19937_64 rng(23);
    for (int q = 1; q <= 4; q++)
    {
      for (int trial = 0; trial < 5; trial++)
      {
        const AffineMap map = ft::random_affine_map(rng);
        CHECK(ft::piola_flux_error(q, map, rng) <= 1e-12);
        for (int j = 0; j < 3; j++)
        {
          const ReferenceEdge &E = reference_edge(j);
          const Vec2 t = map(E.end) - map(E.start);
          CHECK(std::abs(mapped_edge_length(map, j) - t.norm()) <= 1e-14);
          CHECK((mapped_edge_normal(map, j) - Vec2(t.y(), -t.x()) / t.norm()).norm() <= 1e-14);
          // (psi.n)|F| = (psihat.nhat)|Fhat| pointwise for affine maps.
          const Vec2 psihat(0.3, -1.1);
          const Vec2 psi = map.B * psihat / map.detB;
          CHECK(std::abs(piola_normal_trace(map, j, psihat) - psi.dot(mapped_edge_normal(map, j))) <=
                1e-14);
          CHECK(std::abs(piola_normal_trace(map, j, psihat) * t.norm() -
                         psihat.dot(E.normal) * E.length) <= 1e-13);
        }
      }
    }
  }

  TEST_CASE("RT interpolation error converges at order p+2")
  {
    for (int q = 1; q <= 2; q++)
    {
      const std::vector<double> orders = ft::rt_interpolation_orders(q);
      CAPTURE(q);
      CHECK(orders[0] >= q + 0.8);
      CHECK(orders[1] >= q + 0.8);
    }
  }
}
