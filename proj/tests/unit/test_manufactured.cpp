// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "fosls/assembly.hpp"
#include "fosls/manufactured.hpp"
#include "fosls/metrics.hpp"
#include "fosls/solve.hpp"

using namespace fosls;
namespace ft = fosls::testing;

namespace
{

constexpr double kFirstZero = 2.404825557695773;

std::vector<Vec2> boundary_samples(int m)
{
  std::vector<Vec2> pts;
  for (int i = 0; i < m; i++)
  {
    const double s = -0.5 + (i + 0.5) / m;
    pts.insert(pts.end(), {Vec2(s, -0.5), Vec2(0.5, s), Vec2(s, 0.5), Vec2(-0.5, s)});
  }
  return pts;
}

Vec2 outward(const Vec2 &x)
{
  if (std::abs(x.y() + 0.5) < 1e-14)
    return {0, -1};
  if (std::abs(x.x() - 0.5) < 1e-14)
    return {1, 0};
  if (std::abs(x.y() - 0.5) < 1e-14)
    return {0, 1};
  return {-1, 0};
}

}  // namespace

TEST_SUITE("manufactured")
{
  TEST_CASE("Bessel values at the origin and bounds")
  {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK_THROWS_AS(bessel_j0(-1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j1(-1e-3), std::domain_error);
    for (int i = 0; i <= 2000; i++)
    {
      const double x = 0.25 * i;
      CHECK(std::abs(bessel_j0(x)) <= 1.0);
      CHECK(std::abs(bessel_j1(x)) <= 1.0);
    }
  }

  TEST_CASE("Bessel functions match the integral-representation oracle on [0, 500]")
  {
    double worst = 0.0;
    for (int i = 0; i < 10000; i++)
    {
      const double x = 500.0 * i / 9999.0;
      worst = std::max(worst, std::abs(bessel_j0(x) - ft::bessel_oracle(0, x)));
      worst = std::max(worst, std::abs(bessel_j1(x) - ft::bessel_oracle(1, x)));
    }
    CHECK(worst <= 1e-12);
    // Around the series/asymptotic switch.
    for (double x = 12.0; x <= 16.0; x += 0.01)
    {
      CHECK(std::abs(bessel_j0(x) - ft::bessel_oracle(0, x)) <= 1e-13);
      CHECK(std::abs(bessel_j1(x) - ft::bessel_oracle(1, x)) <= 1e-13);
    }
  }

  TEST_CASE("first zero of J0")
  {
    auto bisect = [](auto f)
    {
      double a = 2.0, b = 3.0;
      for (int i = 0; i < 200 && b - a > 1e-15; i++)
      {
        const double m = 0.5 * (a + b);
        (f(a) * f(m) <= 0.0 ? b : a) = m;
      }
      return 0.5 * (a + b);
    };
    const double oracle_zero = bisect([](double x) { return ft::bessel_oracle(0, x); });
    CHECK(std::abs(oracle_zero - kFirstZero) <= 1e-12);
    CHECK(std::abs(bisect([](double x) { return bessel_j0(x); }) - kFirstZero) <= 1e-10);
    CHECK(std::abs(bessel_j0(kFirstZero)) <= 1e-10);
  }

  TEST_CASE("derivative identities")
  {
    const double h = 1e-5;
    for (int i = 0; i < 20; i++)
    {
      const double x = 0.3 + i * 5.0;
      const double dj0 = (bessel_j0(x + h) - bessel_j0(x - h)) / (2 * h);
      CHECK(std::abs(dj0 + bessel_j1(x)) <= 1e-8);
    }
    for (const double x : {1.0, 5.0, 20.0})
    {
      const double dj1 = (bessel_j1(x + h) - bessel_j1(x - h)) / (2 * h);
      CHECK(std::abs(bessel_j1(x) / x + dj1 - bessel_j0(x)) <= 1e-8);
    }
  }

  TEST_CASE("Bessel benchmark: limits at the center")
  {
    for (const double k : {1.0, 5.0, 40.0})
    {
      const ExactSolution ex = bessel_exact(k);
      CHECK(ex.sigma == -1);
      CHECK(std::abs(ex.f(Vec2(0, 0)) - k) <= 1e-12 * k);
      CHECK(ex.grad_u(Vec2(0, 0)).norm() == 0.0);
      // Continuity across the small-r branch.
      const Vec2 a(3e-9, 0.0), b(3e-8, 0.0);
      CHECK(std::abs(ex.f(a) - ex.f(b)) <= 1e-10 * k);
      CHECK(std::abs(ex.laplacian_u(a) - ex.laplacian_u(b)) <= 1e-8 * k * k);
      CHECK((ex.grad_u(a) - ex.grad_u(b)).norm() <= 1e-6 * k * k);
    }
    CHECK_THROWS(bessel_exact(0.0));
  }

  TEST_CASE("Bessel benchmark satisfies the PDE and the Robin condition")
  {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> U(-0.49, 0.49);
    for (const int sigma : {-1, 1})
    {
      const double k = 20.0;
      const ExactSolution ex = bessel_exact(k, sigma);
      for (int i = 0; i < 50; i++)
      {
        const Vec2 x(U(rng), U(rng));
        const Complex lap = ft::fd_laplacian(ex.u, x, 1e-3);
        CHECK(std::abs(-lap - k * k * ex.u(x) - ex.f(x)) <= 1e-7 * k * k);
        CHECK(std::abs(lap - ex.laplacian_u(x)) <= 1e-7 * k * k);
        CHECK((ft::fd_gradient(ex.u, x, 1e-3) - ex.grad_u(x)).norm() <= 1e-7 * k);
        // First-order residuals.
        const Complex div_phi = (kI / k) * ex.laplacian_u(x);
        CHECK(std::abs(kI * k * ex.u(x) + div_phi + kI * ex.f(x) / k) <= 1e-7);
        CHECK((kI * k * ex.phi(x) + ex.grad_u(x)).norm() <= 1e-12 * k);
      }
      for (const Vec2 &x : boundary_samples(25))
      {
        const Vec2 n = outward(x);
        const CVec2 grad = ft::fd_gradient(ex.u, x, 1e-4);
        const Complex dudn = grad(0) * n(0) + grad(1) * n(1);
        CHECK(std::abs(dudn - double(sigma) * kI * k * ex.u(x) - ex.g(x, n)) <= 1e-9 * k);
        const CVec2 phi = ex.phi(x);
        CHECK(std::abs(k * (phi(0) * n(0) + phi(1) * n(1) + double(sigma) * ex.u(x)) -
                       kI * ex.g(x, n)) <= 1e-9);
      }
    }
  }

  TEST_CASE("the benchmark constant uses J0 and J1 at k")
  {
    const double k = 7.0;
    const ExactSolution ex = bessel_exact(k);
    const Complex C = std::exp(kI * k) /
                      (k * Complex(ft::bessel_oracle(0, k), ft::bessel_oracle(1, k)));
    const Vec2 x(0.3, -0.1);
    const double r = x.norm();
    const Complex u = std::cos(k * r) / k - C * ft::bessel_oracle(0, k * r);
    CHECK(std::abs(ex.u(x) - u) <= 1e-13);
  }

  TEST_CASE("polynomial solution")
  {
    const double k = 3.0;
    const ExactSolution ex = polynomial_exact(k);
    CHECK(ex.sigma == 1);
    CHECK(std::abs(ex.f(Vec2(0.5, 0.5)) + k * k) <= 1e-14);
    for (const Vec2 &x : {Vec2(0.1, 0.2), Vec2(-0.4, 0.3)})
    {
      CHECK((ex.phi(x) - CVec2(kI / k, kI / k)).norm() <= 1e-15);
    }
    auto mesh = std::make_shared<const Mesh>(build_uniform_mesh(DomainBox{}, 2));
    auto sp = std::make_shared<const FESpacePair>(build_spaces(mesh, 1));
    const FoslsSystem sys = assemble(sp, ex.problem());
    const CVector xh = solve_direct(sys).x;
    const CVector xi = interpolate(*sp, [&](const Vec2 &x) { return ex.phi(x); }, ex.u);
    CHECK((xh - xi).norm() <= 1e-8 * xi.norm());
    const ErrorReport rep = compute_errors(*sp, xh, ex);
    CHECK(rep.rel_err_u <= 1e-8);
    CHECK(rep.rel_err_phi <= 1e-8);
  }
}
