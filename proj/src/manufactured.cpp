// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/manufactured.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fosls
{

namespace
{

static_assert(std::numeric_limits<long double>::digits >= 64,
              "ascending Bessel series needs extended precision");

constexpr double kSeriesLimit = 14.0;

// sum_m (-1)^m (x/2)^{2m+nu} / (m! (m+nu)!)
double ascending_series(int nu, double x)
{
  const long double h = 0.5L * x, h2 = h * h;
  long double term = (nu == 0) ? 1.0L : h;
  long double sum = term;
  for (int m = 1; m < 200; m++)
  {
    term *= -h2 / (static_cast<long double>(m) * (m + nu));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-24L)
    {
      break;
    }
  }
  return static_cast<double>(sum);
}

// J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi, with the
// series truncated at its smallest term.
double asymptotic(int nu, double x)
{
  const double mu = 4.0 * nu * nu;
  double P = 1.0, Q = 0.0;
  double a = 1.0;  // a_k(nu) / x^k
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; k++)
  {
    const double next = a * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    if (std::abs(next) >= last)
    {
      break;
    }
    last = std::abs(next);
    a = next;
    // Terms alternate in sign pairwise: P takes even k, Q odd k.
    switch (k % 4)
    {
      case 1:
        Q += a;
        break;
      case 2:
        P -= a;
        break;
      case 3:
        Q -= a;
        break;
      default:
        P += a;
        break;
    }
    if (std::abs(a) < 1e-18)
    {
      break;
    }
  }
  const double c = std::cos(x), s = std::sin(x);
  double cos_chi, sin_chi;
  if (nu == 0)
  {
    cos_chi = (c + s) / std::numbers::sqrt2;
    sin_chi = (s - c) / std::numbers::sqrt2;
  }
  else
  {
    cos_chi = (s - c) / std::numbers::sqrt2;
    sin_chi = -(s + c) / std::numbers::sqrt2;
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * cos_chi - Q * sin_chi);
}

double bessel(int nu, double x)
{
  if (!(x >= 0.0))
  {
    throw std::domain_error("bessel: argument must be non-negative");
  }
  return (x < kSeriesLimit) ? ascending_series(nu, x) : asymptotic(nu, x);
}

}  // namespace

double bessel_j0(double x)
{
  return bessel(0, x);
}

double bessel_j1(double x)
{
  return bessel(1, x);
}

Complex ExactSolution::g(const Vec2 &x, const Vec2 &n) const
{
  return n.cast<Complex>().dot(grad_u(x)) - static_cast<double>(sigma) * kI * k * u(x);
}

ProblemSpec ExactSolution::problem() const
{
  ProblemSpec prob;
  prob.k = k;
  prob.sigma = sigma;
  prob.f = f;
  prob.g = [self = *this](const Vec2 &x, const Vec2 &n) { return self.g(x, n); };
  return prob;
}

ExactSolution bessel_exact(double k, int sigma)
{
  if (!(k > 0.0))
  {
    throw std::invalid_argument("bessel_exact: wave number must be positive");
  }
  if (sigma != 1 && sigma != -1)
  {
    throw std::invalid_argument("bessel_exact: sigma must be +1 or -1");
  }
  const Complex denom = k * Complex(bessel_j0(k), bessel_j1(k));
  if (std::abs(denom) < 1e-14)
  {
    throw std::domain_error("bessel_exact: J0(k) + i J1(k) vanishes");
  }
  const Complex C = Complex(std::cos(k), std::sin(k)) / denom;
  // Below this radius the closed forms are replaced by their series limits.
  constexpr double r_small = 1e-8;

  ExactSolution ex;
  ex.name = "bessel";
  ex.k = k;
  ex.sigma = sigma;
  ex.u = [k, C](const Vec2 &x) {
    const double r = x.norm();
    return Complex(std::cos(k * r) / k) - C * bessel_j0(k * r);
  };
  // u'(r) = -sin(kr) + C k J1(kr); u'(r)/r -> -k + C k^2 / 2 at the origin.
  ex.grad_u = [k, C](const Vec2 &x) -> CVec2 {
    const double r = x.norm();
    Complex du_over_r;
    if (r < r_small)
    {
      du_over_r = -k + C * k * k / 2.0;
    }
    else
    {
      du_over_r = (-std::sin(k * r) + C * k * bessel_j1(k * r)) / r;
    }
    return du_over_r * x.cast<Complex>();
  };
  // u'' + u'/r with J1' = J0 - J1/z.
  ex.laplacian_u = [k, C](const Vec2 &x) -> Complex {
    const double r = x.norm();
    if (r < r_small)
    {
      return -2.0 * k + C * k * k;
    }
    const double z = k * r;
    const double j0 = bessel_j0(z), j1 = bessel_j1(z);
    const Complex d1 = -std::sin(z) + C * k * j1;
    const Complex d2 = -k * std::cos(z) + C * k * k * (j0 - j1 / z);
    return d2 + d1 / r;
  };
  ex.f = [k](const Vec2 &x) -> Complex {
    const double r = x.norm();
    if (r < r_small)
    {
      return k - k * k * k * r * r / 6.0;
    }
    return std::sin(k * r) / r;
  };
  return ex;
}

ExactSolution polynomial_exact(double k, int sigma)
{
  if (!(k > 0.0))
  {
    throw std::invalid_argument("polynomial_exact: wave number must be positive");
  }
  if (sigma != 1 && sigma != -1)
  {
    throw std::invalid_argument("polynomial_exact: sigma must be +1 or -1");
  }
  ExactSolution ex;
  ex.name = "polynomial";
  ex.k = k;
  ex.sigma = sigma;
  ex.u = [](const Vec2 &x) { return Complex(x.x() + x.y()); };
  ex.grad_u = [](const Vec2 &) { return CVec2(1.0, 1.0); };
  ex.laplacian_u = [](const Vec2 &) { return Complex(0.0); };
  ex.f = [k](const Vec2 &x) { return Complex(-k * k * (x.x() + x.y())); };
  return ex;
}

}  // namespace fosls
