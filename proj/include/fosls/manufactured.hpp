// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_MANUFACTURED_HPP
#define FOSLS_MANUFACTURED_HPP

#include <functional>
#include <string>

#include "fosls/problem.hpp"
#include "fosls/types.hpp"

namespace fosls
{

// Bessel functions of the first kind for x >= 0. Ascending series (extended precision)
// below x = 14, Hankel amplitude-phase asymptotics above. Absolute error below 1e-13 on
// [0, 500].
double bessel_j0(double x);
double bessel_j1(double x);

// Exact solution (u, phi = i k^{-1} grad u) with its data.
struct ExactSolution
{
  std::string name;
  double k = 1.0;
  int sigma = 1;
  std::function<Complex(const Vec2 &)> u;
  std::function<CVec2(const Vec2 &)> grad_u;
  std::function<Complex(const Vec2 &)> laplacian_u;
  std::function<Complex(const Vec2 &)> f;

  CVec2 phi(const Vec2 &x) const { return (kI / k) * grad_u(x); }
  // g = du/dn - sigma i k u.
  Complex g(const Vec2 &x, const Vec2 &n) const;

  ProblemSpec problem() const;
};

// Radial benchmark on the centered unit square:
//   f = sin(kr)/r,  u = cos(kr)/k - C J0(kr),  C = (cos k + i sin k) / (k (J0(k) + i J1(k))).
ExactSolution bessel_exact(double k, int sigma = -1);

// u = x + y, f = -k^2 (x+y), phi = (i/k)(1,1); lies in V_h x W_h for every order.
ExactSolution polynomial_exact(double k, int sigma = 1);

}  // namespace fosls

#endif  // FOSLS_MANUFACTURED_HPP
