// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_PROBLEM_HPP
#define FOSLS_PROBLEM_HPP

#include <functional>

#include "fosls/types.hpp"

namespace fosls
{

// -Laplace(u) - k^2 u = f in the domain, du/dn - sigma i k u = g on the boundary.
struct ProblemSpec
{
  double k = 1.0;
  int sigma = 1;
  std::function<Complex(const Vec2 &)> f;
  // Boundary datum at a boundary point x with outward unit normal n.
  std::function<Complex(const Vec2 &x, const Vec2 &n)> g;

  void validate() const;
};

}  // namespace fosls

#endif  // FOSLS_PROBLEM_HPP
