// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_TYPES_HPP
#define FOSLS_TYPES_HPP

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fosls
{

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2d;
using CVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace fosls

#endif  // FOSLS_TYPES_HPP
