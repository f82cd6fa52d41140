// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_SOLVE_HPP
#define FOSLS_SOLVE_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "fosls/assembly.hpp"
#include "fosls/types.hpp"

namespace fosls
{

enum class SolverKind
{
  Direct,
  Cg,
  Auto
};

SolverKind parse_solver_kind(const std::string &name);
std::string to_string(SolverKind kind);

struct SolverOptions
{
  SolverKind kind = SolverKind::Auto;
  double tol = 1e-10;
  int maxit = 20000;
  // Auto picks the direct path up to this many unknowns.
  long long direct_max_dofs = 600000;
};

struct SolveReport
{
  std::string method;  // "direct" or "cg"
  int iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
};

struct SolveResult
{
  CVector x;
  SolveReport report;
};

class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string &what, CVector best = {}, double residual = 0.0)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual)
  {
  }
  const CVector &best_iterate() const { return best_; }
  double residual() const { return residual_; }

private:
  CVector best_;
  double residual_;
};

// Sparse Cholesky factorization of a Hermitian positive-definite matrix (lower triangle
// is read). Throws SolverError on a non-positive pivot.
class HermitianFactorization
{
public:
  explicit HermitianFactorization(const SparseMatrix &A);
  ~HermitianFactorization();
  HermitianFactorization(const HermitianFactorization &) = delete;
  HermitianFactorization &operator=(const HermitianFactorization &) = delete;

  CVector solve(const CVector &b) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd &b) const;
  int size() const { return size_; }

  static std::string backend();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int size_ = 0;
};

double relative_residual(const SparseMatrix &B, const CVector &x, const CVector &rhs);

// Cholesky solve with up to three steps of iterative refinement; fails if the relative
// residual stays above tol.
SolveResult solve_direct(const SparseMatrix &B, const CVector &rhs, double tol = 1e-10);
SolveResult solve_direct(const FoslsSystem &sys, double tol = 1e-10);

// Jacobi-preconditioned conjugate gradients in the inner product x^H y.
SolveResult solve_cg(const SparseMatrix &B, const CVector &rhs, double tol, int maxit);
SolveResult solve_cg(const FoslsSystem &sys, double tol, int maxit);

SolveResult solve(const FoslsSystem &sys, const SolverOptions &opts);

}  // namespace fosls

#endif  // FOSLS_SOLVE_HPP
