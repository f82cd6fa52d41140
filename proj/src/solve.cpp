// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/solve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef FOSLS_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#else
#include <Eigen/SparseCholesky>
#endif

namespace fosls
{

SolverKind parse_solver_kind(const std::string &name)
{
  if (name == "direct")
  {
    return SolverKind::Direct;
  }
  if (name == "cg")
  {
    return SolverKind::Cg;
  }
  if (name == "auto")
  {
    return SolverKind::Auto;
  }
  throw std::invalid_argument("unknown solver '" + name + "' (expected direct, cg or auto)");
}

std::string to_string(SolverKind kind)
{
  switch (kind)
  {
    case SolverKind::Direct:
      return "direct";
    case SolverKind::Cg:
      return "cg";
    default:
      return "auto";
  }
}

struct HermitianFactorization::Impl
{
#ifdef FOSLS_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
#endif
};

HermitianFactorization::HermitianFactorization(const SparseMatrix &A)
    : impl_(std::make_unique<Impl>()), size_(static_cast<int>(A.rows()))
{
  if (A.rows() != A.cols())
  {
    throw SolverError("factorization: matrix is not square");
  }
#ifdef FOSLS_HAVE_CHOLMOD
  // Indefinite input is reported through info(); keep CHOLMOD quiet about it.
  impl_->llt.cholmod().print = 1;
#endif
  impl_->llt.compute(A);
  if (impl_->llt.info() != Eigen::Success)
  {
    throw SolverError("factorization: non-positive pivot (matrix is not positive definite)");
  }
}

HermitianFactorization::~HermitianFactorization() = default;

CVector HermitianFactorization::solve(const CVector &b) const
{
  if (b.size() != size_)
  {
    throw SolverError("factorization: right-hand side dimension mismatch");
  }
  return impl_->llt.solve(b);
}

Eigen::MatrixXcd HermitianFactorization::solve(const Eigen::MatrixXcd &b) const
{
  if (b.rows() != size_)
  {
    throw SolverError("factorization: right-hand side dimension mismatch");
  }
  return impl_->llt.solve(b);
}

std::string HermitianFactorization::backend()
{
#ifdef FOSLS_HAVE_CHOLMOD
  return "cholmod-supernodal";
#else
  return "eigen-simplicial";
#endif
}

double relative_residual(const SparseMatrix &B, const CVector &x, const CVector &rhs)
{
  const double nb = rhs.norm();
  const double nr = (B * x - rhs).norm();
  return nb > 0.0 ? nr / nb : nr;
}

namespace
{

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolveResult solve_direct(const SparseMatrix &B, const CVector &rhs, double tol)
{
  if (B.rows() != rhs.size())
  {
    throw SolverError("solve_direct: dimension mismatch");
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult out;
  out.report.method = "direct";
  if (rhs.norm() == 0.0)
  {
    out.x = CVector::Zero(rhs.size());
    out.report.seconds = seconds_since(t0);
    return out;
  }
  HermitianFactorization chol(B);
  out.x = chol.solve(rhs);
  double res = relative_residual(B, out.x, rhs);
  for (int step = 0; step < 3 && res > tol; step++)
  {
    out.x += chol.solve(CVector(rhs - B * out.x));
    res = relative_residual(B, out.x, rhs);
  }
  out.report.relative_residual = res;
  out.report.seconds = seconds_since(t0);
  if (!(res <= tol))
  {
    throw SolverError("solve_direct: relative residual " + sci(res) + " above tolerance " + sci(tol),
                      out.x, res);
  }
  return out;
}

SolveResult solve_direct(const FoslsSystem &sys, double tol)
{
  return solve_direct(sys.B, sys.rhs, tol);
}

SolveResult solve_cg(const SparseMatrix &B, const CVector &rhs, double tol, int maxit)
{
  if (!(tol > 0.0))
  {
    throw std::invalid_argument("solve_cg: tolerance must be positive");
  }
  if (B.rows() != rhs.size() || B.cols() != rhs.size())
  {
    throw SolverError("solve_cg: dimension mismatch");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(rhs.size());
  SolveResult out;
  out.report.method = "cg";
  out.x = CVector::Zero(n);
  const double nb = rhs.norm();
  if (nb == 0.0)
  {
    out.report.seconds = seconds_since(t0);
    return out;
  }
  Eigen::VectorXd inv_diag(n);
  for (int i = 0; i < n; i++)
  {
    const double d = B.coeff(i, i).real();
    if (!(d > 0.0))
    {
      throw SolverError("solve_cg: non-positive diagonal entry");
    }
    inv_diag(i) = 1.0 / d;
  }
  CVector r = rhs;
  CVector z = inv_diag.cwiseProduct(r);
  CVector p = z;
  Complex rz = r.dot(z);
  double res = 1.0;
  CVector best = out.x;
  double best_res = res;
  for (int it = 1; it <= maxit; it++)
  {
    const CVector Ap = B * p;
    const Complex alpha = rz / p.dot(Ap);
    out.x += alpha * p;
    r -= alpha * Ap;
    res = r.norm() / nb;
    if (res < best_res)
    {
      best_res = res;
      best = out.x;
    }
    if (res <= tol)
    {
      out.report.iterations = it;
      out.report.relative_residual = relative_residual(B, out.x, rhs);
      out.report.seconds = seconds_since(t0);
      return out;
    }
    z = inv_diag.cwiseProduct(r);
    const Complex rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolverError("solve_cg: no convergence within " + std::to_string(maxit) +
                        " iterations (relative residual " + sci(best_res) + ")",
                    best, best_res);
}

SolveResult solve_cg(const FoslsSystem &sys, double tol, int maxit)
{
  return solve_cg(sys.B, sys.rhs, tol, maxit);
}

SolveResult solve(const FoslsSystem &sys, const SolverOptions &opts)
{
  SolverKind kind = opts.kind;
  if (kind == SolverKind::Auto)
  {
    kind = (sys.size() <= opts.direct_max_dofs) ? SolverKind::Direct : SolverKind::Cg;
  }
  return kind == SolverKind::Direct ? solve_direct(sys, opts.tol)
                                    : solve_cg(sys, opts.tol, opts.maxit);
}

}  // namespace fosls
