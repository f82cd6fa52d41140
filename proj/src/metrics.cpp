// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/metrics.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "fosls/assembly.hpp"
#include "fosls/solve.hpp"

namespace fosls
{

ErrorReport compute_errors(const FESpacePair &spaces, const CVector &coeff,
                           const ExactSolution &exact)
{
  if (coeff.size() != spaces.ndof())
  {
    throw std::invalid_argument("compute_errors: coefficient length mismatch");
  }
  const Mesh &mesh = *spaces.mesh;
  const ElementTables &tab = *spaces.tables;
  double err_u = 0.0, err_phi = 0.0, norm_u = 0.0, norm_phi = 0.0;
  CVector rl, ll;
  for (int t = 0; t < mesh.num_triangles(); t++)
  {
    const AffineMap map = element_map(mesh, t);
    gather(spaces, t, coeff, rl, ll);
    const Eigen::Matrix2cd Bc = map.B.cast<Complex>() / map.detB;
    const CVector uh = tab.lag_volume.values.cast<Complex>() * ll;
    const CVector phx = tab.rt_volume.vx.cast<Complex>() * rl;
    const CVector phy = tab.rt_volume.vy.cast<Complex>() * rl;
    for (int q = 0; q < tab.volume.size(); q++)
    {
      const Vec2 x = map(tab.volume.points[q]);
      const double w = tab.volume.weights[q] * map.detB;
      const Complex u = exact.u(x);
      const CVec2 phi = exact.phi(x);
      const CVec2 phih = Bc * CVec2(phx(q), phy(q));
      err_u += w * std::norm(u - uh(q));
      norm_u += w * std::norm(u);
      err_phi += w * (phi - phih).squaredNorm();
      norm_phi += w * phi.squaredNorm();
    }
  }
  ErrorReport rep;
  rep.rel_err_u = norm_u > 0.0 ? std::sqrt(err_u / norm_u) : std::sqrt(err_u);
  rep.rel_err_phi = norm_phi > 0.0 ? std::sqrt(err_phi / norm_phi) : std::sqrt(err_phi);
  rep.fosls_residual = residual_functional(spaces, coeff, exact.problem());
  rep.ndof = spaces.ndof();
  rep.h = mesh.h;
  rep.k = exact.k;
  rep.p_plus_1 = spaces.order;
  rep.kh_over_p = exact.k * mesh.h / spaces.order;
  return rep;
}

Complex evaluate_u(const FESpacePair &spaces, const CVector &coeff, const Vec2 &x)
{
  const Mesh &mesh = *spaces.mesh;
  const int t = mesh.locate(x);
  const AffineMap map = element_map(mesh, t);
  const std::array<Vec2, 1> pt = {map.inverse(x)};
  const LagrangeTabulation tab = spaces.tables->lag.tabulate(pt);
  const auto wd = spaces.w_dofs_of(t);
  Complex u = 0.0;
  for (int i = 0; i < spaces.lag_local; i++)
  {
    u += tab.values(0, i) * coeff(spaces.n_V + wd[i]);
  }
  return u;
}

namespace
{

double sample_coordinate(double lo, double hi, int i, int m)
{
  if (m == 1)
  {
    return 0.5 * (lo + hi);
  }
  return (i == m - 1) ? hi : lo + (hi - lo) * i / (m - 1);
}

}  // namespace

std::vector<TraceSample> sample_trace(const FESpacePair &spaces, const CVector &coeff,
                                      double y, int m)
{
  const DomainBox &box = spaces.mesh->box;
  if (y < box.ymin || y > box.ymax)
  {
    throw std::out_of_range("sample_trace: line y = " + std::to_string(y) +
                            " does not intersect the domain");
  }
  if (m < 1)
  {
    throw std::invalid_argument("sample_trace: need at least one sample");
  }
  std::vector<TraceSample> out;
  out.reserve(m);
  for (int i = 0; i < m; i++)
  {
    const double x = sample_coordinate(box.xmin, box.xmax, i, m);
    out.push_back({x, evaluate_u(spaces, coeff, Vec2(x, y))});
  }
  return out;
}

std::vector<GridSample> sample_grid(const FESpacePair &spaces, const CVector &coeff, int m)
{
  if (m < 1)
  {
    throw std::invalid_argument("sample_grid: need at least one sample per side");
  }
  const DomainBox &box = spaces.mesh->box;
  std::vector<GridSample> out;
  out.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; j++)
  {
    const double y = sample_coordinate(box.ymin, box.ymax, j, m);
    for (int i = 0; i < m; i++)
    {
      const double x = sample_coordinate(box.xmin, box.xmax, i, m);
      out.push_back({x, y, evaluate_u(spaces, coeff, Vec2(x, y))});
    }
  }
  return out;
}

namespace
{

// Rayleigh-Ritz on span(Y) for the pencil (B, M); returns Ritz values ascending and
// overwrites X with the Ritz vectors.
Eigen::VectorXd rayleigh_ritz(const SparseMatrix &B, const SparseMatrix &M,
                              const Eigen::MatrixXcd &Y, Eigen::MatrixXcd &X)
{
  const Eigen::Index n = Y.rows(), block = Y.cols();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
  const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, block);
  const Eigen::MatrixXcd Bs = Q.adjoint() * (B * Q);
  const Eigen::MatrixXcd Ms = Q.adjoint() * (M * Q);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(0.5 * (Bs + Bs.adjoint()),
                                                                 0.5 * (Ms + Ms.adjoint()));
  if (ges.info() != Eigen::Success)
  {
    throw std::runtime_error("coercivity_probe: Rayleigh-Ritz step failed");
  }
  X = Q * ges.eigenvectors();
  return ges.eigenvalues();
}

}  // namespace

CoercivityResult coercivity_probe(const FESpacePair &spaces, double k, int sigma,
                                  long long max_dofs, int max_iterations, double tol)
{
  if (spaces.ndof() > max_dofs)
  {
    throw std::length_error("coercivity_probe: " + std::to_string(spaces.ndof()) +
                            " unknowns exceed the cap " + std::to_string(max_dofs));
  }
  ProblemSpec zero;
  zero.k = k;
  zero.sigma = sigma;
  zero.f = [](const Vec2 &) { return Complex(0.0); };
  zero.g = [](const Vec2 &, const Vec2 &) { return Complex(0.0); };
  auto sp = std::make_shared<const FESpacePair>(spaces);
  const FoslsSystem sys = assemble(sp, zero);
  const SparseMatrix M = assemble_gram(spaces, k, sigma);
  // Throws if M is not positive definite.
  { HermitianFactorization check(M); }

  const int n = spaces.ndof();
  const int block = std::min(n, 8);
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd X(n, block);
  for (int j = 0; j < block; j++)
  {
    for (int i = 0; i < n; i++)
    {
      X(i, j) = Complex(normal(rng), normal(rng));
    }
  }

  CoercivityResult out;
  out.ndof = n;
  // B - tau M is positive definite exactly when tau < lambda_min. Keep certified bounds
  // lower <= lambda_min <= upper: a successful factorization raises lower, a failed one or
  // a Ritz value lowers upper. Subspace iteration always uses the best certified shift.
  constexpr int sweeps_per_shift = 3;
  auto chol = std::make_unique<HermitianFactorization>(sys.B);
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double previous = upper;
  for (int it = 0; it < max_iterations; it++)
  {
    const double theta = rayleigh_ritz(sys.B, M, chol->solve(Eigen::MatrixXcd(M * X)), X)(0);
    upper = std::min(upper, theta);
    out.lambda_min = upper;
    out.iterations = it + 1;
    if (upper - lower <= tol * upper || std::abs(theta - previous) <= tol * theta)
    {
      return out;
    }
    previous = theta;
    if ((it + 1) % sweeps_per_shift == 0)
    {
      const double tau = lower + 0.75 * (upper - lower);
      try
      {
        chol = std::make_unique<HermitianFactorization>(SparseMatrix(sys.B - tau * M));
        lower = tau;
      }
      catch (const SolverError &)
      {
        upper = tau;
      }
    }
  }
  throw std::runtime_error("coercivity_probe: no convergence after " +
                           std::to_string(max_iterations) + " iterations");
}

}  // namespace fosls
