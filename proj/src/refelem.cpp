// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/refelem.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace fosls
{

namespace
{

constexpr double kCentroid = 1.0 / 3.0;

// Powers x^0..x^n.
void powers(double x, int n, double *out)
{
  out[0] = 1.0;
  for (int i = 1; i <= n; i++)
  {
    out[i] = out[i - 1] * x;
  }
}

}  // namespace

void check_order(int p_plus_1)
{
  if (p_plus_1 < 1 || p_plus_1 > kMaxOrder)
  {
    throw std::invalid_argument("element order p+1 must lie in 1.." + std::to_string(kMaxOrder) +
                                ", got " + std::to_string(p_plus_1));
  }
}

const ReferenceEdge &reference_edge(int j)
{
  static const std::array<ReferenceEdge, 3> edges = [] {
    const std::array<Vec2, 3> v = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    std::array<ReferenceEdge, 3> out;
    for (int j = 0; j < 3; j++)
    {
      out[j].start = v[(j + 1) % 3];
      out[j].end = v[(j + 2) % 3];
      const Vec2 t = out[j].end - out[j].start;
      out[j].length = t.norm();
      out[j].normal = Vec2(t.y(), -t.x()) / out[j].length;
    }
    return out;
  }();
  return edges.at(j);
}

double shifted_legendre(int m, double s)
{
  const double x = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = x;
  if (m == 0)
  {
    return p0;
  }
  for (int n = 1; n < m; n++)
  {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

//
// LagrangeBasis
//

LagrangeBasis::LagrangeBasis(int p_plus_1) : order_(p_plus_1)
{
  check_order(p_plus_1);
  const int q = order_;
  nodes_ = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  for (int j = 0; j < 3; j++)
  {
    for (int m = 1; m < q; m++)
    {
      nodes_.push_back(reference_edge(j).point(static_cast<double>(m) / q));
    }
  }
  for (int j = 1; j < q; j++)
  {
    for (int i = 1; i + j < q; i++)
    {
      nodes_.emplace_back(static_cast<double>(i) / q, static_cast<double>(j) / q);
    }
  }
  for (int d = 0; d <= q; d++)
  {
    for (int b = 0; b <= d; b++)
    {
      exponents_.push_back({d - b, b});
    }
  }
  const int n = dim();
  if (static_cast<int>(exponents_.size()) != n)
  {
    throw std::logic_error("LagrangeBasis: node count does not match dim P_{p+1}");
  }
  Eigen::MatrixXd V(n, n);
  double px[kMaxOrder + 1], py[kMaxOrder + 1];
  for (int i = 0; i < n; i++)
  {
    powers(nodes_[i].x() - kCentroid, q, px);
    powers(nodes_[i].y() - kCentroid, q, py);
    for (int k = 0; k < n; k++)
    {
      V(i, k) = px[exponents_[k][0]] * py[exponents_[k][1]];
    }
  }
  coeffs_ = V.fullPivLu().inverse();
}

LagrangeTabulation LagrangeBasis::tabulate(std::span<const Vec2> points) const
{
  const int n = dim(), np = static_cast<int>(points.size()), q = order_;
  Eigen::MatrixXd mv(np, n), mdx(np, n), mdy(np, n);
  double px[kMaxOrder + 1], py[kMaxOrder + 1];
  for (int i = 0; i < np; i++)
  {
    powers(points[i].x() - kCentroid, q, px);
    powers(points[i].y() - kCentroid, q, py);
    for (int k = 0; k < n; k++)
    {
      const int a = exponents_[k][0], b = exponents_[k][1];
      mv(i, k) = px[a] * py[b];
      mdx(i, k) = a > 0 ? a * px[a - 1] * py[b] : 0.0;
      mdy(i, k) = b > 0 ? b * px[a] * py[b - 1] : 0.0;
    }
  }
  return {mv * coeffs_, mdx * coeffs_, mdy * coeffs_};
}

//
// OrthonormalPolynomials
//

namespace
{

std::vector<std::array<int, 2>> graded_exponents(int degree)
{
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; d++)
  {
    for (int b = 0; b <= d; b++)
    {
      out.push_back({d - b, b});
    }
  }
  return out;
}

}  // namespace

OrthonormalPolynomials::OrthonormalPolynomials(int degree)
    : degree_(degree), exponents_(graded_exponents(degree))
{
  const int n = size();
  const QuadratureRule rule = triangle_quadrature(2 * degree + 2);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  double ps[kMaxOrder + 2], pt[kMaxOrder + 2];
  Eigen::VectorXd m(n);
  for (int q = 0; q < rule.size(); q++)
  {
    powers(rule.points[q].x() - kCentroid, degree, ps);
    powers(rule.points[q].y() - kCentroid, degree, pt);
    for (int i = 0; i < n; i++)
    {
      m(i) = ps[exponents_[i][0]] * pt[exponents_[i][1]];
    }
    G.noalias() += rule.weights[q] * m * m.transpose();
  }
  // G = L L^T; the columns of L^{-T} are orthonormal and graded (L is lower triangular).
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
  {
    throw std::logic_error("OrthonormalPolynomials: singular monomial Gram matrix");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  coeffs_ = L.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
}

void OrthonormalPolynomials::eval(const Vec2 &x, Eigen::VectorXd &values, Eigen::VectorXd &dx,
                                  Eigen::VectorXd &dy) const
{
  const int n = size();
  double ps[kMaxOrder + 2], pt[kMaxOrder + 2];
  powers(x.x() - kCentroid, degree_, ps);
  powers(x.y() - kCentroid, degree_, pt);
  Eigen::VectorXd mv(n), mdx(n), mdy(n);
  for (int i = 0; i < n; i++)
  {
    const int a = exponents_[i][0], b = exponents_[i][1];
    mv(i) = ps[a] * pt[b];
    mdx(i) = a > 0 ? a * ps[a - 1] * pt[b] : 0.0;
    mdy(i) = b > 0 ? b * ps[a] * pt[b - 1] : 0.0;
  }
  values.noalias() = coeffs_.transpose() * mv;
  dx.noalias() = coeffs_.transpose() * mdx;
  dy.noalias() = coeffs_.transpose() * mdy;
}

//
// RTBasis
//

RTBasis::RTBasis(int p_plus_1)
    : order_((check_order(p_plus_1), p_plus_1)), poly_(p_plus_1), test_poly_(p_plus_1 - 1)
{
  const int q = order_;
  const int full = OrthonormalPolynomials::count(q);
  for (int kind = 0; kind < 2; kind++)
  {
    for (int i = 0; i < full; i++)
    {
      span_.push_back({kind, i});
    }
  }
  for (int i = OrthonormalPolynomials::count(q - 1); i < full; i++)
  {
    span_.push_back({2, i});
  }
  const int n = dim();

  // Rank of the spanning set, from values at more points than unknowns.
  {
    const QuadratureRule sample = triangle_quadrature(2 * q + 6);
    Eigen::MatrixXd S(2 * sample.size(), n);
    Eigen::VectorXd vx, vy, dv;
    for (int i = 0; i < sample.size(); i++)
    {
      eval_span(sample.points[i], vx, vy, dv);
      S.row(2 * i) = vx.transpose();
      S.row(2 * i + 1) = vy.transpose();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    qr.setThreshold(1e-12);
    span_rank_ = static_cast<int>(qr.rank());
  }
  const int num_functionals = 3 * (q + 1) + 2 * test_poly_.size();
  if (span_rank_ != n || num_functionals != n)
  {
    throw std::logic_error("RTBasis: span rank " + std::to_string(span_rank_) +
                           " does not match " + std::to_string(num_functionals) +
                           " degrees of freedom");
  }

  vandermonde_.resize(n, n);
  for (int k = 0; k < n; k++)
  {
    auto field = [this, k](const Vec2 &x) {
      Eigen::VectorXd vx, vy, dv;
      eval_span(x, vx, vy, dv);
      return CVec2(vx(k), vy(k));
    };
    vandermonde_.col(k) = functionals_of(field).real();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(vandermonde_);
  const auto &sv = svd.singularValues();
  condition_ = sv(0) / sv(sv.size() - 1);
  if (!(condition_ <= 1e10))
  {
    throw std::runtime_error("RTBasis: ill-conditioned dual set (condition number " +
                             std::to_string(condition_) + ")");
  }
  coeffs_ = vandermonde_.fullPivLu().inverse();
}

void RTBasis::eval_span(const Vec2 &x, Eigen::VectorXd &vx, Eigen::VectorXd &vy,
                        Eigen::VectorXd &div) const
{
  const int n = dim();
  Eigen::VectorXd w, wx, wy;
  poly_.eval(x, w, wx, wy);
  const double s = x.x() - kCentroid, t = x.y() - kCentroid;
  vx.resize(n);
  vy.resize(n);
  div.resize(n);
  for (int k = 0; k < n; k++)
  {
    const auto [kind, i] = span_[k];
    switch (kind)
    {
      case 0:
        vx(k) = w(i);
        vy(k) = 0.0;
        div(k) = wx(i);
        break;
      case 1:
        vx(k) = 0.0;
        vy(k) = w(i);
        div(k) = wy(i);
        break;
      default:
        vx(k) = s * w(i);
        vy(k) = t * w(i);
        div(k) = 2.0 * w(i) + s * wx(i) + t * wy(i);
        break;
    }
  }
}

CVector RTBasis::functionals_of(const std::function<CVec2(const Vec2 &)> &field) const
{
  const int q = order_;
  const EdgeQuadratureRule erule = edge_quadrature(quadrature_degree(q) + 2);
  const QuadratureRule vrule = triangle_quadrature(quadrature_degree(q) + 2);
  const int ntest = test_poly_.size();
  CVector out = CVector::Zero(3 * (q + 1) + 2 * ntest);
  for (int j = 0; j < 3; j++)
  {
    const ReferenceEdge &edge = reference_edge(j);
    for (int i = 0; i < erule.size(); i++)
    {
      const double s = erule.points[i];
      const Complex flux = edge.normal.cast<Complex>().dot(field(edge.point(s)));
      const double w = erule.weights[i] * edge.length;
      for (int m = 0; m <= q; m++)
      {
        out(j * (q + 1) + m) += w * flux * shifted_legendre(m, s);
      }
    }
  }
  const int base = 3 * (q + 1);
  Eigen::VectorXd tv, tdx, tdy;
  for (int i = 0; i < vrule.size(); i++)
  {
    const CVec2 v = field(vrule.points[i]);
    test_poly_.eval(vrule.points[i], tv, tdx, tdy);
    for (int c = 0; c < 2; c++)
    {
      for (int m = 0; m < ntest; m++)
      {
        out(base + c * ntest + m) += vrule.weights[i] * v(c) * tv(m);
      }
    }
  }
  return out;
}

CVector RTBasis::apply_functionals(const std::function<CVec2(const Vec2 &)> &field) const
{
  return functionals_of(field);
}

RTTabulation RTBasis::tabulate(std::span<const Vec2> points) const
{
  const int n = dim(), np = static_cast<int>(points.size());
  Eigen::MatrixXd mx(np, n), my(np, n), md(np, n);
  Eigen::VectorXd vx, vy, dv;
  for (int i = 0; i < np; i++)
  {
    eval_span(points[i], vx, vy, dv);
    mx.row(i) = vx.transpose();
    my.row(i) = vy.transpose();
    md.row(i) = dv.transpose();
  }
  return {mx * coeffs_, my * coeffs_, md * coeffs_};
}

//
// Piola transform
//

PiolaPushed piola_push(const AffineMap &map, std::span<const Vec2> ref_values,
                       std::span<const double> ref_divergences)
{
  if (!(map.detB > 0.0))
  {
    throw std::invalid_argument("piola_push: singular or orientation-reversing map");
  }
  PiolaPushed out;
  out.values.reserve(ref_values.size());
  out.divergences.reserve(ref_divergences.size());
  for (const Vec2 &v : ref_values)
  {
    out.values.push_back(map.B * v / map.detB);
  }
  for (double d : ref_divergences)
  {
    out.divergences.push_back(d / map.detB);
  }
  return out;
}

Vec2 mapped_edge_normal(const AffineMap &map, int j)
{
  return (map.invB.transpose() * reference_edge(j).normal).normalized();
}

double mapped_edge_length(const AffineMap &map, int j)
{
  const ReferenceEdge &e = reference_edge(j);
  return (map.B * (e.end - e.start)).norm();
}

double piola_normal_trace(const AffineMap &map, int j, const Vec2 &ref_value)
{
  if (!(map.detB > 0.0))
  {
    throw std::invalid_argument("piola_normal_trace: singular or orientation-reversing map");
  }
  return (map.B * ref_value / map.detB).dot(mapped_edge_normal(map, j));
}

CVector rt_interpolate(const std::function<CVec2(const Vec2 &)> &field, const AffineMap &map,
                       const RTBasis &basis)
{
  const Eigen::Matrix2cd pull = (map.detB * map.invB).cast<Complex>();
  return basis.apply_functionals([&](const Vec2 &xhat) { return CVec2(pull * field(map(xhat))); });
}

//
// ElementTables
//

ElementTables::ElementTables(int p_plus_1)
    : order(p_plus_1),
      rt(p_plus_1),
      lag(p_plus_1),
      volume(triangle_quadrature(quadrature_degree(p_plus_1))),
      rt_volume(rt.tabulate(volume.points)),
      lag_volume(lag.tabulate(volume.points)),
      edge(edge_quadrature(quadrature_degree(p_plus_1)))
{
  for (int j = 0; j < 3; j++)
  {
    for (double s : edge.points)
    {
      edge_points[j].push_back(reference_edge(j).point(s));
    }
    rt_edge[j] = rt.tabulate(edge_points[j]);
    lag_edge[j] = lag.tabulate(edge_points[j]);
  }
}

std::shared_ptr<const ElementTables> ElementTables::get(int p_plus_1)
{
  check_order(p_plus_1);
  static std::mutex mutex;
  static std::array<std::shared_ptr<const ElementTables>, kMaxOrder + 1> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[p_plus_1])
  {
    cache[p_plus_1] = std::make_shared<const ElementTables>(p_plus_1);
  }
  return cache[p_plus_1];
}

}  // namespace fosls
