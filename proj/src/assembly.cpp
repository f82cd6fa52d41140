// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fosls
{

void ProblemSpec::validate() const
{
  if (!(k > 0.0))
  {
    throw std::invalid_argument("ProblemSpec: wave number must be positive");
  }
  if (sigma != 1 && sigma != -1)
  {
    throw std::invalid_argument("ProblemSpec: sigma must be +1 or -1");
  }
  if (!f || !g)
  {
    throw std::invalid_argument("ProblemSpec: missing source or boundary data");
  }
}

namespace
{

enum class FormKind
{
  Fosls,
  Gram
};

// Square-root-weighted residual rows R and data d of one element, such that the element
// contribution to the form is R^H R and to the right-hand side R^H d. Columns are local
// DOFs [RT; Lagrange], RT columns already carrying the global orientation sign.
struct ElementOperator
{
  Eigen::MatrixXcd R;
  CVector d;
};

int boundary_edge_count(const Mesh &mesh, int t)
{
  int n = 0;
  for (int j = 0; j < 3; j++)
  {
    n += mesh.edges[mesh.tri_edges[t][j]].boundary ? 1 : 0;
  }
  return n;
}

void check_finite(Complex z, const char *what)
{
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
  {
    throw std::runtime_error(std::string("assemble: non-finite ") + what +
                             " at a quadrature point");
  }
}

void element_operator(const FESpacePair &s, int t, FormKind kind, double k, int sigma,
                      const ProblemSpec *prob, ElementOperator &op)
{
  const Mesh &mesh = *s.mesh;
  const ElementTables &tab = *s.tables;
  const AffineMap map = element_map(mesh, t);
  const int nq = tab.volume.size(), nqe = tab.edge.size();
  const int nrt = s.rt_local, nlag = s.lag_local;
  const int nb = boundary_edge_count(mesh, t);
  const int rows = 3 * nq + nb * nqe;
  op.R.setZero(rows, nrt + nlag);
  op.d.setZero(rows);
  const auto sign = s.v_signs_of(t);
  const Complex ik = kI * k;
  const Mat2 &B = map.B;
  const Mat2 invBT = map.invB.transpose();

  for (int q = 0; q < nq; q++)
  {
    const double sw = std::sqrt(tab.volume.weights[q] * map.detB);
    const int r = 3 * q;
    for (int i = 0; i < nrt; i++)
    {
      const double hx = tab.rt_volume.vx(q, i), hy = tab.rt_volume.vy(q, i);
      const double c = sw * sign[i] / map.detB;
      const double px = c * (B(0, 0) * hx + B(0, 1) * hy);
      const double py = c * (B(1, 0) * hx + B(1, 1) * hy);
      if (kind == FormKind::Fosls)
      {
        op.R(r, i) = ik * px;
        op.R(r + 1, i) = ik * py;
        op.R(r + 2, i) = c * tab.rt_volume.div(q, i);
      }
      else
      {
        op.R(r, i) = px;
        op.R(r + 1, i) = py;
      }
    }
    for (int i = 0; i < nlag; i++)
    {
      const double v = sw * tab.lag_volume.values(q, i);
      if (kind == FormKind::Fosls)
      {
        const Vec2 g =
            sw * (invBT * Vec2(tab.lag_volume.dx(q, i), tab.lag_volume.dy(q, i)));
        op.R(r, nrt + i) = g.x();
        op.R(r + 1, nrt + i) = g.y();
        op.R(r + 2, nrt + i) = ik * v;
      }
      else
      {
        op.R(r + 2, nrt + i) = v;
      }
    }
    if (prob)
    {
      const Complex f = prob->f(map(tab.volume.points[q]));
      check_finite(f, "source");
      op.d(r + 2) = sw * (-kI * f / k);
    }
  }

  int r = 3 * nq;
  for (int j = 0; j < 3; j++)
  {
    if (!mesh.edges[mesh.tri_edges[t][j]].boundary)
    {
      continue;
    }
    const Vec2 n = mapped_edge_normal(map, j);
    const double len = mapped_edge_length(map, j);
    const RTTabulation &rtab = tab.rt_edge[j];
    const LagrangeTabulation &ltab = tab.lag_edge[j];
    for (int q = 0; q < nqe; q++, r++)
    {
      const double sb = std::sqrt(k * tab.edge.weights[q] * len);
      for (int i = 0; i < nrt; i++)
      {
        const Vec2 psi = B * Vec2(rtab.vx(q, i), rtab.vy(q, i)) / map.detB;
        op.R(r, i) = sb * sign[i] * psi.dot(n);
      }
      for (int i = 0; i < nlag; i++)
      {
        op.R(r, nrt + i) = sb * sigma * ltab.values(q, i);
      }
      if (prob)
      {
        const Complex g = prob->g(map(tab.edge_points[j][q]), n);
        check_finite(g, "boundary datum");
        op.d(r) = sb * (kI * g / k);
      }
    }
  }
}

struct ElementResult
{
  Eigen::MatrixXcd A;
  CVector b;
};

void compute_element(const FESpacePair &s, int t, FormKind kind, double k, int sigma,
                     const ProblemSpec *prob, ElementOperator &op, ElementResult &res)
{
  element_operator(s, t, kind, k, sigma, prob, op);
  res.A.noalias() = op.R.adjoint() * op.R;
  if (prob)
  {
    res.b.noalias() = op.R.adjoint() * op.d;
  }
}

std::vector<int> global_dofs(const FESpacePair &s, int t)
{
  std::vector<int> out(s.rt_local + s.lag_local);
  const auto vd = s.v_dofs_of(t);
  const auto wd = s.w_dofs_of(t);
  for (int i = 0; i < s.rt_local; i++)
  {
    out[i] = vd[i];
  }
  for (int i = 0; i < s.lag_local; i++)
  {
    out[s.rt_local + i] = s.n_V + wd[i];
  }
  return out;
}

void assemble_form(const FESpacePair &s, FormKind kind, double k, int sigma,
                   const ProblemSpec *prob, int threads, SparseMatrix &B, CVector *rhs)
{
  const int nt = s.mesh->num_triangles();
  const int nloc = s.rt_local + s.lag_local;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(nt) * nloc * nloc);
  if (rhs)
  {
    rhs->setZero(s.ndof());
  }
  auto merge = [&](int t, const ElementResult &res) {
    const std::vector<int> dofs = global_dofs(s, t);
    for (int j = 0; j < nloc; j++)
    {
      for (int i = 0; i < nloc; i++)
      {
        triplets.emplace_back(dofs[i], dofs[j], res.A(i, j));
      }
    }
    if (rhs)
    {
      for (int i = 0; i < nloc; i++)
      {
        (*rhs)(dofs[i]) += res.b(i);
      }
    }
  };

  threads = std::max(1, threads);
  if (threads == 1)
  {
    ElementOperator op;
    ElementResult res;
    for (int t = 0; t < nt; t++)
    {
      compute_element(s, t, kind, k, sigma, prob, op, res);
      merge(t, res);
    }
  }
  else
  {
    // Element batches computed concurrently, merged serially in element order.
    constexpr int batch = 4096;
    std::vector<ElementResult> results(batch);
    for (int t0 = 0; t0 < nt; t0 += batch)
    {
      const int count = std::min(batch, nt - t0);
      std::vector<std::exception_ptr> errors(threads);
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; w++)
      {
        pool.emplace_back([&, w] {
          try
          {
            ElementOperator op;
            for (int i = w; i < count; i += threads)
            {
              compute_element(s, t0 + i, kind, k, sigma, prob, op, results[i]);
            }
          }
          catch (...)
          {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto &th : pool)
      {
        th.join();
      }
      for (const auto &e : errors)
      {
        if (e)
        {
          std::rethrow_exception(e);
        }
      }
      for (int i = 0; i < count; i++)
      {
        merge(t0 + i, results[i]);
      }
    }
  }
  B.resize(s.ndof(), s.ndof());
  B.setFromTriplets(triplets.begin(), triplets.end());
  B.makeCompressed();
}

}  // namespace

FoslsSystem assemble(std::shared_ptr<const FESpacePair> spaces, const ProblemSpec &prob,
                     const AssemblyOptions &opts)
{
  if (!spaces)
  {
    throw std::invalid_argument("assemble: null spaces");
  }
  prob.validate();
  FoslsSystem sys;
  sys.spaces = spaces;
  sys.k = prob.k;
  sys.sigma = prob.sigma;
  assemble_form(*spaces, FormKind::Fosls, prob.k, prob.sigma, &prob, opts.threads, sys.B,
                &sys.rhs);
  return sys;
}

SparseMatrix assemble_gram(const FESpacePair &spaces, double k, int sigma)
{
  if (!(k > 0.0) || (sigma != 1 && sigma != -1))
  {
    throw std::invalid_argument("assemble_gram: require k > 0 and sigma = +-1");
  }
  SparseMatrix M;
  assemble_form(spaces, FormKind::Gram, k, sigma, nullptr, 1, M, nullptr);
  return M;
}

double residual_functional(const FoslsSystem &sys, const CVector &coeff,
                           const ProblemSpec &prob)
{
  return residual_functional(*sys.spaces, coeff, prob);
}

double residual_functional(const FESpacePair &s, const CVector &coeff, const ProblemSpec &prob)
{
  if (coeff.size() != s.ndof())
  {
    throw std::invalid_argument("residual_functional: coefficient length mismatch");
  }
  prob.validate();
  const Mesh &mesh = *s.mesh;
  const ElementTables &tab = *s.tables;
  const double k = prob.k;
  const Complex ik = kI * k;
  double total = 0.0;
  CVector rl, ll;
  for (int t = 0; t < mesh.num_triangles(); t++)
  {
    const AffineMap map = element_map(mesh, t);
    gather(s, t, coeff, rl, ll);
    const Eigen::Matrix2cd Bc = map.B.cast<Complex>() / map.detB;
    const Eigen::Matrix2cd invBT = map.invB.transpose().cast<Complex>();
    double elem = 0.0;
    for (int q = 0; q < tab.volume.size(); q++)
    {
      const CVec2 ref_phi((tab.rt_volume.vx.row(q).cast<Complex>() * rl)(0),
                          (tab.rt_volume.vy.row(q).cast<Complex>() * rl)(0));
      const CVec2 phi = Bc * ref_phi;
      const Complex div = (tab.rt_volume.div.row(q).cast<Complex>() * rl)(0) / map.detB;
      const Complex u = (tab.lag_volume.values.row(q).cast<Complex>() * ll)(0);
      const CVec2 grad =
          invBT * CVec2((tab.lag_volume.dx.row(q).cast<Complex>() * ll)(0),
                        (tab.lag_volume.dy.row(q).cast<Complex>() * ll)(0));
      const Complex f = prob.f(map(tab.volume.points[q]));
      const double w = tab.volume.weights[q] * map.detB;
      elem += w * ((ik * phi + grad).squaredNorm() + std::norm(ik * u + div + kI * f / k));
    }
    for (int j = 0; j < 3; j++)
    {
      if (!mesh.edges[mesh.tri_edges[t][j]].boundary)
      {
        continue;
      }
      const Vec2 n = mapped_edge_normal(map, j);
      const double len = mapped_edge_length(map, j);
      for (int q = 0; q < tab.edge.size(); q++)
      {
        const CVec2 ref_phi((tab.rt_edge[j].vx.row(q).cast<Complex>() * rl)(0),
                            (tab.rt_edge[j].vy.row(q).cast<Complex>() * rl)(0));
        const Complex flux = n.cast<Complex>().dot(Bc * ref_phi);
        const Complex u = (tab.lag_edge[j].values.row(q).cast<Complex>() * ll)(0);
        const Complex g = prob.g(map(tab.edge_points[j][q]), n);
        elem += k * tab.edge.weights[q] * len *
                std::norm(flux + static_cast<double>(prob.sigma) * u - kI * g / k);
      }
    }
    total += elem;
  }
  return total;
}

double hermitian_defect(const SparseMatrix &B)
{
  const SparseMatrix D = SparseMatrix(B - SparseMatrix(B.adjoint()));
  double dmax = 0.0, bmax = 0.0;
  for (int c = 0; c < D.outerSize(); c++)
  {
    for (SparseMatrix::InnerIterator it(D, c); it; ++it)
    {
      dmax = std::max(dmax, std::abs(it.value()));
    }
  }
  for (int c = 0; c < B.outerSize(); c++)
  {
    for (SparseMatrix::InnerIterator it(B, c); it; ++it)
    {
      bmax = std::max(bmax, std::abs(it.value()));
    }
  }
  return bmax > 0.0 ? dmax / bmax : 0.0;
}

void dump_system(const FoslsSystem &sys, const std::string &matrix_path,
                 const std::string &rhs_path)
{
  std::FILE *fm = std::fopen(matrix_path.c_str(), "w");
  if (!fm)
  {
    throw std::runtime_error("dump_system: cannot open " + matrix_path);
  }
  for (int c = 0; c < sys.B.outerSize(); c++)
  {
    for (SparseMatrix::InnerIterator it(sys.B, c); it; ++it)
    {
      std::fprintf(fm, "%lld %lld %.17g %.17g\n", static_cast<long long>(it.row()),
                   static_cast<long long>(it.col()), it.value().real(), it.value().imag());
    }
  }
  std::fclose(fm);
  std::FILE *fr = std::fopen(rhs_path.c_str(), "w");
  if (!fr)
  {
    throw std::runtime_error("dump_system: cannot open " + rhs_path);
  }
  for (int i = 0; i < sys.rhs.size(); i++)
  {
    std::fprintf(fr, "%d %.17g %.17g\n", i, sys.rhs(i).real(), sys.rhs(i).imag());
  }
  std::fclose(fr);
}

}  // namespace fosls
