// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/space.hpp"

#include <stdexcept>

namespace fosls
{

FESpacePair build_spaces(std::shared_ptr<const Mesh> mesh, int p_plus_1)
{
  if (!mesh)
  {
    throw std::invalid_argument("build_spaces: null mesh");
  }
  FESpacePair s;
  s.mesh = mesh;
  s.tables = ElementTables::get(p_plus_1);
  s.order = p_plus_1;
  const RTBasis &rt = s.tables->rt;
  const LagrangeBasis &lag = s.tables->lag;
  s.rt_local = rt.dim();
  s.lag_local = lag.dim();

  const int nt = mesh->num_triangles(), ne = mesh->num_edges(), nv = mesh->num_vertices();
  const int per_edge_v = rt.dofs_per_edge(), interior_v = rt.num_interior_dofs();
  const int per_edge_w = lag.nodes_per_edge(), interior_w = lag.num_interior();
  s.n_V = ne * per_edge_v + nt * interior_v;
  s.n_W = nv + ne * per_edge_w + nt * interior_w;

  s.v_dofs.resize(static_cast<std::size_t>(nt) * s.rt_local);
  s.v_signs.resize(s.v_dofs.size());
  s.w_dofs.resize(static_cast<std::size_t>(nt) * s.lag_local);
  for (int t = 0; t < nt; t++)
  {
    int *vd = s.v_dofs.data() + static_cast<std::size_t>(t) * s.rt_local;
    double *vs = s.v_signs.data() + static_cast<std::size_t>(t) * s.rt_local;
    int *wd = s.w_dofs.data() + static_cast<std::size_t>(t) * s.lag_local;
    for (int j = 0; j < 3; j++)
    {
      const int e = mesh->tri_edges[t][j];
      const bool reversed = mesh->edge_reversed(t, j);
      for (int m = 0; m < per_edge_v; m++)
      {
        const int loc = rt.edge_dof(j, m);
        vd[loc] = e * per_edge_v + m;
        // Global functional uses the global normal and a parameter running from the
        // smaller vertex; odd Legendre degrees flip under reversal.
        vs[loc] = reversed ? ((m % 2 == 0) ? 1.0 : -1.0) : -1.0;
      }
      for (int m = 1; m <= per_edge_w; m++)
      {
        const int pos = reversed ? (per_edge_w - m) : (m - 1);
        wd[lag.edge_node(j, m)] = nv + e * per_edge_w + pos;
      }
    }
    for (int i = 0; i < interior_v; i++)
    {
      vd[rt.num_edge_dofs() + i] = ne * per_edge_v + t * interior_v + i;
      vs[rt.num_edge_dofs() + i] = 1.0;
    }
    for (int v = 0; v < 3; v++)
    {
      wd[v] = mesh->triangles[t][v];
    }
    for (int i = 0; i < interior_w; i++)
    {
      wd[lag.interior_node(i)] = nv + ne * per_edge_w + t * interior_w + i;
    }
  }
  return s;
}

long long predicted_ndof(int n, int p_plus_1)
{
  const long long q = p_plus_1, nn = n;
  const long long nt = 2 * nn * nn, ne = 3 * nn * nn + 2 * nn, nv = (nn + 1) * (nn + 1);
  const long long n_V = ne * (q + 1) + nt * q * (q + 1);
  const long long n_W = nv + ne * (q - 1) + nt * (q - 1) * (q - 2) / 2;
  return n_V + n_W;
}

BoundaryDofs boundary_dofs(const FESpacePair &spaces)
{
  const Mesh &mesh = *spaces.mesh;
  const RTBasis &rt = spaces.tables->rt;
  const LagrangeBasis &lag = spaces.tables->lag;
  BoundaryDofs out;
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const Edge &edge = mesh.edges[e];
    if (!edge.boundary)
    {
      continue;
    }
    BoundaryEdge be;
    be.edge = e;
    be.tri = edge.tris[0];
    be.local_edge = -1;
    for (int j = 0; j < 3; j++)
    {
      if (mesh.tri_edges[be.tri][j] == e)
      {
        be.local_edge = j;
      }
    }
    const auto vd = spaces.v_dofs_of(be.tri);
    const auto wd = spaces.w_dofs_of(be.tri);
    for (int m = 0; m < rt.dofs_per_edge(); m++)
    {
      be.v_dofs.push_back(vd[rt.edge_dof(be.local_edge, m)]);
    }
    // Trace nodes: the two edge endpoints, then the interior edge nodes.
    be.w_dofs.push_back(wd[(be.local_edge + 1) % 3]);
    be.w_dofs.push_back(wd[(be.local_edge + 2) % 3]);
    for (int m = 1; m <= lag.nodes_per_edge(); m++)
    {
      be.w_dofs.push_back(wd[lag.edge_node(be.local_edge, m)]);
    }
    out.v_dofs.insert(out.v_dofs.end(), be.v_dofs.begin(), be.v_dofs.end());
    out.edges.push_back(std::move(be));
  }
  return out;
}

void gather(const FESpacePair &spaces, int t, const CVector &coeff, CVector &rt_local,
            CVector &lag_local)
{
  const auto vd = spaces.v_dofs_of(t);
  const auto vs = spaces.v_signs_of(t);
  const auto wd = spaces.w_dofs_of(t);
  rt_local.resize(spaces.rt_local);
  lag_local.resize(spaces.lag_local);
  for (int i = 0; i < spaces.rt_local; i++)
  {
    rt_local(i) = vs[i] * coeff(vd[i]);
  }
  for (int i = 0; i < spaces.lag_local; i++)
  {
    lag_local(i) = coeff(spaces.n_V + wd[i]);
  }
}

PointValues evaluate(const FESpacePair &spaces, const CVector &coeff, int t, const Vec2 &xhat)
{
  const AffineMap map = element_map(*spaces.mesh, t);
  CVector rl, ll;
  gather(spaces, t, coeff, rl, ll);
  const std::array<Vec2, 1> pt = {xhat};
  const RTTabulation rtab = spaces.tables->rt.tabulate(pt);
  const LagrangeTabulation ltab = spaces.tables->lag.tabulate(pt);
  PointValues out;
  const CVec2 ref_phi((rtab.vx.row(0).cast<Complex>() * rl)(0),
                      (rtab.vy.row(0).cast<Complex>() * rl)(0));
  out.phi = map.B.cast<Complex>() * ref_phi / map.detB;
  out.div_phi = (rtab.div.row(0).cast<Complex>() * rl)(0) / map.detB;
  out.u = (ltab.values.row(0).cast<Complex>() * ll)(0);
  const CVec2 ref_grad((ltab.dx.row(0).cast<Complex>() * ll)(0),
                       (ltab.dy.row(0).cast<Complex>() * ll)(0));
  out.grad_u = map.invB.transpose().cast<Complex>() * ref_grad;
  return out;
}

CVector interpolate(const FESpacePair &spaces,
                    const std::function<CVec2(const Vec2 &)> &phi,
                    const std::function<Complex(const Vec2 &)> &u)
{
  const Mesh &mesh = *spaces.mesh;
  const auto &nodes = spaces.tables->lag.nodes();
  CVector out = CVector::Zero(spaces.ndof());
  for (int t = 0; t < mesh.num_triangles(); t++)
  {
    const AffineMap map = element_map(mesh, t);
    const CVector local = rt_interpolate(phi, map, spaces.tables->rt);
    const auto vd = spaces.v_dofs_of(t);
    const auto vs = spaces.v_signs_of(t);
    for (int i = 0; i < spaces.rt_local; i++)
    {
      out(vd[i]) = vs[i] * local(i);
    }
    const auto wd = spaces.w_dofs_of(t);
    for (int i = 0; i < spaces.lag_local; i++)
    {
      out(spaces.n_V + wd[i]) = u(map(nodes[i]));
    }
  }
  return out;
}

}  // namespace fosls
