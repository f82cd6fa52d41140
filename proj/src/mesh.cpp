// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#include "fosls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace fosls
{

bool DomainBox::contains(const Vec2 &p, double tol) const
{
  return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol &&
         p.y() <= ymax + tol;
}

void DomainBox::validate() const
{
  if (!(xmin < xmax) || !(ymin < ymax))
  {
    throw std::invalid_argument("DomainBox: require xmin < xmax and ymin < ymax");
  }
}

int Mesh::num_boundary_edges() const
{
  return static_cast<int>(
      std::count_if(edges.begin(), edges.end(), [](const Edge &e) { return e.boundary; }));
}

Vec2 Mesh::edge_normal(int e) const
{
  const Vec2 t = (vertices[edges[e].v[1]] - vertices[edges[e].v[0]]).normalized();
  return {-t.y(), t.x()};
}

double Mesh::edge_length(int e) const
{
  return (vertices[edges[e].v[1]] - vertices[edges[e].v[0]]).norm();
}

Vec2 Mesh::local_outward_normal(int t, int j) const
{
  const auto &tri = triangles[t];
  const Vec2 tan = (vertices[tri[(j + 2) % 3]] - vertices[tri[(j + 1) % 3]]).normalized();
  return {tan.y(), -tan.x()};
}

int Mesh::locate(const Vec2 &p) const
{
  if (!box.contains(p))
  {
    throw std::out_of_range("Mesh::locate: point outside the domain");
  }
  const int n = cells_per_side;
  const double sx = (p.x() - box.xmin) / box.width() * n;
  const double sy = (p.y() - box.ymin) / box.height() * n;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, n - 1);
  const double lx = sx - i, ly = sy - j;
  // Lower-right triangle below the diagonal, upper-left above it.
  return 2 * (j * n + i) + (ly <= lx ? 0 : 1);
}

double Mesh::total_area() const
{
  double area = 0.0;
  for (int t = 0; t < num_triangles(); t++)
  {
    area += 0.5 * element_map(*this, t).detB;
  }
  return area;
}

Mesh build_uniform_mesh(const DomainBox &box, int n)
{
  box.validate();
  if (n < 1)
  {
    throw std::invalid_argument("build_uniform_mesh: need at least one cell per side");
  }
  Mesh mesh;
  mesh.box = box;
  mesh.cells_per_side = n;
  const double dx = box.width() / n, dy = box.height() / n;
  mesh.h = std::hypot(dx, dy);

  mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; j++)
  {
    for (int i = 0; i <= n; i++)
    {
      // Pin the last row/column to the box so the tiling is exact.
      const double x = (i == n) ? box.xmax : box.xmin + i * dx;
      const double y = (j == n) ? box.ymax : box.ymin + j * dy;
      mesh.vertices.emplace_back(x, y);
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++)
    {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1),
                v01 = vid(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // Edges keyed by sorted vertex pair; numbering follows key order.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> incidence;
  for (int t = 0; t < mesh.num_triangles(); t++)
  {
    const auto &tri = mesh.triangles[t];
    for (int j = 0; j < 3; j++)
    {
      const int a = tri[(j + 1) % 3], b = tri[(j + 2) % 3];
      incidence[{std::min(a, b), std::max(a, b)}].emplace_back(t, j);
    }
  }
  mesh.tri_edges.assign(mesh.triangles.size(), {-1, -1, -1});
  mesh.tri_edge_orientation.assign(mesh.triangles.size(), {0, 0, 0});
  mesh.edges.reserve(incidence.size());
  for (const auto &[key, tris] : incidence)
  {
    if (tris.size() > 2)
    {
      throw std::logic_error("build_uniform_mesh: edge shared by more than two triangles");
    }
    const int e = static_cast<int>(mesh.edges.size());
    Edge edge;
    edge.v = {key.first, key.second};
    edge.boundary = (tris.size() == 1);
    for (std::size_t s = 0; s < tris.size(); s++)
    {
      const auto [t, j] = tris[s];
      edge.tris[s] = t;
      mesh.tri_edges[t][j] = e;
      const int a = mesh.triangles[t][(j + 1) % 3];
      mesh.tri_edge_orientation[t][j] = (a == key.second) ? 1 : -1;
    }
    mesh.edges.push_back(edge);
  }
  return mesh;
}

AffineMap element_map(const Mesh &mesh, int t)
{
  if (t < 0 || t >= mesh.num_triangles())
  {
    throw std::out_of_range("element_map: triangle index out of range");
  }
  const auto &tri = mesh.triangles[t];
  const Vec2 &v0 = mesh.vertices[tri[0]];
  AffineMap map;
  map.B.col(0) = mesh.vertices[tri[1]] - v0;
  map.B.col(1) = mesh.vertices[tri[2]] - v0;
  map.b = v0;
  map.detB = map.B.determinant();
  if (!(map.detB > 0.0))
  {
    throw std::logic_error("element_map: degenerate or clockwise triangle");
  }
  map.invB = map.B.inverse();
  return map;
}

namespace
{

double ratio_for(const DomainBox &box, double k, int p_plus_1, int n)
{
  return k * std::hypot(box.width() / n, box.height() / n) / p_plus_1;
}

}  // namespace

int cells_for_condition(const DomainBox &box, double k, int p_plus_1, double c)
{
  box.validate();
  if (!(k > 0.0) || !(c > 0.0) || p_plus_1 < 1)
  {
    throw std::invalid_argument("mesh_for_condition: require k > 0, c > 0, p+1 >= 1");
  }
  const double diag = std::hypot(box.width(), box.height());
  const double estimate = std::ceil(k * diag / (c * p_plus_1));
  if (!(estimate < 1e9))
  {
    throw std::length_error("mesh_for_condition: required resolution is unbounded");
  }
  int n = std::max(1, static_cast<int>(estimate));
  while (ratio_for(box, k, p_plus_1, n) > c)
  {
    n++;
  }
  while (n > 1 && ratio_for(box, k, p_plus_1, n - 1) <= c)
  {
    n--;
  }
  return n;
}

Mesh mesh_for_condition(const DomainBox &box, double k, int p_plus_1, double c, int max_n)
{
  const int n = cells_for_condition(box, k, p_plus_1, c);
  if (n > max_n)
  {
    throw std::length_error("mesh_for_condition: required n = " + std::to_string(n) +
                            " exceeds the cap " + std::to_string(max_n));
  }
  Mesh mesh = build_uniform_mesh(box, n);
  mesh.target_ratio = c;
  mesh.achieved_ratio = ratio_for(box, k, p_plus_1, n);
  return mesh;
}

std::string mesh_summary_json(const Mesh &mesh)
{
  nlohmann::ordered_json j;
  j["cells_per_side"] = mesh.cells_per_side;
  j["vertices"] = mesh.num_vertices();
  j["triangles"] = mesh.num_triangles();
  j["edges"] = mesh.num_edges();
  j["boundary_edges"] = mesh.num_boundary_edges();
  j["h"] = mesh.h;
  if (mesh.target_ratio > 0.0)
  {
    j["target_kh_over_p"] = mesh.target_ratio;
    j["achieved_kh_over_p"] = mesh.achieved_ratio;
  }
  return j.dump();
}

}  // namespace fosls
