// Copyright the fosls-helmholtz authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FOSLS_MESH_HPP
#define FOSLS_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fosls/types.hpp"

namespace fosls
{

// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct DomainBox
{
  double xmin = -0.5, xmax = 0.5, ymin = -0.5, ymax = 0.5;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Vec2 &p, double tol = 1e-12) const;
  void validate() const;

  static DomainBox centered_unit_square() { return {}; }
};

struct Edge
{
  std::array<int, 2> v;            // v[0] < v[1]
  std::array<int, 2> tris{-1, -1};  // incident triangles, tris[1] == -1 on the boundary
  bool boundary = false;
};

// Affine map x = B xhat + b from the reference triangle (0,0), (1,0), (0,1).
struct AffineMap
{
  Mat2 B;
  Vec2 b;
  double detB;
  Mat2 invB;

  Vec2 operator()(const Vec2 &xhat) const { return B * xhat + b; }
  Vec2 inverse(const Vec2 &x) const { return invB * (x - b); }
};

// Uniform triangulation of a box. Triangles are counterclockwise. Local edge j of a
// triangle joins local vertices (j+1)%3 -> (j+2)%3 (it is opposite vertex j).
class Mesh
{
public:
  DomainBox box;
  int cells_per_side = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tri_edges;
  // +1 when the local outward normal equals the global edge normal, -1 otherwise. A local
  // edge whose traversal runs from the larger to the smaller vertex index has sign +1.
  std::vector<std::array<std::int8_t, 3>> tri_edge_orientation;
  double h = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;

  // True when local edge j of triangle t is traversed against the global direction.
  bool edge_reversed(int t, int j) const { return tri_edge_orientation[t][j] > 0; }

  // Unit normal of a global edge: +90 degree rotation of (v[1] - v[0]) / |v[1] - v[0]|.
  Vec2 edge_normal(int e) const;
  double edge_length(int e) const;
  Vec2 local_outward_normal(int t, int j) const;

  // Triangle containing p, by arithmetic on the structured grid.
  int locate(const Vec2 &p) const;

  double total_area() const;

  // Resolution bookkeeping set by mesh_for_condition.
  double achieved_ratio = 0.0;
  double target_ratio = 0.0;
};

Mesh build_uniform_mesh(const DomainBox &box, int n);

AffineMap element_map(const Mesh &mesh, int t);

// Smallest n with k h / (p+1) <= c. Throws when n would exceed max_n.
Mesh mesh_for_condition(const DomainBox &box, double k, int p_plus_1, double c,
                        int max_n = 4096);

// n chosen by mesh_for_condition without building the mesh.
int cells_for_condition(const DomainBox &box, double k, int p_plus_1, double c);

std::string mesh_summary_json(const Mesh &mesh);

}  // namespace fosls

#endif  // FOSLS_MESH_HPP
