#include "goalfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace goalfem {

namespace {

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point q = a + t * ab;
  return std::hypot(p.x - q.x, p.y - q.y);
}

}  // namespace

Point child_offset(int k) {
  static constexpr std::array<Point, 4> offsets{{{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}};
  return offsets[k];
}

Mesh::EdgeKey Mesh::key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

Mesh Mesh::square(Point origin, double side, int n) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw std::invalid_argument("square mesh: side must be positive, got " + std::to_string(side));
  }
  if (n < 1) {
    throw std::invalid_argument("square mesh: subdivisions must be >= 1, got " + std::to_string(n));
  }
  Mesh mesh;
  mesh.geometry_ = {GeometryKind::Square, origin, side};
  const double h = side / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const bool boundary = i == 0 || j == 0 || i == n || j == n;
      // Pin the far edges to origin + side exactly.
      const double x = i == n ? origin.x + side : origin.x + i * h;
      const double y = j == n ? origin.y + side : origin.y + j * h;
      mesh.add_vertex({x, y}, boundary);
    }
  }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Cell c;
      c.id = static_cast<int>(mesh.cells_.size());
      c.vertices = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
      mesh.cells_.push_back(c);
      mesh.register_cell_edges(c.id);
    }
  }
  for (int i = 0; i < n; ++i) {
    mesh.boundary_edges_.insert(key(vid(i, 0), vid(i + 1, 0)));
    mesh.boundary_edges_.insert(key(vid(i, n), vid(i + 1, n)));
    mesh.boundary_edges_.insert(key(vid(0, i), vid(0, i + 1)));
    mesh.boundary_edges_.insert(key(vid(n, i), vid(n, i + 1)));
  }
  return mesh;
}

Mesh Mesh::disc(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("disc mesh: radius must be positive, got " +
                                std::to_string(radius));
  }
  Mesh mesh;
  mesh.geometry_ = {GeometryKind::Disc, center, radius};
  const double inner = radius / (2.0 * std::sqrt(2.0));
  const std::array<Point, 4> dirs{{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};
  for (const Point d : dirs) {
    mesh.add_vertex(center + inner * d, false);
  }
  for (int k = 0; k < 4; ++k) {
    const double angle = -0.75 * M_PI + 0.5 * M_PI * k;
    mesh.add_vertex({center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)},
                    true);
  }
  const std::array<std::array<int, 4>, 5> cells{{
      {0, 1, 2, 3},
      {4, 5, 1, 0},
      {5, 6, 2, 1},
      {6, 7, 3, 2},
      {7, 4, 0, 3},
  }};
  for (const auto& vs : cells) {
    Cell c;
    c.id = static_cast<int>(mesh.cells_.size());
    c.vertices = vs;
    mesh.cells_.push_back(c);
    mesh.register_cell_edges(c.id);
  }
  for (int k = 0; k < 4; ++k) {
    mesh.boundary_edges_.insert(key(4 + k, 4 + (k + 1) % 4));
  }
  return mesh;
}

int Mesh::add_vertex(Point p, bool on_boundary) {
  Vertex v;
  v.id = static_cast<int>(vertices_.size());
  v.pos = p;
  v.on_boundary = on_boundary;
  vertices_.push_back(v);
  return v.id;
}

int Mesh::midpoint(int a, int b) const {
  const auto it = midpoints_.find(key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

bool Mesh::is_boundary_edge(int a, int b) const { return boundary_edges_.contains(key(a, b)); }

int Mesh::edge_midpoint(int a, int b) {
  const EdgeKey k = key(a, b);
  if (const auto it = midpoints_.find(k); it != midpoints_.end()) {
    return it->second;
  }
  const bool boundary = boundary_edges_.contains(k);
  Point p = 0.5 * (vertices_[a].pos + vertices_[b].pos);
  if (boundary && geometry_.kind == GeometryKind::Disc) {
    const Point d = p - geometry_.origin;
    const double len = std::hypot(d.x, d.y);
    p = geometry_.origin + (geometry_.size / len) * d;
  }
  const int m = add_vertex(p, boundary);
  midpoints_.emplace(k, m);
  if (boundary) {
    boundary_edges_.insert(key(a, m));
    boundary_edges_.insert(key(m, b));
  }
  return m;
}

void Mesh::register_cell_edges(int cell) {
  const auto& vs = cells_[cell].vertices;
  for (int e = 0; e < 4; ++e) {
    auto [it, inserted] = edge_cells_.try_emplace(key(vs[e], vs[(e + 1) % 4]),
                                                  std::array<int, 2>{-1, -1});
    auto& slots = it->second;
    if (slots[0] < 0) {
      slots[0] = cell;
    } else if (slots[1] < 0) {
      slots[1] = cell;
    } else {
      throw MeshContractError("edge shared by more than two cells");
    }
  }
}

void Mesh::split(int cell) {
  const std::array<int, 4> v = cells_[cell].vertices;
  const int level = cells_[cell].level;
  const int m01 = edge_midpoint(v[0], v[1]);
  const int m12 = edge_midpoint(v[1], v[2]);
  const int m23 = edge_midpoint(v[2], v[3]);
  const int m30 = edge_midpoint(v[3], v[0]);
  Point centroid{};
  for (const int id : v) {
    centroid = centroid + 0.25 * vertices_[id].pos;
  }
  const int c = add_vertex(centroid, false);
  const std::array<std::array<int, 4>, 4> children{{
      {v[0], m01, c, m30},
      {m01, v[1], m12, c},
      {c, m12, v[2], m23},
      {m30, c, m23, v[3]},
  }};
  for (int k = 0; k < 4; ++k) {
    Cell child;
    child.id = static_cast<int>(cells_.size());
    child.vertices = children[k];
    child.level = level + 1;
    child.parent = cell;
    cells_.push_back(child);
    cells_[cell].children[k] = child.id;
    register_cell_edges(child.id);
  }
  cells_[cell].active = false;
}

std::vector<int> Mesh::active_cells() const {
  std::vector<int> ids;
  for (const Cell& c : cells_) {
    if (c.active) ids.push_back(c.id);
  }
  return ids;
}

int Mesh::n_active() const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(),
                                        [](const Cell& c) { return c.active; }));
}

EdgeNeighbor Mesh::edge_neighbor(int cell, int edge) const {
  const Cell& c = cells_[cell];
  const int a = c.vertices[edge];
  const int b = c.vertices[(edge + 1) % 4];
  const EdgeKey k = key(a, b);
  if (boundary_edges_.contains(k)) {
    return {EdgeKind::Boundary, -1, -1};
  }
  const auto& slots = edge_cells_.at(k);
  const int other = slots[0] == cell ? slots[1] : slots[0];
  if (other >= 0) {
    const Cell& o = cells_[other];
    if (o.active) {
      return {EdgeKind::Conforming, other, -1};
    }
    const int m = midpoint(a, b);
    if (m < 0) {
      throw MeshContractError("refined neighbor without an edge midpoint");
    }
    for (const int child : o.children) {
      const auto& cv = cells_[child].vertices;
      const bool touches = std::find(cv.begin(), cv.end(), m) != cv.end();
      if (touches && !cells_[child].active) {
        throw MeshContractError("neighbor level difference exceeds one at cell " +
                                std::to_string(cell));
      }
    }
    return {EdgeKind::CoarseSide, other, m};
  }
  if (c.parent < 0) {
    throw MeshContractError("interior edge without a neighbor at cell " + std::to_string(cell));
  }
  const Cell& p = cells_[c.parent];
  const int child_index = static_cast<int>(
      std::find(p.children.begin(), p.children.end(), cell) - p.children.begin());
  int parent_edge = -1;
  if (edge == child_index) {
    parent_edge = child_index;
  } else if (edge == (child_index + 3) % 4) {
    parent_edge = (child_index + 3) % 4;
  } else {
    throw MeshContractError("sibling edge without a sibling at cell " + std::to_string(cell));
  }
  const EdgeKey pk = key(p.vertices[parent_edge], p.vertices[(parent_edge + 1) % 4]);
  const auto& pslots = edge_cells_.at(pk);
  const int coarse = pslots[0] == p.id ? pslots[1] : pslots[0];
  if (coarse < 0 || !cells_[coarse].active) {
    throw MeshContractError("neighbor level difference exceeds one at cell " +
                            std::to_string(cell));
  }
  return {EdgeKind::FineSide, coarse, -1};
}

void Mesh::check_one_irregular() const {
  for (const Cell& c : cells_) {
    if (!c.active) continue;
    for (int e = 0; e < 4; ++e) {
      (void)edge_neighbor(c.id, e);
    }
  }
}

std::vector<int> Mesh::cells_to_split(std::span<const int> marked) const {
  std::set<int> selected;
  std::vector<int> work;
  for (const int id : marked) {
    if (id < 0 || id >= static_cast<int>(cells_.size()) || !cells_[id].active) {
      throw std::invalid_argument("refine: cell " + std::to_string(id) + " is not active");
    }
    if (selected.insert(id).second) work.push_back(id);
  }
  while (!work.empty()) {
    const int id = work.back();
    work.pop_back();
    for (int e = 0; e < 4; ++e) {
      const EdgeNeighbor nb = edge_neighbor(id, e);
      if (nb.kind == EdgeKind::FineSide && selected.insert(nb.neighbor).second) {
        work.push_back(nb.neighbor);
      }
    }
  }
  return {selected.begin(), selected.end()};
}

Mesh Mesh::refine(std::span<const int> marked) const {
  const std::vector<int> to_split = cells_to_split(marked);
  Mesh refined = *this;
  for (const int id : to_split) {
    refined.split(id);
  }
  return refined;
}

Point Mesh::map_to_physical(int cell, Point xi) const {
  const auto& v = cells_[cell].vertices;
  const double s = xi.x;
  const double t = xi.y;
  return (1 - s) * (1 - t) * vertices_[v[0]].pos + s * (1 - t) * vertices_[v[1]].pos +
         s * t * vertices_[v[2]].pos + (1 - s) * t * vertices_[v[3]].pos;
}

double Mesh::cell_area(int cell) const {
  const auto& v = cells_[cell].vertices;
  double twice = 0.0;
  for (int k = 0; k < 4; ++k) {
    twice += cross(vertices_[v[k]].pos, vertices_[v[(k + 1) % 4]].pos);
  }
  return 0.5 * twice;
}

double Mesh::active_area() const {
  double area = 0.0;
  for (const Cell& c : cells_) {
    if (c.active) area += cell_area(c.id);
  }
  return area;
}

double Mesh::cell_diameter(int cell) const {
  const auto& v = cells_[cell].vertices;
  double h = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Point d = vertices_[v[(k + 1) % 4]].pos - vertices_[v[k]].pos;
    h = std::max(h, std::hypot(d.x, d.y));
  }
  return h;
}

std::vector<int> Mesh::active_cells_per_vertex() const {
  std::vector<int> count(vertices_.size(), 0);
  for (const Cell& c : cells_) {
    if (!c.active) continue;
    for (const int v : c.vertices) ++count[v];
  }
  return count;
}

double distance_to_cell(const Mesh& mesh, int cell, Point p) {
  const auto& v = mesh.cell(cell).vertices;
  bool inside = true;
  double dist = std::numeric_limits<double>::max();
  for (int k = 0; k < 4; ++k) {
    const Point a = mesh.vertex(v[k]).pos;
    const Point b = mesh.vertex(v[(k + 1) % 4]).pos;
    if (cross(b - a, p - a) < 0.0) inside = false;
    dist = std::min(dist, segment_distance(p, a, b));
  }
  return inside ? 0.0 : dist;
}

Mesh prerefine_near_points(const Mesh& mesh, std::span<const Point> points, int levels,
                           double radius) {
  if (levels < 0) {
    throw std::invalid_argument("prerefine: levels must be >= 0");
  }
  Mesh current = mesh;
  double r = radius;
  for (int pass = 0; pass < levels && !points.empty(); ++pass) {
    std::vector<int> marked;
    for (const int id : current.active_cells()) {
      for (const Point p : points) {
        if (distance_to_cell(current, id, p) <= r) {
          marked.push_back(id);
          break;
        }
      }
    }
    current = current.refine(marked);
    r *= 0.5;
  }
  return current;
}

}  // namespace goalfem
