#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace goalfem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

struct Vertex {
  int id = 0;
  Point pos;
  bool on_boundary = false;
  int boundary_id = 0;
};

struct Cell {
  int id = 0;
  /// Counterclockwise; vertex k sits at reference corner k of
  /// (0,0), (1,0), (1,1), (0,1).
  std::array<int, 4> vertices{};
  int level = 0;
  int parent = -1;
  /// Child k contains parent vertex k and occupies the reference quadrant
  /// with lower-left corner child_offset(k).
  std::array<int, 4> children{-1, -1, -1, -1};
  bool active = true;
};

enum class GeometryKind { Square, Disc };

struct Geometry {
  GeometryKind kind = GeometryKind::Square;
  Point origin;       ///< lower-left corner (square) or center (disc)
  double size = 1.0;  ///< side length (square) or radius (disc)
};

/// How an edge of an active cell meets the rest of the mesh.
enum class EdgeKind {
  Boundary,
  Conforming,  ///< same-level active neighbor shares the full edge
  CoarseSide,  ///< neighbor was refined; the edge carries a hanging midpoint
  FineSide,    ///< the edge is half of an edge of a coarser active neighbor
};

struct EdgeNeighbor {
  EdgeKind kind = EdgeKind::Boundary;
  int neighbor = -1;  ///< Conforming / FineSide: the neighbor cell id
  int midpoint = -1;  ///< CoarseSide: the hanging vertex id
};

/// Thrown when the mesh topology breaks the 1-irregular contract.
class MeshContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Reference-coordinate offset of child k inside its parent.
Point child_offset(int k);

/// Adaptive quadrilateral mesh. Refinement never modifies a mesh in place;
/// it returns a new mesh holding the full cell hierarchy, so cell ids of
/// the original mesh stay valid in every refinement of it.
class Mesh {
 public:
  static Mesh square(Point origin, double side, int n);
  static Mesh disc(Point center, double radius);

  /// Refines the marked active cells and then enough neighbors to keep the
  /// mesh 1-irregular.
  Mesh refine(std::span<const int> marked) const;

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Vertex& vertex(int id) const { return vertices_[id]; }
  const Cell& cell(int id) const { return cells_[id]; }
  const Geometry& geometry() const { return geometry_; }

  /// Active cell ids in ascending order.
  std::vector<int> active_cells() const;
  int n_active() const;

  EdgeNeighbor edge_neighbor(int cell, int edge) const;
  bool is_boundary_edge(int a, int b) const;
  /// Midpoint vertex of edge (a, b), or -1 if the edge was never split.
  int midpoint(int a, int b) const;

  /// Physical image of a reference point under the bilinear cell map.
  Point map_to_physical(int cell, Point xi) const;
  double cell_area(int cell) const;
  double active_area() const;
  /// Largest edge length of the cell.
  double cell_diameter(int cell) const;

  /// For each vertex, the number of active cells using it as a corner.
  std::vector<int> active_cells_per_vertex() const;

  /// Verifies the invariants; throws MeshContractError on a breach.
  void check_one_irregular() const;

 private:
  using EdgeKey = std::uint64_t;
  static EdgeKey key(int a, int b);

  int add_vertex(Point p, bool on_boundary);
  int edge_midpoint(int a, int b);
  void register_cell_edges(int cell);
  void split(int cell);
  std::vector<int> cells_to_split(std::span<const int> marked) const;

  Geometry geometry_;
  std::vector<Vertex> vertices_;
  std::vector<Cell> cells_;
  std::unordered_map<EdgeKey, int> midpoints_;
  /// Every cell (active or not) owning the full edge; at most one per side.
  std::unordered_map<EdgeKey, std::array<int, 2>> edge_cells_;
  std::unordered_set<EdgeKey> boundary_edges_;
};

/// Refines every active cell whose closure meets a ball around one of the
/// points. The ball radius halves after each pass.
Mesh prerefine_near_points(const Mesh& mesh, std::span<const Point> points, int levels,
                           double radius);

/// Distance from a point to the closed quadrilateral of a cell (0 inside).
double distance_to_cell(const Mesh& mesh, int cell, Point p);

}  // namespace goalfem
