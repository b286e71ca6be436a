#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "goalfem/mesh.hpp"

using namespace goalfem;

namespace {

Mesh refine_all(const Mesh& m) {
  const auto cells = m.active_cells();
  return m.refine(cells);
}

int boundary_vertex_count(const Mesh& m) {
  std::set<int> used;
  for (const int c : m.active_cells()) {
    for (const int v : m.cell(c).vertices) used.insert(v);
  }
  int n = 0;
  for (const int v : used) n += m.vertex(v).on_boundary ? 1 : 0;
  return n;
}

void expect_disc_boundary_snapped(const Mesh& m, double r) {
  for (const auto& v : m.vertices()) {
    if (!v.on_boundary) continue;
    EXPECT_NEAR(std::hypot(v.pos.x, v.pos.y), r, 1e-12 * r) << "vertex " << v.id;
  }
}

}  // namespace

TEST(MeshSquare, CountsAndArea) {
  const Mesh m = Mesh::square({0.0, 0.0}, 0.3, 3);
  EXPECT_EQ(m.n_active(), 9);
  EXPECT_EQ(m.vertices().size(), 16u);
  EXPECT_NEAR(m.active_area(), 0.09, 1e-15);
  for (const auto& v : m.vertices()) EXPECT_EQ(v.boundary_id, 0);
}

TEST(MeshSquare, UnitCellCorners) {
  const Mesh m = Mesh::square({0.0, 0.0}, 1.0, 1);
  ASSERT_EQ(m.n_active(), 1);
  const Point want[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int k = 0; k < 4; ++k) {
    const Point p = m.vertex(m.cell(0).vertices[k]).pos;
    EXPECT_DOUBLE_EQ(p.x, want[k].x);
    EXPECT_DOUBLE_EQ(p.y, want[k].y);
  }
}

TEST(MeshSquare, RejectsBadArguments) {
  EXPECT_THROW(Mesh::square({0, 0}, 0.0, 2), std::invalid_argument);
  EXPECT_THROW(Mesh::square({0, 0}, -1.0, 2), std::invalid_argument);
  EXPECT_THROW(Mesh::square({0, 0}, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(Mesh::disc({0, 0}, 0.0), std::invalid_argument);
}

TEST(MeshDisc, BoundaryOnCircle) {
  const Mesh m = Mesh::disc({0.0, 0.0}, 0.2);
  EXPECT_EQ(m.n_active(), 5);
  expect_disc_boundary_snapped(m, 0.2);
}

TEST(MeshDisc, UniformRefinementSnapsAndDoublesBoundary) {
  const Mesh m0 = Mesh::disc({0.0, 0.0}, 0.2);
  const Mesh m1 = refine_all(m0);
  EXPECT_EQ(m1.n_active(), 20);
  EXPECT_EQ(boundary_vertex_count(m1), 2 * boundary_vertex_count(m0));
  expect_disc_boundary_snapped(m1, 0.2);
  m1.check_one_irregular();
}

TEST(MeshDisc, AreaConvergesToCircle) {
  Mesh m = Mesh::disc({0.0, 0.0}, 0.2);
  for (int k = 0; k < 5; ++k) m = refine_all(m);
  const double exact = std::numbers::pi * 0.04;
  EXPECT_LT(std::abs(m.active_area() - exact), 0.01 * exact);
  // Inscribed polygon area from the boundary vertices, counted once.
  const int nb = boundary_vertex_count(m);
  const double polygon = 0.5 * nb * 0.04 * std::sin(2.0 * std::numbers::pi / nb);
  EXPECT_NEAR(m.active_area(), polygon, 1e-12);
}

TEST(MeshRefine, AllCellsOfThreeByThree) {
  const Mesh m = refine_all(Mesh::square({0, 0}, 0.3, 3));
  EXPECT_EQ(m.n_active(), 36);
  EXPECT_NEAR(m.active_area(), 0.09, 1e-12 * 0.09);
}

TEST(MeshRefine, CornerCellNeedsNoClosure) {
  const Mesh m0 = Mesh::square({0, 0}, 1.0, 3);
  const std::vector<int> marked{0};
  const Mesh m1 = m0.refine(marked);
  EXPECT_EQ(m1.n_active(), 9 - 1 + 4);
  m1.check_one_irregular();
}

TEST(MeshRefine, SecondPassForcesNeighbors) {
  const Mesh m0 = Mesh::square({0, 0}, 1.0, 2);
  const std::vector<int> first{0};
  const Mesh m1 = m0.refine(first);
  // Child of cell 0 touching the interior corner (1/2, 1/2).
  const int child = m1.cell(0).children[2];
  const std::vector<int> second{child};
  const Mesh m2 = m1.refine(second);
  m2.check_one_irregular();
  EXPECT_FALSE(m2.cell(1).active);
  EXPECT_FALSE(m2.cell(2).active);
  // Cell 3 only shares a vertex with the refined child.
  EXPECT_TRUE(m2.cell(3).active);
  EXPECT_EQ(m2.n_active(), 3 + 4 + 4 + 4 + 1);
}

TEST(MeshRefine, EmptyMarkingIsIdentity) {
  const Mesh m0 = Mesh::square({0, 0}, 1.0, 2);
  const Mesh m1 = m0.refine(std::vector<int>{});
  EXPECT_EQ(m1.n_active(), m0.n_active());
  EXPECT_EQ(m1.cells().size(), m0.cells().size());
  EXPECT_EQ(m1.vertices().size(), m0.vertices().size());
}

TEST(MeshRefine, InactiveCellRejected) {
  const Mesh m1 = Mesh::square({0, 0}, 1.0, 2).refine(std::vector<int>{0});
  EXPECT_THROW(m1.refine(std::vector<int>{0}), std::invalid_argument);
}

TEST(MeshRefine, ChildVerticesAreParentMidpointsOrCenters) {
  const Mesh m = Mesh::square({0, 0}, 1.0, 2).refine(std::vector<int>{3});
  const Cell& parent = m.cell(3);
  for (const int child : parent.children) {
    ASSERT_GE(child, 0);
    EXPECT_EQ(m.cell(child).parent, 3);
    EXPECT_EQ(m.cell(child).level, 1);
    for (const int v : m.cell(child).vertices) {
      const Point x = m.vertex(v).pos;
      bool found = false;
      for (double a : {0.0, 0.5, 1.0}) {
        for (double b : {0.0, 0.5, 1.0}) {
          const Point y = m.map_to_physical(3, {a, b});
          found = found || (std::abs(x.x - y.x) < 1e-15 && std::abs(x.y - y.y) < 1e-15);
        }
      }
      EXPECT_TRUE(found) << "vertex " << v;
    }
  }
}

TEST(MeshRefine, RandomMarkingKeepsInvariants) {
  std::mt19937 gen(7);
  Mesh m = Mesh::square({0, 0}, 0.3, 3);
  for (int pass = 0; pass < 8; ++pass) {
    const auto active = m.active_cells();
    std::vector<int> marked;
    std::bernoulli_distribution pick(0.15);
    for (const int c : active) {
      if (pick(gen)) marked.push_back(c);
    }
    const Mesh next = m.refine(marked);
    next.check_one_irregular();
    EXPECT_NEAR(next.active_area(), 0.09, 1e-12 * 0.09);
    EXPECT_GE(next.n_active(), m.n_active() + 3 * static_cast<int>(marked.size()));
    // Old cell ids keep their meaning.
    for (std::size_t c = 0; c < m.cells().size(); ++c) {
      EXPECT_EQ(next.cell(c).vertices, m.cell(c).vertices);
      if (!m.cell(c).active) EXPECT_FALSE(next.cell(c).active);
    }
    for (const int c : marked) EXPECT_FALSE(next.cell(c).active);
    m = next;
  }
}

TEST(MeshPrerefine, ZeroLevelsIsNoOp) {
  const Mesh m0 = Mesh::square({0, 0}, 0.3, 4);
  const std::vector<Point> pts{{0.05, 0.05}};
  const Mesh m1 = prerefine_near_points(m0, pts, 0, 0.1);
  EXPECT_EQ(m1.n_active(), m0.n_active());
  EXPECT_EQ(prerefine_near_points(m0, {}, 3, 0.1).n_active(), m0.n_active());
}

TEST(MeshPrerefine, PointAtCellCenterRefinesOnlyThatCell) {
  const Mesh m0 = Mesh::square({0, 0}, 1.0, 4);
  const std::vector<Point> pts{{0.375, 0.375}};
  const Mesh m1 = prerefine_near_points(m0, pts, 1, 0.05);
  EXPECT_EQ(m1.n_active(), 16 + 3);
  EXPECT_FALSE(m1.cell(5).active);
}

TEST(MeshPrerefine, ResolvesWidthNearPoints) {
  const Mesh m0 = Mesh::square({0, 0}, 0.3, 4);
  const std::vector<Point> pts{{0.05, 0.05}, {0.25, 0.05}};
  const double sigma = 0.01;
  const Mesh m = prerefine_near_points(m0, pts, 3, 8.0 * sigma);
  m.check_one_irregular();
  for (const int c : m.active_cells()) {
    for (const Point p : pts) {
      if (distance_to_cell(m, c, p) == 0.0) EXPECT_LE(m.cell_diameter(c), 0.075 / 8.0 + 1e-15);
    }
  }
}

TEST(MeshGeometry, DistanceToCell) {
  const Mesh m = Mesh::square({0, 0}, 1.0, 1);
  EXPECT_DOUBLE_EQ(distance_to_cell(m, 0, {0.5, 0.5}), 0.0);
  EXPECT_NEAR(distance_to_cell(m, 0, {2.0, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(distance_to_cell(m, 0, {2.0, 2.0}), std::sqrt(2.0), 1e-15);
}
