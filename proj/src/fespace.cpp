#include "goalfem/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

namespace goalfem {

int DegreeTriple::max() const { return std::max({velocity, pressure, temperature}); }

void DegreeTriple::validate() const {
  if (velocity < 1 || pressure < 1 || temperature < 1) {
    throw std::invalid_argument("polynomial degrees must be >= 1");
  }
  if (velocity <= pressure) {
    throw std::invalid_argument("velocity degree must exceed pressure degree (inf-sup)");
  }
}

QuadratureRule quadrature_for(const DegreeTriple& degrees, int nonlinearity_boost) {
  if (nonlinearity_boost < 0) throw std::invalid_argument("quadrature boost must be >= 0");
  return gauss_square(degrees.max() + 1 + nonlinearity_boost);
}

// ---------------------------------------------------------------------------
// Sample algebra

SampleArray to_array(const Sample& s) {
  return {s.v[0],         s.v[1],         s.grad_v[0][0], s.grad_v[0][1], s.grad_v[1][0],
          s.grad_v[1][1], s.p,            s.theta,        s.grad_theta[0], s.grad_theta[1]};
}

Sample from_array(const SampleArray& a) {
  Sample s;
  s.v = {a[0], a[1]};
  s.grad_v = {{{a[2], a[3]}, {a[4], a[5]}}};
  s.p = a[6];
  s.theta = a[7];
  s.grad_theta = {a[8], a[9]};
  return s;
}

double pair(const Sample& flux, const Sample& test) {
  const SampleArray a = to_array(flux);
  const SampleArray b = to_array(test);
  double sum = 0.0;
  for (int k = 0; k < kSampleDim; ++k) sum += a[k] * b[k];
  return sum;
}

Sample scaled(const Sample& s, double phi, std::array<double, 2> grad_phi) {
  Sample r;
  for (int i = 0; i < 2; ++i) {
    r.v[i] = s.v[i] * phi;
    for (int j = 0; j < 2; ++j) {
      r.grad_v[i][j] = s.grad_v[i][j] * phi + s.v[i] * grad_phi[j];
    }
    r.grad_p[i] = s.grad_p[i] * phi + s.p * grad_phi[i];
    r.grad_theta[i] = s.grad_theta[i] * phi + s.theta * grad_phi[i];
  }
  r.p = s.p * phi;
  r.theta = s.theta * phi;
  return r;
}

Sample operator-(const Sample& a, const Sample& b) {
  Sample r;
  for (int i = 0; i < 2; ++i) {
    r.v[i] = a.v[i] - b.v[i];
    r.grad_p[i] = a.grad_p[i] - b.grad_p[i];
    r.grad_theta[i] = a.grad_theta[i] - b.grad_theta[i];
    for (int j = 0; j < 2; ++j) r.grad_v[i][j] = a.grad_v[i][j] - b.grad_v[i][j];
  }
  r.p = a.p - b.p;
  r.theta = a.theta - b.theta;
  return r;
}

std::span<const int> sample_slots(int component) {
  static constexpr std::array<int, 3> vx{0, 2, 3};
  static constexpr std::array<int, 3> vy{1, 4, 5};
  static constexpr std::array<int, 1> p{6};
  static constexpr std::array<int, 3> t{7, 8, 9};
  switch (component) {
    case VelocityX: return vx;
    case VelocityY: return vy;
    case Pressure: return p;
    default: return t;
  }
}

// ---------------------------------------------------------------------------
// Constraints

ConstraintSet::ConstraintSet(std::size_t n_dofs) : index_(n_dofs, -1) {}

void ConstraintSet::add(int dof, Constraint c) {
  if (index_[dof] >= 0) {
    entries_[index_[dof]] = std::move(c);
  } else {
    index_[dof] = static_cast<int>(entries_.size());
    entries_.push_back(std::move(c));
  }
}

std::vector<int> ConstraintSet::constrained_dofs() const {
  std::vector<int> dofs;
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (index_[i] >= 0) dofs.push_back(static_cast<int>(i));
  }
  return dofs;
}

void ConstraintSet::close() {
  for (auto& entry : entries_) {
    for (int depth = 0;; ++depth) {
      if (depth > 16) throw std::logic_error("constraint chain does not terminate");
      bool changed = false;
      std::map<int, double> merged;
      double inhom = entry.inhomogeneity;
      for (std::size_t k = 0; k < entry.masters.size(); ++k) {
        const int m = entry.masters[k];
        const double w = entry.weights[k];
        if (index_[m] >= 0) {
          const Constraint& sub = entries_[index_[m]];
          for (std::size_t l = 0; l < sub.masters.size(); ++l) {
            merged[sub.masters[l]] += w * sub.weights[l];
          }
          inhom += w * sub.inhomogeneity;
          changed = true;
        } else {
          merged[m] += w;
        }
      }
      entry.masters.clear();
      entry.weights.clear();
      for (const auto& [m, w] : merged) {
        entry.masters.push_back(m);
        entry.weights.push_back(w);
      }
      entry.inhomogeneity = inhom;
      if (!changed) break;
    }
  }
}

void ConstraintSet::distribute(DenseVector& u, bool homogeneous) const {
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (index_[i] < 0) continue;
    const Constraint& c = entries_[index_[i]];
    double value = homogeneous ? 0.0 : c.inhomogeneity;
    for (std::size_t k = 0; k < c.masters.size(); ++k) value += c.weights[k] * u[c.masters[k]];
    u[i] = value;
  }
}

void ConstraintSet::zero_constrained(DenseVector& u) const {
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (index_[i] >= 0) u[i] = 0.0;
  }
}

// ---------------------------------------------------------------------------
// Scalar dof handler

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
         static_cast<std::uint64_t>(std::max(a, b));
}

}  // namespace

void scalar_shapes(int degree, Point xi, std::span<double> values,
                   std::span<std::array<double, 2>> ref_grads) {
  const LagrangeBasis1D basis(degree);
  const int n1 = degree + 1;
  std::array<double, 8> vx{}, vy{}, dx{}, dy{};
  for (int i = 0; i < n1; ++i) {
    vx[i] = basis.value(i, xi.x);
    vy[i] = basis.value(i, xi.y);
    dx[i] = basis.derivative(i, xi.x);
    dy[i] = basis.derivative(i, xi.y);
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      const int s = j * n1 + i;
      if (!values.empty()) values[s] = vx[i] * vy[j];
      if (!ref_grads.empty()) ref_grads[s] = {dx[i] * vy[j], vx[i] * dy[j]};
    }
  }
}

ScalarDofHandler::ScalarDofHandler(const Mesh& mesh, int degree)
    : degree_(degree), n_cells_(static_cast<int>(mesh.cells().size())) {
  if (degree < 1 || degree > 7) {
    throw std::invalid_argument("scalar degree must lie in [1, 7], got " + std::to_string(degree));
  }
  const int k = degree;
  const int n1 = k + 1;
  const int nloc = n1 * n1;
  const std::vector<int> active = mesh.active_cells();

  vertex_dof_.assign(mesh.vertices().size(), -1);
  std::vector<bool> used(mesh.vertices().size(), false);
  for (const int c : active) {
    for (const int v : mesh.cell(c).vertices) used[v] = true;
  }
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (used[v]) vertex_dof_[v] = n_dofs_++;
  }

  std::unordered_map<std::uint64_t, int> edge_first;
  if (k > 1) {
    for (const int c : active) {
      const auto& vs = mesh.cell(c).vertices;
      for (int e = 0; e < 4; ++e) {
        const auto [it, inserted] = edge_first.try_emplace(edge_key(vs[e], vs[(e + 1) % 4]), n_dofs_);
        if (inserted) n_dofs_ += k - 1;
      }
    }
  }
  // Dof at position s (0 < s < k) from a towards b; stored from low id to high.
  auto edge_dof = [&](int a, int b, int s) {
    const int base = edge_first.at(edge_key(a, b));
    return a < b ? base + s - 1 : base + (k - s) - 1;
  };

  cell_dofs_.assign(static_cast<std::size_t>(n_cells_) * nloc, -1);
  for (const int c : active) {
    const auto& v = mesh.cell(c).vertices;
    int* dofs = &cell_dofs_[static_cast<std::size_t>(c) * nloc];
    for (int j = 0; j < n1; ++j) {
      for (int i = 0; i < n1; ++i) {
        int& d = dofs[j * n1 + i];
        const bool left = i == 0, right = i == k, bottom = j == 0, top = j == k;
        if (bottom && left) d = vertex_dof_[v[0]];
        else if (bottom && right) d = vertex_dof_[v[1]];
        else if (top && right) d = vertex_dof_[v[2]];
        else if (top && left) d = vertex_dof_[v[3]];
        else if (bottom) d = edge_dof(v[0], v[1], i);
        else if (right) d = edge_dof(v[1], v[2], j);
        else if (top) d = edge_dof(v[2], v[3], k - i);
        else if (left) d = edge_dof(v[3], v[0], k - j);
        else d = -1;
      }
    }
    for (int j = 1; j < k; ++j) {
      for (int i = 1; i < k; ++i) dofs[j * n1 + i] = n_dofs_++;
    }
  }

  boundary_.assign(n_dofs_, false);
  for (const int c : active) {
    const auto& v = mesh.cell(c).vertices;
    for (int e = 0; e < 4; ++e) {
      const int a = v[e];
      const int b = v[(e + 1) % 4];
      if (!mesh.is_boundary_edge(a, b)) continue;
      boundary_[vertex_dof_[a]] = true;
      boundary_[vertex_dof_[b]] = true;
      for (int s = 1; s < k; ++s) boundary_[edge_dof(a, b, s)] = true;
    }
  }

  const LagrangeBasis1D basis(k);
  for (const int c : active) {
    const auto& v = mesh.cell(c).vertices;
    for (int e = 0; e < 4; ++e) {
      const EdgeNeighbor nb = mesh.edge_neighbor(c, e);
      if (nb.kind != EdgeKind::CoarseSide) continue;
      const int a = v[e];
      const int b = v[(e + 1) % 4];
      const int m = nb.midpoint;
      std::vector<int> coarse(n1);
      coarse[0] = vertex_dof_[a];
      coarse[k] = vertex_dof_[b];
      for (int q = 1; q < k; ++q) coarse[q] = edge_dof(a, b, q);

      auto constrain = [&](int dof, double t) {
        Constraint con;
        for (int q = 0; q <= k; ++q) {
          const double w = basis.value(q, t);
          if (std::abs(w) > 1e-14) {
            con.masters.push_back(coarse[q]);
            con.weights.push_back(w);
          }
        }
        hanging_.emplace_back(dof, std::move(con));
      };
      constrain(vertex_dof_[m], 0.5);
      for (int s = 1; s < k; ++s) {
        constrain(edge_dof(a, m, s), 0.5 * s / k);
        constrain(edge_dof(m, b, s), 0.5 + 0.5 * s / k);
      }
    }
  }
}

std::span<const int> ScalarDofHandler::cell_dofs(int cell) const {
  const int nloc = dofs_per_cell();
  return {&cell_dofs_[static_cast<std::size_t>(cell) * nloc], static_cast<std::size_t>(nloc)};
}

Point ScalarDofHandler::local_node(int local) const {
  const int n1 = degree_ + 1;
  return {static_cast<double>(local % n1) / degree_, static_cast<double>(local / n1) / degree_};
}

// ---------------------------------------------------------------------------
// Space

std::shared_ptr<const Space> Space::build(std::shared_ptr<const Mesh> mesh,
                                          const DegreeTriple& degrees,
                                          const BoundarySpec& boundary) {
  degrees.validate();
  auto space = std::make_shared<Space>();
  space->mesh_ = std::move(mesh);
  space->degrees_ = degrees;
  space->boundary_ = boundary;

  std::map<int, std::shared_ptr<const ScalarDofHandler>> by_degree;
  for (int c = 0; c < kComponents; ++c) {
    const int k = space->component_degree(c);
    auto& h = by_degree[k];
    if (!h) h = std::make_shared<ScalarDofHandler>(*space->mesh_, k);
    space->handlers_[c] = h;
  }
  for (int c = 0; c < kComponents; ++c) {
    space->offsets_[c + 1] = space->offsets_[c] + space->handlers_[c]->n_dofs();
    for (int s = 0; s < space->handlers_[c]->dofs_per_cell(); ++s) {
      space->local_component_.push_back(c);
      space->local_scalar_.push_back(s);
    }
  }
  space->n_dofs_ = space->offsets_[kComponents];
  space->dofs_per_cell_ = static_cast<int>(space->local_component_.size());

  ConstraintSet cs(space->n_dofs_);
  for (int c = 0; c < kComponents; ++c) {
    const int off = space->offsets_[c];
    for (const auto& [dof, con] : space->handlers_[c]->hanging()) {
      Constraint shifted = con;
      for (int& m : shifted.masters) m += off;
      cs.add(dof + off, std::move(shifted));
    }
  }
  if (boundary.dirichlet) {
    for (const int c : {int(VelocityX), int(VelocityY), int(Temperature)}) {
      const ScalarDofHandler& h = *space->handlers_[c];
      const double value = c == Temperature ? boundary.temperature : 0.0;
      for (int d = 0; d < h.n_dofs(); ++d) {
        if (h.on_boundary(d)) cs.add(d + space->offsets_[c], Constraint{{}, {}, value});
      }
    }
  }
  if (boundary.pin_pressure) {
    const int pinned = space->handlers_[Pressure]->vertex_dof(0);
    cs.add(pinned + space->offsets_[Pressure], Constraint{{}, {}, 0.0});
  }
  cs.close();
  space->constraints_ = std::move(cs);
  return space;
}

int Space::component_degree(int component) const {
  switch (component) {
    case VelocityX:
    case VelocityY: return degrees_.velocity;
    case Pressure: return degrees_.pressure;
    default: return degrees_.temperature;
  }
}

int Space::component_n_dofs(int component) const {
  return offsets_[component + 1] - offsets_[component];
}

void Space::cell_dofs(int cell, std::vector<int>& out) const {
  out.resize(dofs_per_cell_);
  int i = 0;
  for (int c = 0; c < kComponents; ++c) {
    for (const int d : handlers_[c]->cell_dofs(cell)) out[i++] = d + offsets_[c];
  }
}

DenseVector Space::initial_state() const {
  DenseVector u(n_dofs_, 0.0);
  std::fill(u.begin() + offsets_[Temperature], u.begin() + offsets_[Temperature + 1],
            boundary_.temperature);
  constraints_.distribute(u, false);
  return u;
}

// ---------------------------------------------------------------------------
// Cell values

CellMapping map_cell(const Mesh& mesh, int cell, Point xi) {
  const auto& v = mesh.cell(cell).vertices;
  const Point p0 = mesh.vertex(v[0]).pos;
  const Point p1 = mesh.vertex(v[1]).pos;
  const Point p2 = mesh.vertex(v[2]).pos;
  const Point p3 = mesh.vertex(v[3]).pos;
  const double s = xi.x;
  const double t = xi.y;
  const Point dxi = (1 - t) * (p1 - p0) + t * (p2 - p3);
  const Point deta = (1 - s) * (p3 - p0) + s * (p2 - p1);
  CellMapping m;
  m.x = (1 - s) * (1 - t) * p0 + s * (1 - t) * p1 + s * t * p2 + (1 - s) * t * p3;
  m.det = dxi.x * deta.y - deta.x * dxi.y;
  const double inv_det = 1.0 / m.det;
  // J = [[dxi.x, deta.x], [dxi.y, deta.y]]
  m.inv = {{{deta.y * inv_det, -deta.x * inv_det}, {-dxi.y * inv_det, dxi.x * inv_det}}};
  return m;
}

CellValues::CellValues(const Space& space, QuadratureRule rule)
    : space_(&space), rule_(std::move(rule)) {
  const std::size_t nq = rule_.size();
  std::map<int, int> index_of_degree;
  for (int c = 0; c < kComponents; ++c) {
    const int k = space.component_degree(c);
    auto [it, inserted] = index_of_degree.try_emplace(k, static_cast<int>(tables_.size()));
    if (inserted) {
      Table t;
      t.degree = k;
      t.n = (k + 1) * (k + 1);
      t.value.resize(nq * t.n);
      t.ref_grad.resize(nq * t.n * 2);
      t.phys_grad.resize(nq * t.n * 2);
      std::vector<double> vals(t.n);
      std::vector<std::array<double, 2>> grads(t.n);
      for (std::size_t q = 0; q < nq; ++q) {
        scalar_shapes(k, rule_.points[q], vals, grads);
        for (int s = 0; s < t.n; ++s) {
          t.value[q * t.n + s] = vals[s];
          t.ref_grad[(q * t.n + s) * 2] = grads[s][0];
          t.ref_grad[(q * t.n + s) * 2 + 1] = grads[s][1];
        }
      }
      tables_.push_back(std::move(t));
    }
    table_index_[c] = it->second;
  }
  points_.resize(nq);
  jxw_.resize(nq);
}

void CellValues::reinit(int cell) {
  cell_ = cell;
  space_->cell_dofs(cell, dofs_);
  const Mesh& mesh = space_->mesh();
  for (std::size_t q = 0; q < rule_.size(); ++q) {
    const CellMapping m = map_cell(mesh, cell, rule_.points[q]);
    if (!(m.det > 0.0)) {
      throw MeshContractError("non-positive Jacobian in cell " + std::to_string(cell));
    }
    points_[q] = m.x;
    jxw_[q] = m.det * rule_.weights[q];
    for (Table& t : tables_) {
      for (int s = 0; s < t.n; ++s) {
        const std::size_t at = (q * t.n + s) * 2;
        const double gx = t.ref_grad[at];
        const double gy = t.ref_grad[at + 1];
        t.phys_grad[at] = gx * m.inv[0][0] + gy * m.inv[1][0];
        t.phys_grad[at + 1] = gx * m.inv[0][1] + gy * m.inv[1][1];
      }
    }
  }
}

double CellValues::shape(int local, std::size_t q) const {
  const Table& t = table_for(space_->local_component(local));
  return t.value[q * t.n + space_->local_scalar_index(local)];
}

std::array<double, 2> CellValues::grad(int local, std::size_t q) const {
  const Table& t = table_for(space_->local_component(local));
  const std::size_t at = (q * t.n + space_->local_scalar_index(local)) * 2;
  return {t.phys_grad[at], t.phys_grad[at + 1]};
}

Sample CellValues::sample(const DenseVector& u, std::size_t q) const {
  Sample s;
  int local = 0;
  for (int c = 0; c < kComponents; ++c) {
    const Table& t = table_for(c);
    double val = 0.0, gx = 0.0, gy = 0.0;
    for (int k = 0; k < t.n; ++k, ++local) {
      const double coef = u[dofs_[local]];
      const std::size_t at = q * t.n + k;
      val += coef * t.value[at];
      gx += coef * t.phys_grad[2 * at];
      gy += coef * t.phys_grad[2 * at + 1];
    }
    switch (c) {
      case VelocityX:
      case VelocityY:
        s.v[c] = val;
        s.grad_v[c] = {gx, gy};
        break;
      case Pressure:
        s.p = val;
        s.grad_p = {gx, gy};
        break;
      default:
        s.theta = val;
        s.grad_theta = {gx, gy};
    }
  }
  return s;
}

Sample CellValues::basis_sample(int local, std::size_t q) const {
  const double phi = shape(local, q);
  const std::array<double, 2> g = grad(local, q);
  Sample s;
  switch (space_->local_component(local)) {
    case VelocityX:
      s.v[0] = phi;
      s.grad_v[0] = g;
      break;
    case VelocityY:
      s.v[1] = phi;
      s.grad_v[1] = g;
      break;
    case Pressure:
      s.p = phi;
      s.grad_p = g;
      break;
    default:
      s.theta = phi;
      s.grad_theta = g;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Point evaluation

std::optional<Point> inverse_map(const Mesh& mesh, int cell, Point x) {
  Point xi{0.5, 0.5};
  double step = 1.0;
  for (int it = 0; it < 50; ++it) {
    const CellMapping m = map_cell(mesh, cell, xi);
    if (!(m.det > 0.0)) return std::nullopt;
    const Point r = m.x - x;
    const Point d{m.inv[0][0] * r.x + m.inv[0][1] * r.y, m.inv[1][0] * r.x + m.inv[1][1] * r.y};
    xi = xi - d;
    step = std::abs(d.x) + std::abs(d.y);
    if (step < 1e-14) return xi;
    if (std::abs(xi.x) > 10.0 || std::abs(xi.y) > 10.0) return std::nullopt;
  }
  // stagnated at roundoff on tiny cells
  if (step < 1e-9) return xi;
  return std::nullopt;
}

CellPoint locate_point(const Mesh& mesh, Point x) {
  constexpr double tol = 1e-10;
  for (const Cell& c : mesh.cells()) {
    if (!c.active) continue;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const int v : c.vertices) {
      const Point p = mesh.vertex(v).pos;
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double pad = tol * std::max(xmax - xmin, ymax - ymin);
    if (x.x < xmin - pad || x.x > xmax + pad || x.y < ymin - pad || x.y > ymax + pad) continue;
    const auto xi = inverse_map(mesh, c.id, x);
    if (!xi) continue;
    if (xi->x >= -tol && xi->x <= 1 + tol && xi->y >= -tol && xi->y <= 1 + tol) {
      return {c.id, {std::clamp(xi->x, 0.0, 1.0), std::clamp(xi->y, 0.0, 1.0)}};
    }
  }
  throw OutOfDomainError("point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                         ") lies outside the mesh");
}

Sample evaluate_in_cell(const Space& space, const DenseVector& u, int cell, Point xi) {
  CellValues values(space, QuadratureRule{{xi}, {1.0}});
  values.reinit(cell);
  return values.sample(u, 0);
}

Sample evaluate_at_point(const Space& space, const DenseVector& u, Point x) {
  const CellPoint cp = locate_point(space.mesh(), x);
  return evaluate_in_cell(space, u, cp.cell, cp.xi);
}

DenseVector interpolate(const Space& space,
                        const std::function<std::array<double, 4>(Point)>& f) {
  DenseVector u(space.n_dofs(), 0.0);
  const Mesh& mesh = space.mesh();
  for (const int cell : mesh.active_cells()) {
    for (int c = 0; c < kComponents; ++c) {
      const ScalarDofHandler& h = space.handler(c);
      const auto dofs = h.cell_dofs(cell);
      for (int s = 0; s < h.dofs_per_cell(); ++s) {
        u[dofs[s] + space.component_offset(c)] = f(mesh.map_to_physical(cell, h.local_node(s)))[c];
      }
    }
  }
  return u;
}

namespace {

/// Coefficients of the scalar field of one component on a cell, evaluated
/// at the given reference points.
void eval_scalar(const Space& space, int component, const DenseVector& u, int cell,
                 std::span<const Point> points, std::span<double> out) {
  const ScalarDofHandler& h = space.handler(component);
  const auto dofs = h.cell_dofs(cell);
  const int off = space.component_offset(component);
  std::vector<double> shapes(h.dofs_per_cell());
  for (std::size_t p = 0; p < points.size(); ++p) {
    scalar_shapes(h.degree(), points[p], shapes, {});
    double v = 0.0;
    for (int s = 0; s < h.dofs_per_cell(); ++s) v += shapes[s] * u[dofs[s] + off];
    out[p] = v;
  }
}

}  // namespace

DenseVector embed(const Space& coarse, const Space& fine, const DenseVector& u) {
  if (&coarse.mesh() != &fine.mesh()) {
    throw std::invalid_argument("embed: spaces live on different meshes");
  }
  for (int c = 0; c < kComponents; ++c) {
    if (fine.component_degree(c) < coarse.component_degree(c)) {
      throw std::invalid_argument("embed: target degree below source degree");
    }
  }
  if (u.size() != static_cast<std::size_t>(coarse.n_dofs())) {
    throw std::invalid_argument("embed: vector size does not match the source space");
  }
  DenseVector out(fine.n_dofs(), 0.0);
  for (const int cell : fine.mesh().active_cells()) {
    for (int c = 0; c < kComponents; ++c) {
      const ScalarDofHandler& h = fine.handler(c);
      std::vector<Point> nodes(h.dofs_per_cell());
      for (int s = 0; s < h.dofs_per_cell(); ++s) nodes[s] = h.local_node(s);
      std::vector<double> values(nodes.size());
      eval_scalar(coarse, c, u, cell, nodes, values);
      const auto dofs = h.cell_dofs(cell);
      for (int s = 0; s < h.dofs_per_cell(); ++s) {
        out[dofs[s] + fine.component_offset(c)] = values[s];
      }
    }
  }
  return out;
}

DenseVector transfer(const Space& from, const Space& to, const DenseVector& u) {
  const Mesh& old_mesh = from.mesh();
  const Mesh& new_mesh = to.mesh();
  const int n_old = static_cast<int>(old_mesh.cells().size());
  if (n_old > static_cast<int>(new_mesh.cells().size())) {
    throw std::invalid_argument("transfer: target mesh is not a refinement of the source");
  }
  DenseVector out(to.n_dofs(), 0.0);
  for (const int cell : new_mesh.active_cells()) {
    int ancestor = cell;
    Point offset{0.0, 0.0};
    double scale = 1.0;
    while (!(ancestor < n_old && old_mesh.cell(ancestor).active)) {
      const Cell& c = new_mesh.cell(ancestor);
      if (c.parent < 0) {
        throw std::invalid_argument("transfer: target mesh is not a refinement of the source");
      }
      const auto& siblings = new_mesh.cell(c.parent).children;
      const int k = static_cast<int>(std::find(siblings.begin(), siblings.end(), ancestor) -
                                     siblings.begin());
      offset = child_offset(k) + 0.5 * offset;
      scale *= 0.5;
      ancestor = c.parent;
    }
    for (int c = 0; c < kComponents; ++c) {
      const ScalarDofHandler& h = to.handler(c);
      std::vector<Point> nodes(h.dofs_per_cell());
      for (int s = 0; s < h.dofs_per_cell(); ++s) nodes[s] = offset + scale * h.local_node(s);
      std::vector<double> values(nodes.size());
      eval_scalar(from, c, u, ancestor, nodes, values);
      const auto dofs = h.cell_dofs(cell);
      for (int s = 0; s < h.dofs_per_cell(); ++s) {
        out[dofs[s] + to.component_offset(c)] = values[s];
      }
    }
  }
  to.constraints().distribute(out, false);
  return out;
}

}  // namespace goalfem
