#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "goalfem/linalg.hpp"
#include "goalfem/mesh.hpp"
#include "goalfem/quadrature.hpp"

namespace goalfem {

/// Polynomial degrees of the velocity, pressure and temperature fields.
struct DegreeTriple {
  int velocity = 2;
  int pressure = 1;
  int temperature = 1;

  int max() const;
  void validate() const;
};

inline constexpr DegreeTriple kPrimalDegrees{2, 1, 1};
inline constexpr DegreeTriple kEnrichedDegrees{4, 2, 2};

/// Gauss rule with (max degree + 1 + boost) points per axis.
QuadratureRule quadrature_for(const DegreeTriple& degrees, int nonlinearity_boost);

/// Boost used for every nonlinear assembly and goal integral.
inline constexpr int kNonlinearBoost = 2;

enum Component : int { VelocityX = 0, VelocityY = 1, Pressure = 2, Temperature = 3 };
inline constexpr int kComponents = 4;

/// Values and physical gradients of U = (v, p, theta) at one point.
/// Also used for the dual quantities that multiply a test function.
struct Sample {
  std::array<double, 2> v{};
  std::array<std::array<double, 2>, 2> grad_v{};  ///< grad_v[i][j] = d v_i / d x_j
  double p = 0.0;
  std::array<double, 2> grad_p{};  ///< not part of the flux algebra below
  double theta = 0.0;
  std::array<double, 2> grad_theta{};
};

/// Packing of the ten quantities a residual can pair with: v, grad v, p,
/// theta, grad theta.
inline constexpr int kSampleDim = 10;
using SampleArray = std::array<double, kSampleDim>;

SampleArray to_array(const Sample& s);
Sample from_array(const SampleArray& a);
double pair(const Sample& flux, const Sample& test);
/// s * phi with the product rule applied to the gradients.
Sample scaled(const Sample& s, double phi, std::array<double, 2> grad_phi);
Sample operator-(const Sample& a, const Sample& b);

/// Packed indices a basis function of the given component touches:
/// value, d/dx, d/dy (pressure has only a value).
std::span<const int> sample_slots(int component);

/// Constrained dof = sum of weight * master + inhomogeneity.
struct Constraint {
  std::vector<int> masters;
  std::vector<double> weights;
  double inhomogeneity = 0.0;
};

class ConstraintSet {
 public:
  explicit ConstraintSet(std::size_t n_dofs = 0);

  std::size_t size() const { return index_.size(); }
  bool is_constrained(int dof) const { return index_[dof] >= 0; }
  const Constraint& entry(int dof) const { return entries_[index_[dof]]; }
  std::size_t n_constrained() const { return entries_.size(); }
  /// Constrained dof ids in ascending order.
  std::vector<int> constrained_dofs() const;

  void add(int dof, Constraint c);
  /// Substitutes constrained masters until no master is itself constrained.
  void close();

  /// Overwrites constrained entries from their masters. Homogeneous mode
  /// drops the inhomogeneity (for updates, adjoints and differences).
  void distribute(DenseVector& u, bool homogeneous) const;
  /// Zeroes constrained entries.
  void zero_constrained(DenseVector& u) const;

 private:
  std::vector<int> index_;
  std::vector<Constraint> entries_;
};

/// Continuous Q_k numbering of one scalar field on the active cells.
class ScalarDofHandler {
 public:
  ScalarDofHandler(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int n_dofs() const { return n_dofs_; }
  int dofs_per_cell() const { return (degree_ + 1) * (degree_ + 1); }
  /// Local order is lexicographic over the (k+1)^2 node grid: i + (k+1) j.
  std::span<const int> cell_dofs(int cell) const;
  Point local_node(int local) const;
  bool on_boundary(int dof) const { return boundary_[dof]; }
  /// Interpolatory constraints of the hanging dofs, in local numbering.
  const std::vector<std::pair<int, Constraint>>& hanging() const { return hanging_; }

  /// Global dof of the vertex, or -1 if the vertex is unused.
  int vertex_dof(int vertex) const { return vertex_dof_[vertex]; }

 private:
  int degree_;
  int n_dofs_ = 0;
  int n_cells_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> vertex_dof_;
  std::vector<bool> boundary_;
  std::vector<std::pair<int, Constraint>> hanging_;
};

/// Dirichlet data: v = 0 and theta = temperature on the boundary; one
/// pressure dof pinned to zero.
struct BoundarySpec {
  double temperature = 293.15;
  bool pin_pressure = true;
  bool dirichlet = true;
};

/// Product space V_h = Q_kv^2 x Q_kp x Q_kt with hanging-node and Dirichlet
/// constraints. Global numbering is blocked by component.
class Space {
 public:
  static std::shared_ptr<const Space> build(std::shared_ptr<const Mesh> mesh,
                                            const DegreeTriple& degrees,
                                            const BoundarySpec& boundary);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const DegreeTriple& degrees() const { return degrees_; }
  const BoundarySpec& boundary() const { return boundary_; }
  int n_dofs() const { return n_dofs_; }
  int component_degree(int component) const;
  int component_offset(int component) const { return offsets_[component]; }
  int component_n_dofs(int component) const;
  const ScalarDofHandler& handler(int component) const { return *handlers_[component]; }
  const ConstraintSet& constraints() const { return constraints_; }

  /// Local dofs of all components on the cell, components in order.
  int dofs_per_cell() const { return dofs_per_cell_; }
  int local_component(int local) const { return local_component_[local]; }
  int local_scalar_index(int local) const { return local_scalar_[local]; }
  void cell_dofs(int cell, std::vector<int>& out) const;

  /// Initial state: v = 0, p = 0, theta = boundary temperature.
  DenseVector initial_state() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  DegreeTriple degrees_;
  BoundarySpec boundary_;
  std::array<std::shared_ptr<const ScalarDofHandler>, kComponents> handlers_;
  std::array<int, kComponents + 1> offsets_{};
  int n_dofs_ = 0;
  int dofs_per_cell_ = 0;
  std::vector<int> local_component_;
  std::vector<int> local_scalar_;
  ConstraintSet constraints_;
};

/// Jacobian data of the bilinear cell map at a reference point.
struct CellMapping {
  Point x;
  double det = 0.0;
  std::array<std::array<double, 2>, 2> inv{};  ///< inverse Jacobian d xi / d x
};

CellMapping map_cell(const Mesh& mesh, int cell, Point xi);

/// Shape values and physical gradients of every local dof of a Space at a
/// fixed set of reference points, re-evaluated per cell.
class CellValues {
 public:
  CellValues(const Space& space, QuadratureRule rule);

  void reinit(int cell);
  int cell() const { return cell_; }
  std::size_t n_points() const { return rule_.size(); }
  int n_local() const { return space_->dofs_per_cell(); }
  const std::vector<int>& dofs() const { return dofs_; }
  Point point(std::size_t q) const { return points_[q]; }
  Point reference_point(std::size_t q) const { return rule_.points[q]; }
  double JxW(std::size_t q) const { return jxw_[q]; }
  double shape(int local, std::size_t q) const;
  std::array<double, 2> grad(int local, std::size_t q) const;

  /// Sample of a global coefficient vector at point q of the current cell.
  Sample sample(const DenseVector& u, std::size_t q) const;
  /// Sample of the local basis function as a vector-valued test function.
  Sample basis_sample(int local, std::size_t q) const;

 private:
  struct Table {
    int degree = 0;
    int n = 0;
    std::vector<double> value;      // [q * n + s]
    std::vector<double> ref_grad;   // [(q * n + s) * 2 + d]
    std::vector<double> phys_grad;  // same layout, per cell
  };
  const Table& table_for(int component) const { return tables_[table_index_[component]]; }

  const Space* space_;
  QuadratureRule rule_;
  std::vector<Table> tables_;
  std::array<int, kComponents> table_index_{};
  int cell_ = -1;
  std::vector<int> dofs_;
  std::vector<Point> points_;
  std::vector<double> jxw_;
};

/// Shape values of a scalar Q_k basis at a reference point.
void scalar_shapes(int degree, Point xi, std::span<double> values,
                   std::span<std::array<double, 2>> ref_grads);

class OutOfDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellPoint {
  int cell = -1;
  Point xi;
};

/// Active cell containing x (lowest id on ties) and its reference point.
CellPoint locate_point(const Mesh& mesh, Point x);
/// Inverse bilinear map by Newton; nullopt if it fails to converge.
std::optional<Point> inverse_map(const Mesh& mesh, int cell, Point x);

/// Field sample of u at reference point xi of a cell.
Sample evaluate_in_cell(const Space& space, const DenseVector& u, int cell, Point xi);
/// Field values and gradients at a physical point.
Sample evaluate_at_point(const Space& space, const DenseVector& u, Point x);

/// Nodal interpolation of (v1, v2, p, theta)(x). Constraints are not applied.
DenseVector interpolate(const Space& space,
                        const std::function<std::array<double, 4>(Point)>& f);

/// Same-mesh embedding into a space of componentwise higher degree. Exact,
/// since Q_k is contained in Q_k' for k <= k'.
DenseVector embed(const Space& coarse, const Space& fine, const DenseVector& u);

/// Moves a state from a mesh onto one of its refinements by interpolating
/// in the reference coordinates of the old active ancestor.
DenseVector transfer(const Space& from, const Space& to, const DenseVector& u);

}  // namespace goalfem
