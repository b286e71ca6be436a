#pragma once

#include <optional>
#include <string>
#include <vector>

#include "goalfem/fespace.hpp"
#include "goalfem/goals.hpp"
#include "goalfem/mesh.hpp"
#include "goalfem/model.hpp"

namespace goalfem {

/// Everything that defines one adaptive experiment.
struct Problem {
  std::string name = "custom";
  Geometry geometry{GeometryKind::Square, {0.0, 0.0}, 0.3};
  int coarse_subdivisions = 4;  ///< square only
  ModelInputs inputs;
  BoundarySpec boundary;
  std::vector<Goal> goals;
  std::optional<std::vector<double>> reference;
  std::string reference_source = "none";
  /// Negative: derive from sigma and the coarse cell size.
  int prerefine_levels = -1;
  /// Non-positive: 8 sigma.
  double prerefine_radius = 0.0;

  Mesh coarse_mesh() const;
  /// Coarse mesh refined around the laser centers until h <= sigma there.
  Mesh initial_mesh() const;
};

/// Number of halvings taking a cell of size h0 down to at most sigma.
int prerefinement_levels(double h0, double sigma);

/// Example-2 reference values per sigma in {1e-1, 1e-2, 1e-3, 1e-4}.
std::optional<std::vector<double>> example2_reference(double sigma);
/// Example-3 reference values for the Density or Boussinesq model.
std::vector<double> example3_reference(ModelKind kind);

/// example1, example2, example3; sigma <= 0 keeps the preset default.
Problem make_preset(const std::string& name, ModelKind kind = ModelKind::Density,
                    double sigma = 0.0);

}  // namespace goalfem
