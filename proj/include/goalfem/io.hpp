#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalfem/adapt.hpp"

namespace goalfem {

/// Bad configuration; key() names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat key = value lines, '#' starts a comment.
KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>");
KeyValues read_key_values(const std::filesystem::path& path);

struct RunConfig {
  std::string preset = "example1";  ///< example1, example2, example3, custom
  ModelKind model = ModelKind::Density;
  std::optional<double> sigma;
  std::optional<double> E;
  std::optional<double> gamma;
  std::optional<double> boundary_temperature;
  /// custom only
  std::optional<Geometry> geometry;
  std::optional<int> coarse_subdivisions;
  std::optional<std::vector<Point>> laser_centers;
  std::optional<std::vector<Goal>> goals;
  std::optional<std::vector<double>> reference;
  std::optional<int> prerefine_levels;
  std::optional<double> prerefine_radius;
  ContinuitySign continuity_sign = ContinuitySign::Conservative;
  BuoyancySign buoyancy_sign = BuoyancySign::Physical;
  std::optional<std::array<double, 2>> gravity;
  AdaptConfig adapt;
  std::filesystem::path out_dir = "out";
  bool write_vtk = true;
  /// Fine-level J_high as reference when the preset has none.
  bool self_reference = true;

  void validate() const;
};

/// Applies recognized keys on top of cfg; unknown keys are errors.
void apply_key_values(RunConfig& cfg, const KeyValues& kv);

/// "mean_speed; mean_temperature; temperature@0.15,0.15; v1@x,y; v2@x,y;
/// speed2@x,y; dp@x,y@x,y; heat_flux"
std::vector<Goal> parse_goals(const std::string& text);

Problem build_problem(const RunConfig& cfg);

/// Header of convergence.csv for n goals.
std::vector<std::string> csv_header(std::size_t n_goals);
std::vector<std::string> csv_row(const LevelRecord& rec);
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_convergence_csv(std::ostream& out, const AdaptResult& result, std::size_t n_goals);

/// Legacy ASCII VTK: active quads, point data velocity, pressure (mean
/// zero) and temperature.
void write_vtk(std::ostream& out, const Space& space, const DenseVector& U,
               const std::string& title = "goalfem");

void write_report(std::ostream& out, const Problem& problem, const AdaptResult& result);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(std::istream& in);

struct DiffSummary {
  bool pass = true;
  std::size_t compared = 0;
  std::vector<std::string> failures;
};

/// Column-wise |a - b| <= rtol * max(|a|, |b|); rtol per column, "default"
/// otherwise. Empty cells must match. NaN fails.
DiffSummary diff_reports(const CsvTable& a, const CsvTable& b,
                         const std::map<std::string, double>& rtol, double default_rtol = 1e-12);

std::string format_number(double v);

}  // namespace goalfem
