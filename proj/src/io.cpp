#include "goalfem/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace goalfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(key, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + t + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(key, "expected an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected true or false");
}

Point to_point(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError(key, "expected a point 'x,y', got '" + text + "'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(key, part));
  return out;
}

ModelKind to_model(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "density") return ModelKind::Density;
  if (t == "boussinesq") return ModelKind::Boussinesq;
  if (t == "linear") return ModelKind::LinearVerification;
  throw ConfigError(key, "expected density, boussinesq or linear, got '" + t + "'");
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Density: return "density";
    case ModelKind::Boussinesq: return "boussinesq";
    case ModelKind::LinearVerification: return "linear";
  }
  return "?";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno), "empty key");
    if (kv.count(key)) throw ConfigError(key, "given twice");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  return parse_key_values(in, path.string());
}

std::vector<Goal> parse_goals(const std::string& text) {
  std::vector<Goal> goals;
  for (const auto& token : split(text, ';')) {
    if (token.empty()) continue;
    const auto parts = split(token, '@');
    const std::string& name = parts[0];
    auto point = [&](std::size_t i) {
      if (parts.size() <= i) throw ConfigError("goals", "'" + name + "' needs a point");
      return to_point("goals", parts[i]);
    };
    std::size_t want = 1;
    if (name == "mean_speed") {
      goals.emplace_back(MeanVelocityMagnitude{});
    } else if (name == "mean_temperature") {
      goals.emplace_back(MeanTemperature{});
    } else if (name == "heat_flux" || name == "boundary_heat_flux") {
      goals.emplace_back(BoundaryHeatFlux{});
    } else if (name == "temperature") {
      goals.emplace_back(PointTemperature{point(1)});
      want = 2;
    } else if (name == "v1" || name == "v2") {
      goals.emplace_back(PointVelocityComponent{point(1), name == "v1" ? 0 : 1});
      want = 2;
    } else if (name == "speed2" || name == "speed_squared") {
      goals.emplace_back(PointSpeedSquared{point(1)});
      want = 2;
    } else if (name == "dp" || name == "pressure_difference") {
      goals.emplace_back(PressureDifference{point(1), point(2)});
      want = 3;
    } else {
      throw ConfigError("goals", "unknown goal '" + name + "'");
    }
    if (parts.size() != want) throw ConfigError("goals", "malformed goal '" + token + "'");
  }
  if (goals.empty()) throw ConfigError("goals", "no goals given");
  return goals;
}

void apply_key_values(RunConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "preset") {
      cfg.preset = value;
    } else if (key == "model") {
      cfg.model = to_model(key, value);
    } else if (key == "sigma") {
      cfg.sigma = to_double(key, value);
    } else if (key == "E") {
      cfg.E = to_double(key, value);
    } else if (key == "gamma") {
      cfg.gamma = to_double(key, value);
    } else if (key == "boundary_temperature") {
      cfg.boundary_temperature = to_double(key, value);
    } else if (key == "geometry") {
      Geometry g = cfg.geometry.value_or(Geometry{GeometryKind::Square, {0.0, 0.0}, 0.3});
      if (value == "square") {
        g.kind = GeometryKind::Square;
      } else if (value == "disc") {
        g.kind = GeometryKind::Disc;
      } else {
        throw ConfigError(key, "expected square or disc");
      }
      cfg.geometry = g;
    } else if (key == "origin") {
      Geometry g = cfg.geometry.value_or(Geometry{GeometryKind::Square, {0.0, 0.0}, 0.3});
      g.origin = to_point(key, value);
      cfg.geometry = g;
    } else if (key == "size") {
      Geometry g = cfg.geometry.value_or(Geometry{GeometryKind::Square, {0.0, 0.0}, 0.3});
      g.size = to_double(key, value);
      cfg.geometry = g;
    } else if (key == "coarse_n") {
      cfg.coarse_subdivisions = to_int(key, value);
    } else if (key == "lasers") {
      std::vector<Point> pts;
      for (const auto& p : split(value, ';')) {
        if (!p.empty()) pts.push_back(to_point(key, p));
      }
      cfg.laser_centers = pts;
    } else if (key == "goals") {
      cfg.goals = parse_goals(value);
    } else if (key == "reference") {
      cfg.reference = to_list(key, value);
    } else if (key == "prerefine_levels") {
      cfg.prerefine_levels = to_int(key, value);
    } else if (key == "prerefine_radius") {
      cfg.prerefine_radius = to_double(key, value);
    } else if (key == "continuity_sign") {
      if (value == "as-printed") {
        cfg.continuity_sign = ContinuitySign::AsPrinted;
      } else if (value == "conservative") {
        cfg.continuity_sign = ContinuitySign::Conservative;
      } else {
        throw ConfigError(key, "expected as-printed or conservative");
      }
    } else if (key == "buoyancy_sign") {
      if (value == "physical") {
        cfg.buoyancy_sign = BuoyancySign::Physical;
      } else if (value == "as-printed") {
        cfg.buoyancy_sign = BuoyancySign::AsPrinted;
      } else {
        throw ConfigError(key, "expected physical or as-printed");
      }
    } else if (key == "source_ramp") {
      cfg.adapt.source_ramp = to_bool(key, value);
    } else if (key == "gravity") {
      const Point g = to_point(key, value);
      cfg.gravity = std::array<double, 2>{g.x, g.y};
    } else if (key == "tol") {
      cfg.adapt.tol = to_double(key, value);
    } else if (key == "max_ndofs") {
      cfg.adapt.max_ndofs = to_int(key, value);
    } else if (key == "mark_fraction") {
      cfg.adapt.mark_fraction = to_double(key, value);
    } else if (key == "max_levels") {
      cfg.adapt.max_levels = to_int(key, value);
    } else if (key == "eta_k_threshold") {
      cfg.adapt.eta_k_threshold = to_double(key, value);
    } else if (key == "max_reentries") {
      cfg.adapt.max_reentries = to_int(key, value);
    } else if (key == "newton_beta") {
      cfg.adapt.newton.beta = to_double(key, value);
    } else if (key == "max_line_search") {
      cfg.adapt.newton.max_line_search = to_int(key, value);
    } else if (key == "max_newton") {
      cfg.adapt.newton.max_newton = to_int(key, value);
    } else if (key == "newton_tolerance") {
      cfg.adapt.newton.tolerance = to_double(key, value);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "vtk") {
      cfg.write_vtk = to_bool(key, value);
    } else if (key == "self_reference") {
      cfg.self_reference = to_bool(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
}

void RunConfig::validate() const {
  const bool custom = preset == "custom";
  if (!custom && preset != "example1" && preset != "example2" && preset != "example3") {
    throw ConfigError("preset", "expected example1, example2, example3 or custom, got '" + preset + "'");
  }
  if (!custom) {
    if (geometry) throw ConfigError("geometry", "only a custom preset takes a geometry");
    if (coarse_subdivisions) throw ConfigError("coarse_n", "only a custom preset takes coarse_n");
    if (laser_centers) throw ConfigError("lasers", "only a custom preset takes laser positions");
    if (goals) throw ConfigError("goals", "only a custom preset takes a goal list");
  }
  if (gamma && preset != "example3" && !custom) {
    throw ConfigError("gamma", "gamma applies to example3 and custom presets");
  }
  if (sigma && !(*sigma > 0.0)) throw ConfigError("sigma", "must be positive");
  if (gamma && !(*gamma > 0.0)) throw ConfigError("gamma", "must be positive");
  if (boundary_temperature && !(*boundary_temperature > 0.0)) {
    throw ConfigError("boundary_temperature", "must be positive (Kelvin)");
  }
  if (geometry && !(geometry->size > 0.0)) throw ConfigError("size", "must be positive");
  if (coarse_subdivisions && *coarse_subdivisions < 1) throw ConfigError("coarse_n", "must be >= 1");
  try {
    adapt.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("adapt", e.what());
  }
}

Problem build_problem(const RunConfig& cfg) {
  cfg.validate();
  const bool custom = cfg.preset == "custom";
  Problem p = make_preset(custom ? "example1" : cfg.preset, cfg.model, cfg.sigma.value_or(0.0));
  p.name = cfg.preset;
  bool reference_valid = !custom;

  if (custom) {
    if (cfg.geometry) p.geometry = *cfg.geometry;
    if (cfg.coarse_subdivisions) p.coarse_subdivisions = *cfg.coarse_subdivisions;
    if (cfg.laser_centers) p.inputs.source.centers = *cfg.laser_centers;
    if (cfg.goals) p.goals = *cfg.goals;
  }
  if (cfg.E || cfg.gamma || custom) {
    const std::size_t n = p.inputs.source.centers.size();
    double E = cfg.E.value_or(p.name == "example3" ? 200.0 : p.name == "example2" ? 100.0 : 1e4);
    std::vector<double> amps(n, E);
    if (cfg.gamma || p.name == "example3") {
      const double gamma = cfg.gamma.value_or(2.0);
      if (n != 2) throw ConfigError("gamma", "gamma needs exactly two lasers");
      amps = {gamma * E, E / gamma};
    }
    if (amps != p.inputs.source.amplitudes) reference_valid = false;
    p.inputs.source.amplitudes = amps;
  }
  if (cfg.boundary_temperature) {
    if (*cfg.boundary_temperature != p.boundary.temperature) reference_valid = false;
    p.boundary.temperature = *cfg.boundary_temperature;
  }
  if (cfg.gravity) {
    if (*cfg.gravity != p.inputs.params.gravity) reference_valid = false;
    p.inputs.params.gravity = *cfg.gravity;
  }
  if (cfg.continuity_sign != ContinuitySign::Conservative && cfg.model == ModelKind::Density) {
    reference_valid = false;
  }
  p.inputs.continuity_sign = cfg.continuity_sign;
  if (cfg.buoyancy_sign != BuoyancySign::Physical && cfg.model == ModelKind::Boussinesq) {
    reference_valid = false;
  }
  p.inputs.buoyancy_sign = cfg.buoyancy_sign;
  if (cfg.prerefine_levels) p.prerefine_levels = *cfg.prerefine_levels;
  if (cfg.prerefine_radius) p.prerefine_radius = *cfg.prerefine_radius;

  if (!reference_valid) {
    p.reference.reset();
    p.reference_source = "none";
  }
  if (cfg.reference) {
    if (cfg.reference->size() != p.goals.size()) {
      throw ConfigError("reference", "expected " + std::to_string(p.goals.size()) + " values");
    }
    p.reference = *cfg.reference;
    p.reference_source = "config";
  }
  try {
    p.inputs.source.validate();
    p.inputs.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem", e.what());
  }
  return p;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::vector<std::string> csv_header(std::size_t n_goals) {
  std::vector<std::string> h{"level", "dofs"};
  for (std::size_t i = 1; i <= n_goals; ++i) h.push_back("J_" + std::to_string(i));
  for (std::size_t i = 1; i <= n_goals; ++i) h.push_back("abs_err_" + std::to_string(i));
  for (std::size_t i = 1; i <= n_goals; ++i) h.push_back("rel_err_" + std::to_string(i));
  for (const char* c : {"combined_err", "eta_p", "eta_a", "eta_k", "eta_h", "I_eff", "I_eff_p",
                        "I_eff_a", "newton_steps", "line_search_steps", "cells", "enriched_dofs",
                        "reentries", "ramp_stages"}) {
    h.emplace_back(c);
  }
  return h;
}

namespace {

std::vector<std::string> record_row(const LevelRecord& rec, std::size_t n_goals, bool complete) {
  std::vector<std::string> row{std::to_string(rec.level), std::to_string(rec.n_dofs)};
  auto values = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < n_goals; ++i) row.push_back(i < v.size() ? format_number(v[i]) : "");
  };
  values(rec.J);
  values(rec.abs_error);
  values(rec.rel_error);
  row.push_back(opt_number(rec.combined_error));
  for (const double v : {rec.estimator.eta_p, rec.estimator.eta_a, rec.estimator.eta_k,
                         rec.estimator.eta_h}) {
    row.push_back(complete ? format_number(v) : "");
  }
  row.push_back(opt_number(rec.eff.total));
  row.push_back(opt_number(rec.eff.primal));
  row.push_back(opt_number(rec.eff.adjoint));
  row.push_back(std::to_string(rec.newton.newton_steps));
  row.push_back(std::to_string(rec.newton.line_search_steps));
  row.push_back(std::to_string(rec.n_cells));
  row.push_back(std::to_string(rec.n_enriched_dofs));
  row.push_back(std::to_string(rec.reentries));
  row.push_back(std::to_string(rec.ramp_stages));
  return row;
}

}  // namespace

std::vector<std::string> csv_row(const LevelRecord& rec) {
  return record_row(rec, rec.J.size(), true);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_field(fields[i]);
    }
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw std::invalid_argument("csv row width differs from header");
    line(r);
  }
}

void write_convergence_csv(std::ostream& out, const AdaptResult& result, std::size_t n_goals) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < result.levels.size(); ++k) {
    const bool failed = result.diverged && k + 1 == result.levels.size();
    rows.push_back(record_row(result.levels[k], n_goals, !failed));
  }
  write_csv(out, csv_header(n_goals), rows);
}

void write_vtk(std::ostream& out, const Space& space, const DenseVector& U,
               const std::string& title) {
  const Mesh& mesh = space.mesh();
  const auto cells = mesh.active_cells();
  const std::size_t nv = mesh.vertices().size();

  long double p_int = 0.0L;
  long double area = 0.0L;
  CellValues cv(space, quadrature_for(space.degrees(), 0));
  for (const int c : cells) {
    cv.reinit(c);
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      p_int += cv.JxW(q) * cv.sample(U, q).p;
      area += cv.JxW(q);
    }
  }
  const double p_mean = static_cast<double>(p_int / area);

  auto nodal = [&](int component, int v) {
    const int d = space.handler(component).vertex_dof(v);
    return d < 0 ? 0.0 : U[space.component_offset(component) + d];
  };

  char buf[96];
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.16e %.16e 0\n", v.pos.x, v.pos.y);
    out << buf;
  }
  out << "CELLS " << cells.size() << ' ' << 5 * cells.size() << '\n';
  for (const int c : cells) {
    const auto& vs = mesh.cell(c).vertices;
    out << "4 " << vs[0] << ' ' << vs[1] << ' ' << vs[2] << ' ' << vs[3] << '\n';
  }
  out << "CELL_TYPES " << cells.size() << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) out << "9\n";
  out << "POINT_DATA " << nv << "\nVECTORS velocity double\n";
  for (std::size_t v = 0; v < nv; ++v) {
    std::snprintf(buf, sizeof buf, "%.12e %.12e 0\n", nodal(VelocityX, static_cast<int>(v)),
                  nodal(VelocityY, static_cast<int>(v)));
    out << buf;
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (std::size_t v = 0; v < nv; ++v) {
    out << format_number(nodal(Pressure, static_cast<int>(v)) - p_mean) << '\n';
  }
  out << "SCALARS temperature double 1\nLOOKUP_TABLE default\n";
  for (std::size_t v = 0; v < nv; ++v) {
    out << format_number(nodal(Temperature, static_cast<int>(v))) << '\n';
  }
}

void write_report(std::ostream& out, const Problem& problem, const AdaptResult& result) {
  out << "preset: " << problem.name << '\n';
  out << "model: " << model_name(problem.inputs.kind) << '\n';
  out << "sigma: " << format_number(problem.inputs.source.sigma) << '\n';
  out << "reference: " << result.reference_source << '\n';
  out << "levels: " << result.levels.size() << '\n';
  out << "status: " << (result.diverged ? "DIVERGED (" + result.failure + ")" : "ok") << '\n';
  const LevelRecord* last = nullptr;
  for (auto it = result.levels.rbegin(); it != result.levels.rend(); ++it) {
    if (!it->J.empty()) {
      last = &*it;
      break;
    }
  }
  if (!last) {
    out << "no completed level\n";
    return;
  }
  out << "final level: " << last->level << "  dofs: " << last->n_dofs << '\n';
  for (std::size_t i = 0; i < problem.goals.size() && i < last->J.size(); ++i) {
    out << "J_" << i + 1 << ' ' << goal_label(problem.goals[i]) << " = " << format_number(last->J[i]);
    if (result.reference) {
      out << "  reference = " << format_number((*result.reference)[i])
          << "  rel_err = " << format_number(last->rel_error.at(i));
    }
    out << '\n';
  }
  out << "eta_h = " << format_number(last->estimator.eta_h)
      << "  eta_p = " << format_number(last->estimator.eta_p)
      << "  eta_a = " << format_number(last->estimator.eta_a)
      << "  eta_k = " << format_number(last->estimator.eta_k) << '\n';
  if (last->eff.total) out << "I_eff = " << format_number(*last->eff.total) << '\n';
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  auto end_row = [&] {
    row.push_back(field);
    field.clear();
    if (t.header.empty()) {
      t.header = row;
    } else {
      t.rows.push_back(row);
    }
    row.clear();
    any = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  if (any || !field.empty()) end_row();
  return t;
}

DiffSummary diff_reports(const CsvTable& a, const CsvTable& b,
                         const std::map<std::string, double>& rtol, double default_rtol) {
  if (a.header != b.header) throw std::invalid_argument("csv schemas differ (header)");
  if (a.rows.size() != b.rows.size()) throw std::invalid_argument("csv schemas differ (row count)");
  for (const auto& [col, tol] : rtol) {
    if (col != "default" && std::find(a.header.begin(), a.header.end(), col) == a.header.end()) {
      throw std::invalid_argument("tolerance for unknown column '" + col + "'");
    }
    if (!(tol >= 0.0)) throw std::invalid_argument("tolerance for '" + col + "' must be >= 0");
  }
  const auto dflt = rtol.count("default") ? rtol.at("default") : default_rtol;
  DiffSummary s;
  auto parse = [](const std::string& f, double& v) {
    if (f.empty()) return false;
    char* end = nullptr;
    v = std::strtod(f.c_str(), &end);
    return end == f.c_str() + f.size();
  };
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].size() != a.header.size() || b.rows[r].size() != b.header.size()) {
      throw std::invalid_argument("csv row " + std::to_string(r + 1) + " width differs from header");
    }
    for (std::size_t c = 0; c < a.header.size(); ++c) {
      const std::string& fa = a.rows[r][c];
      const std::string& fb = b.rows[r][c];
      const std::string& col = a.header[c];
      const std::string where = "row " + std::to_string(r + 1) + " column " + col;
      ++s.compared;
      double va = 0.0;
      double vb = 0.0;
      const bool na = parse(fa, va);
      const bool nb = parse(fb, vb);
      if (!na || !nb) {
        if (fa != fb) s.failures.push_back(where + ": '" + fa + "' vs '" + fb + "'");
        continue;
      }
      if (std::isnan(va) || std::isnan(vb)) {
        s.failures.push_back(where + ": NaN");
        continue;
      }
      const auto it = rtol.find(col);
      const double tol = it != rtol.end() ? it->second : dflt;
      if (va == vb) continue;
      if (!(std::abs(va - vb) <= tol * std::max(std::abs(va), std::abs(vb)))) {
        s.failures.push_back(where + ": " + fa + " vs " + fb);
      }
    }
  }
  s.pass = s.failures.empty();
  return s;
}

}  // namespace goalfem
