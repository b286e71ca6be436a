#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "goalfem/io.hpp"

using namespace goalfem;

namespace {

void write_outputs(const RunConfig& cfg, const Problem& problem, const AdaptResult& result) {
  {
    std::ofstream csv(cfg.out_dir / "convergence.csv", std::ios::binary);
    write_convergence_csv(csv, result, problem.goals.size());
  }
  std::ofstream report(cfg.out_dir / "report.txt");
  write_report(report, problem, result);
}

int run(const RunConfig& base, const std::string& config_file, const KeyValues& flags) {
  RunConfig cfg = base;
  try {
    if (!config_file.empty()) apply_key_values(cfg, read_key_values(config_file));
    apply_key_values(cfg, flags);
  } catch (const ConfigError& e) {
    std::cerr << "goalfem: bad configuration, key '" << e.key() << "': " << e.what() << '\n';
    return 64;
  }
  Problem problem;
  try {
    problem = build_problem(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "goalfem: bad configuration, key '" << e.key() << "': " << e.what() << '\n';
    return 64;
  }
  std::filesystem::create_directories(cfg.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  AdaptResult partial;
  auto on_level = [&](const LevelRecord& rec, const Space& primal, const DenseVector& U) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "level %2d  dofs %7d  eta_h % .4e  eta_k % .2e  newton %d/%d  %.1fs\n",
                 rec.level, rec.n_dofs, rec.estimator.eta_h, rec.estimator.eta_k,
                 rec.newton.newton_steps, rec.newton.line_search_steps, secs);
    if (cfg.write_vtk) {
      std::ofstream vtk(cfg.out_dir / ("fields_" + std::to_string(rec.level) + ".vtk"));
      write_vtk(vtk, primal, U, problem.name + " level " + std::to_string(rec.level));
    }
    partial.levels.push_back(rec);
    partial.reference = problem.reference;
    partial.reference_source = problem.reference_source;
    write_outputs(cfg, problem, partial);
  };
  AdaptResult result = adaptive_loop(problem, cfg.adapt, on_level);

  if (!result.reference && cfg.self_reference && !result.levels.empty() && !result.diverged) {
    const LevelRecord& fine = result.levels.back();
    result.reference = fine.J_high;
    result.reference_source = "self:J_high(level " + std::to_string(fine.level) + ")";
    for (auto& rec : result.levels) apply_reference(rec, *result.reference);
  }
  write_outputs(cfg, problem, result);
  if (result.diverged) {
    std::cerr << "goalfem: run diverged, partial outputs in " << cfg.out_dir << ": "
              << result.failure << '\n';
    return 2;
  }
  return 0;
}

int diff(const std::string& a, const std::string& b, const std::string& rtol_file) {
  std::map<std::string, double> rtol;
  if (!rtol_file.empty()) {
    for (const auto& [key, value] : read_key_values(rtol_file)) {
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (end != value.c_str() + value.size()) {
        throw ConfigError(key, "expected a tolerance, got '" + value + "'");
      }
      rtol[key] = v;
    }
  }
  auto load = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_csv(in);
  };
  const DiffSummary s = diff_reports(load(a), load(b), rtol);
  for (const auto& f : s.failures) std::cout << "FAIL " << f << '\n';
  std::cout << (s.pass ? "PASS" : "FAIL") << ": " << s.compared << " values compared, "
            << s.failures.size() << " outside tolerance\n";
  return s.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-oriented adaptive finite elements for laser-heated flow"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Adaptive run; writes convergence.csv, fields_L.vtk, report.txt");
  std::string preset;
  std::string config_file;
  std::string sigma;
  std::string model;
  std::string tol;
  std::string max_ndofs;
  std::string out;
  run_cmd->add_option("--preset", preset, "example1, example2, example3 or custom");
  run_cmd->add_option("--config", config_file, "key = value file")->check(CLI::ExistingFile);
  run_cmd->add_option("--sigma", sigma, "laser width");
  run_cmd->add_option("--model", model, "density or boussinesq");
  run_cmd->add_option("--tol", tol, "target TOL");
  run_cmd->add_option("--max-ndofs", max_ndofs, "dof budget");
  run_cmd->add_option("--out", out, "output directory");

  auto* diff_cmd = app.add_subcommand("diff", "Compare two convergence.csv files");
  std::string file_a;
  std::string file_b;
  std::string rtol_file;
  diff_cmd->add_option("A", file_a)->required()->check(CLI::ExistingFile);
  diff_cmd->add_option("B", file_b)->required()->check(CLI::ExistingFile);
  diff_cmd->add_option("--rtol-file", rtol_file, "column = rtol lines, 'default' for the rest")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      KeyValues flags;
      if (!preset.empty()) flags["preset"] = preset;
      if (!sigma.empty()) flags["sigma"] = sigma;
      if (!model.empty()) flags["model"] = model;
      if (!tol.empty()) flags["tol"] = tol;
      if (!max_ndofs.empty()) flags["max_ndofs"] = max_ndofs;
      if (!out.empty()) flags["out"] = out;
      return run(RunConfig{}, config_file, flags);
    }
    return diff(file_a, file_b, rtol_file);
  } catch (const ConfigError& e) {
    std::cerr << "goalfem: bad input, key '" << e.key() << "': " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "goalfem: " << e.what() << '\n';
    return 1;
  }
}
