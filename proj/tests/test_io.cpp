#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "goalfem/io.hpp"
#include "support.hpp"

using namespace goalfem;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "test.cfg");
}

std::string config_error_key(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

CsvTable table(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

const char* kCsv =
    "level,dofs,J_1\r\n"
    "0,100,1.000000000000e+00\r\n"
    "1,200,1.100000000000e+00\r\n";

RunConfig tiny_config() {
  RunConfig cfg;
  apply_key_values(cfg, parse(
                            "preset = custom\n"
                            "size = 0.3\n"
                            "coarse_n = 2\n"
                            "lasers = 0.05,0.05; 0.25,0.05\n"
                            "sigma = 0.05\n"
                            "E = 50\n"
                            "goals = mean_speed; temperature@0.15,0.15\n"
                            "max_levels = 2\n"
                            "mark_fraction = 0.25\n"));
  return cfg;
}

}  // namespace

TEST(KeyValueFile, CommentsAndWhitespace) {
  const KeyValues kv = parse("# header\n  sigma = 1e-2   # trailing\n\nmodel=boussinesq\n");
  EXPECT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("sigma"), "1e-2");
  EXPECT_EQ(kv.at("model"), "boussinesq");
}

TEST(KeyValueFile, Errors) {
  EXPECT_EQ(config_error_key([] { parse("sigma 1e-2\n"); }), "test.cfg:1");
  EXPECT_EQ(config_error_key([] { parse("a = 1\na = 2\n"); }), "a");
  EXPECT_EQ(config_error_key([] { parse(" = 2\n"); }), "test.cfg:1");
  EXPECT_EQ(config_error_key([] { read_key_values("/nonexistent/goalfem.cfg"); }),
            "/nonexistent/goalfem.cfg");
}

TEST(RunConfigKeys, BadValuesNameTheirKey) {
  RunConfig cfg;
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"sigma", "abc"}}); }), "sigma");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"sigma", "nan"}}); }), "sigma");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"max_ndofs", "1.5"}}); }), "max_ndofs");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"model", "stokes"}}); }), "model");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"vtk", "maybe"}}); }), "vtk");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"colour", "red"}}); }), "colour");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"origin", "1"}}); }), "origin");
  EXPECT_EQ(config_error_key([&] { apply_key_values(cfg, {{"continuity_sign", "x"}}); }),
            "continuity_sign");
}

TEST(RunConfigKeys, PresetConsistency) {
  RunConfig cfg;
  cfg.preset = "example3";
  cfg.geometry = Geometry{GeometryKind::Square, {0, 0}, 1.0};
  EXPECT_EQ(config_error_key([&] { build_problem(cfg); }), "geometry");
  RunConfig bad;
  bad.preset = "example7";
  EXPECT_EQ(config_error_key([&] { build_problem(bad); }), "preset");
  RunConfig neg;
  neg.sigma = -1.0;
  EXPECT_EQ(config_error_key([&] { build_problem(neg); }), "sigma");
  RunConfig frac;
  frac.adapt.mark_fraction = 2.0;
  EXPECT_EQ(config_error_key([&] { build_problem(frac); }), "adapt");
  RunConfig g;
  g.preset = "example2";
  g.gamma = 3.0;
  EXPECT_EQ(config_error_key([&] { build_problem(g); }), "gamma");
}

TEST(Goals, ParseAll) {
  const auto g = parse_goals(
      "mean_speed; mean_temperature; heat_flux; temperature@0.1,0.2; v1@0.1,0.2; v2@0.1,0.2; "
      "speed2@0.3,0.1; dp@0.1,0.1@0.2,0.1");
  ASSERT_EQ(g.size(), 8u);
  EXPECT_TRUE(std::holds_alternative<MeanVelocityMagnitude>(g[0]));
  EXPECT_TRUE(std::holds_alternative<BoundaryHeatFlux>(g[2]));
  EXPECT_EQ(std::get<PointVelocityComponent>(g[5]).axis, 1);
  const auto& dp = std::get<PressureDifference>(g[7]);
  EXPECT_DOUBLE_EQ(dp.b.x, 0.2);
  EXPECT_EQ(config_error_key([] { parse_goals("vorticity"); }), "goals");
  EXPECT_EQ(config_error_key([] { parse_goals("temperature"); }), "goals");
  EXPECT_EQ(config_error_key([] { parse_goals(" ; "); }), "goals");
}

TEST(BuildProblem, PresetReferences) {
  RunConfig ex2;
  ex2.preset = "example2";
  ex2.sigma = 1e-2;
  const Problem p2 = build_problem(ex2);
  ASSERT_TRUE(p2.reference.has_value());
  EXPECT_EQ((*p2.reference)[1], 302.1829);

  RunConfig ex3;
  ex3.preset = "example3";
  ex3.model = ModelKind::Boussinesq;
  const Problem p3 = build_problem(ex3);
  ASSERT_TRUE(p3.reference.has_value());
  EXPECT_EQ((*p3.reference)[4], 353.919688);
  EXPECT_EQ(p3.geometry.kind, GeometryKind::Disc);
  EXPECT_EQ(p3.inputs.source.amplitudes, (std::vector<double>{400.0, 100.0}));
}

TEST(BuildProblem, ChangedPhysicsDropsReference) {
  RunConfig cfg;
  cfg.preset = "example3";
  cfg.E = 300.0;
  EXPECT_FALSE(build_problem(cfg).reference.has_value());
  cfg.E.reset();
  cfg.continuity_sign = ContinuitySign::AsPrinted;
  EXPECT_FALSE(build_problem(cfg).reference.has_value());
  cfg.reference = std::vector<double>{1, 2, 3, 4, 5, 6};
  const Problem p = build_problem(cfg);
  EXPECT_EQ(p.reference_source, "config");
  cfg.reference = std::vector<double>{1, 2};
  EXPECT_EQ(config_error_key([&] { build_problem(cfg); }), "reference");
}

TEST(BuildProblem, Custom) {
  const Problem p = build_problem(tiny_config());
  EXPECT_EQ(p.coarse_subdivisions, 2);
  EXPECT_EQ(p.goals.size(), 2u);
  EXPECT_EQ(p.inputs.source.amplitudes, (std::vector<double>{50.0, 50.0}));
  EXPECT_FALSE(p.reference.has_value());
}

TEST(Csv, QuotingRoundTrip) {
  std::ostringstream out;
  write_csv(out, {"a", "b,c", "d"}, {{"1", "x \"y\"", "line\nbreak"}});
  EXPECT_EQ(out.str(), "a,\"b,c\",d\r\n1,\"x \"\"y\"\"\",\"line\nbreak\"\r\n");
  const CsvTable t = table(out.str());
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b,c", "d"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "x \"y\"");
  EXPECT_EQ(t.rows[0][2], "line\nbreak");
  EXPECT_THROW(table("a,\"b\r\n"), std::invalid_argument);
}

TEST(Csv, HeaderColumns) {
  const auto h = csv_header(2);
  EXPECT_EQ(h[0], "level");
  EXPECT_EQ(h[1], "dofs");
  EXPECT_EQ(h[2], "J_1");
  EXPECT_EQ(h[3], "J_2");
  EXPECT_NE(std::find(h.begin(), h.end(), "eta_h"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "I_eff"), h.end());
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(format_number(1.5), "1.500000000000e+00");
  EXPECT_EQ(format_number(-2.5e-7), "-2.500000000000e-07");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Diff, IdenticalPasses) {
  const DiffSummary s = diff_reports(table(kCsv), table(kCsv), {});
  EXPECT_TRUE(s.pass);
  EXPECT_EQ(s.compared, 6u);
}

TEST(Diff, PerturbedValueNamesRowAndColumn) {
  std::string other = kCsv;
  other.replace(other.find("1.100000000000e+00"), 18, "1.100000100000e+00");
  const DiffSummary s = diff_reports(table(kCsv), table(other), {});
  EXPECT_FALSE(s.pass);
  ASSERT_EQ(s.failures.size(), 1u);
  EXPECT_NE(s.failures[0].find("row 2"), std::string::npos) << s.failures[0];
  EXPECT_NE(s.failures[0].find("J_1"), std::string::npos) << s.failures[0];
  // A loose per-column tolerance accepts it.
  EXPECT_TRUE(diff_reports(table(kCsv), table(other), {{"J_1", 1e-6}}).pass);
}

TEST(Diff, NanFails) {
  std::string other = kCsv;
  other.replace(other.find("1.000000000000e+00"), 18, "nan");
  EXPECT_FALSE(diff_reports(table(other), table(other), {}).pass);
}

TEST(Diff, SchemaMismatchThrows) {
  EXPECT_THROW(diff_reports(table(kCsv), table("level,dofs\r\n0,1\r\n"), {}), std::invalid_argument);
  EXPECT_THROW(diff_reports(table(kCsv), table(kCsv), {{"J_9", 1.0}}), std::invalid_argument);
}

TEST(Vtk, LegacyStructure) {
  auto mesh = std::make_shared<const Mesh>(Mesh::square({0, 0}, 0.3, 2).refine(std::vector<int>{0}));
  auto s = Space::build(mesh, kPrimalDegrees, {});
  const DenseVector U = goalfem::testing::random_state(*s, 1);
  std::ostringstream out;
  write_vtk(out, *s, U, "unit");
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\nunit\nASCII\nDATASET UNSTRUCTURED_GRID\n", 0), 0u);
  const std::string points = "POINTS " + std::to_string(mesh->vertices().size()) + " double";
  EXPECT_NE(text.find(points), std::string::npos);
  EXPECT_NE(text.find("CELLS 7 35"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 7"), std::string::npos);
  EXPECT_NE(text.find("VECTORS velocity double"), std::string::npos);
  EXPECT_NE(text.find("SCALARS pressure double 1"), std::string::npos);
  EXPECT_NE(text.find("SCALARS temperature double 1"), std::string::npos);
}

TEST(Report, ConvergenceCsvDeterministicAndFinite) {
  const Problem p = build_problem(tiny_config());
  const RunConfig cfg = tiny_config();
  auto run_csv = [&] {
    const AdaptResult r = adaptive_loop(p, cfg.adapt);
    EXPECT_FALSE(r.diverged) << r.failure;
    std::ostringstream out;
    write_convergence_csv(out, r, p.goals.size());
    return out.str();
  };
  const std::string a = run_csv();
  const std::string b = run_csv();
  EXPECT_EQ(a, b);
  const CsvTable t = table(a);
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty()) continue;
      EXPECT_TRUE(std::isfinite(std::stod(row[c]))) << t.header[c];
    }
  }
}
