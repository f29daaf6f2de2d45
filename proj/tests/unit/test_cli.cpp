#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "asymshap/cli/commands.hpp"
#include "asymshap/csv.hpp"
#include "asymshap/engine.hpp"
#include "oracles.hpp"

using namespace asymshap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("asymshap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kOrder = R"({"features": ["G", "D", "C1", "C2"], "constraints": [["G", "D"]]})";

// Four standard-normal-ish columns plus an outcome.
void write_dataset(const fs::path& path, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::ofstream out(path);
  out.precision(17);
  out << "G,D,C1,C2,y\n";
  for (int i = 0; i < n; ++i) {
    const double g = z(rng), d = 0.6 * g + 0.8 * z(rng), c1 = 0.3 * d + z(rng), c2 = z(rng);
    out << g << ',' << d << ',' << c1 << ',' << c2 << ',' << g + d * d + 0.5 * c2 + z(rng) << '\n';
  }
}

}  // namespace

TEST_CASE("weights command reproduces the four-feature matrices") {
  const fs::path dir = scratch("weights");
  write(dir / "order.json", kOrder);
  const Run r = run({"weights", "--order", (dir / "order.json").string(), "-o", dir.string()});
  REQUIRE(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report["command"] == "weights");
  CHECK(report["coalitions"] == 12);

  const CsvTable minus = read_csv((dir / "weights_minus.csv").string());
  const CsvTable plus = read_csv((dir / "weights_plus.csv").string());
  const std::vector<std::string> patterns{"feature", "0000", "1000", "0010", "0001", "1100", "1010",
                                          "1001",    "0011", "1110", "1101", "1011", "1111"};
  CHECK(minus.header == patterns);
  const std::vector<int> minus_g{6, 0, 2, 2, 0, 0, 0, 2, 0, 0, 0, 0};
  const std::vector<int> plus_d{0, 0, 0, 0, 2, 0, 0, 0, 2, 2, 0, 6};
  for (std::size_t c = 0; c < 12; ++c) {
    CHECK(Rational::parse(minus.rows[0][c + 1]) == Rational(Int128{minus_g[c]}, Int128{12}));
    CHECK(Rational::parse(plus.rows[1][c + 1]) == Rational(Int128{plus_d[c]}, Int128{12}));
  }

  // Round trip: every emitted rational equals the library value exactly.
  const PartialOrder po(FeatureSet::singletons({"G", "D", "C1", "C2"}), std::vector<PartialOrder::Constraint>{{0, 1}});
  const WeightMatrices w = build_weight_matrices(po);
  for (int h = 0; h < 4; ++h)
    for (std::size_t c = 0; c < 12; ++c) {
      CHECK(Rational::parse(plus.rows[static_cast<std::size_t>(h)][c + 1]) == w.plus(h, c));
      CHECK(Rational::parse(minus.rows[static_cast<std::size_t>(h)][c + 1]) == w.minus(h, c));
    }

  REQUIRE(run({"coalitions", "--order", (dir / "order.json").string(), "-o", dir.string()}).code == 0);
  const CsvTable cols = read_csv((dir / "coalitions.csv").string());
  CHECK(cols.rows.size() == 12);
  CHECK(cols.rows[4][1] == "1100");
  CHECK(cols.rows[4][3] == "G;D");
}

TEST_CASE("failures produce machine-readable errors") {
  const fs::path dir = scratch("errors");
  write(dir / "cyclic.json", R"({"features": ["a", "b"], "constraints": [["a", "b"], ["b", "a"]]})");
  const Run cyclic = run({"weights", "--order", (dir / "cyclic.json").string(), "-o", dir.string()});
  CHECK(cyclic.code == 1);
  CHECK(json::parse(cyclic.err)["error"] == "CyclicConstraints");

  const Run missing = run({"weights", "--order", (dir / "nope.json").string(), "-o", dir.string()});
  CHECK(missing.code == 1);
  CHECK(json::parse(missing.err).contains("message"));

  const Run bad = run({"frobnicate"});
  CHECK(bad.code == 2);
  CHECK(json::parse(bad.err)["error"] == "ConfigError");

  const Run bad_metric = run({"sage", "--order", (dir / "cyclic.json").string(), "--metric", "auc"});
  CHECK(bad_metric.code == 1);
  CHECK(json::parse(bad_metric.err)["error"] == "ConfigError");

  CHECK_FALSE(fs::exists(dir / "weights_plus.csv"));
}

TEST_CASE("the installed binary reports failures through its exit code") {
  const std::string cmd = std::string("\"") + ASYMSHAP_BIN + "\" frobnicate > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) != 0);
  const std::string ok = std::string("\"") + ASYMSHAP_BIN + "\" --help > /dev/null 2>&1";
  CHECK(std::system(ok.c_str()) == 0);
}

TEST_CASE("oracle command agrees with the engine") {
  const fs::path dir = scratch("oracle");
  const Run r = run({"oracle", "--gamma", "0.8", "--rho", "0,0.3,0.6", "--points", "50", "-o", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["max_abs_diff"].get<double>() <= 1e-10);
  CHECK(read_csv((dir / "oracle.csv").string()).rows.size() == 50 * 3 * 2 + 50 * 3 * 3 * 3);
}

TEST_CASE("explain without constraints gives classical Shapley values") {
  const fs::path dir = scratch("explain");
  write_dataset(dir / "data.csv", 5, 3);
  write(dir / "run.json", R"({
    "order": {"features": ["G", "D", "C1", "C2"]},
    "data": "data.csv", "outcome": "y",
    "model": {"type": "linear", "intercept": 0.5, "coefficients": {"G": 1.0, "D": [0.3, 1.0], "C1": -0.4, "C2": 0.7}},
    "dependency": {"type": "fitted-gaussian"},
    "output": "out"
  })");
  const Run r = run({"explain", "-c", (dir / "run.json").string()});
  REQUIRE(r.code == 0);
  const CsvTable res = read_csv((dir / "out" / "shapley_local.csv").string());
  REQUIRE(res.rows.size() == 20);

  const Dataset data = read_dataset_csv((dir / "data.csv").string(), "y", std::nullopt);
  const LinearModel lm{0.5, {Eigen::VectorXd::Constant(1, 1.0), Eigen::Vector2d(0.3, 1.0),
                             Eigen::VectorXd::Constant(1, -0.4), Eigen::VectorXd::Constant(1, 0.7)}};
  const ValueFunction vf(FeatureSet::singletons({"G", "D", "C1", "C2"}), lm, GaussianDependency::fit(data.x));
  for (Eigen::Index i = 0; i < 5; ++i) {
    const Eigen::VectorXd x = data.x.row(i).transpose();
    const Eigen::VectorXd expected = testing::classical_shapley(4, [&](Coalition s) { return vf.local(s, x); });
    for (int h = 0; h < 4; ++h) {
      const auto& row = res.rows[static_cast<std::size_t>(i * 4 + h)];
      CHECK(row[res.column("feature")] == std::vector<std::string>{"G", "D", "C1", "C2"}[static_cast<std::size_t>(h)]);
      CHECK(std::abs(parse_double(row[static_cast<std::size_t>(res.column("value"))], "value") - expected(h)) < 1e-10);
      CHECK(row[static_cast<std::size_t>(res.column("mode"))] == "exact");
    }
  }
}

TEST_CASE("sage, simulate and infer commands") {
  const fs::path dir = scratch("pipeline");
  write_dataset(dir / "data.csv", 200, 4);
  write(dir / "order.json", kOrder);
  write(dir / "run.json", R"({"order": "order.json", "data": "data.csv", "outcome": "y",
    "model": {"type": "ols", "degrees": {"D": 2}}, "metric": "r2"})");
  const Run sage = run({"sage", "-c", (dir / "run.json").string(), "-o", (dir / "sage").string()});
  REQUIRE(sage.code == 0);
  const json sj = json::parse(slurp(dir / "sage" / "sage.json"));
  const Dataset data = read_dataset_csv((dir / "data.csv").string(), "y", std::nullopt);
  const LinearModel lm = fit_ols(data.x, *data.y, {1, 2, 1, 1});
  CHECK(sj["total"].get<double>() == doctest::Approx(metric_r_squared(*data.y, lm.predict(data.x))).epsilon(1e-10));
  CHECK(sj["metric"] == "r2");

  const Run sim = run({"simulate", "-o", (dir / "sim").string()});
  REQUIRE(sim.code == 0);
  const CsvTable table = read_csv((dir / "sim" / "sage_table.csv").string());
  CHECK(table.header == std::vector<std::string>{"feature", "marginal", "symmetric", "asymmetric"});
  CHECK(table.rows.size() == 5);
  CHECK(read_csv((dir / "sim" / "local_asymmetric.csv").string()).rows.size() == 800);

  const Run inf = run({"infer", "--table", (dir / "sim" / "local_asymmetric.csv").string(), "--outcomes",
                       (dir / "sim" / "local_asymmetric.csv").string(), "--outcome-column", "x", "--feature", "G",
                       "--permutations", "199", "-o", (dir / "inf").string()});
  // The long table's own x column is not one value per row, so this must fail cleanly.
  CHECK(inf.code != 0);
  CHECK(json::parse(inf.err).contains("error"));

  std::ofstream wide(dir / "wide.csv");
  std::ofstream outcomes(dir / "outcomes.csv");
  wide << "row,G,D,C\n";
  outcomes << "row,y,grp\n";
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  for (int i = 0; i < 120; ++i) {
    const double g = z(rng), d = z(rng), c = z(rng);
    wide << i << ',' << g << ',' << d << ',' << c << '\n';
    outcomes << i << ',' << 2 * g + d + c + 0.1 * z(rng) << ',' << (i % 3 == 0 ? "a" : "b") << '\n';
  }
  wide.close();
  outcomes.close();
  const Run ok = run({"infer", "--table", (dir / "wide.csv").string(), "--outcomes", (dir / "outcomes.csv").string(),
                      "--group", "grp", "--permutations", "199", "-o", (dir / "inf").string()});
  REQUIRE(ok.code == 0);
  const json report = json::parse(slurp(dir / "inf" / "infer.json"));
  REQUIRE(report.size() == 3);
  CHECK(report[0]["feature"] == "G");
  CHECK(report[0]["p_lrt"].get<double>() < 1e-6);
  CHECK(report[0]["p_perm"].get<double>() == doctest::Approx(1.0 / 200));
  CHECK(report[0].contains("p_kw"));
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const fs::path dir = scratch("determinism");
  write_dataset(dir / "data.csv", 12, 5);
  write(dir / "order.json", kOrder);
  write(dir / "run.json", R"({"order": "order.json", "data": "data.csv", "outcome": "y",
    "model": {"type": "ols", "degrees": {"D": 2}}, "dependency": {"type": "empirical-mc", "draws": 50},
    "samples": 500, "seed": 11})");
  const std::string cfg = (dir / "run.json").string();
  REQUIRE(run({"sample", "-c", cfg, "--threads", "1", "-o", (dir / "a").string()}).code == 0);
  REQUIRE(run({"sample", "-c", cfg, "--threads", "8", "-o", (dir / "b").string()}).code == 0);
  REQUIRE(run({"sample", "-c", cfg, "--threads", "1", "-o", (dir / "c").string()}).code == 0);
  const std::string a = slurp(dir / "a" / "shapley_sampled.csv");
  CHECK(a == slurp(dir / "b" / "shapley_sampled.csv"));
  CHECK(a == slurp(dir / "c" / "shapley_sampled.csv"));
  REQUIRE(run({"explain", "-c", cfg, "--threads", "1", "-o", (dir / "d").string()}).code == 0);
  REQUIRE(run({"explain", "-c", cfg, "--threads", "8", "-o", (dir / "e").string()}).code == 0);
  CHECK(slurp(dir / "d" / "shapley_local.csv") == slurp(dir / "e" / "shapley_local.csv"));

  // Sampled output re-parses into the reported values.
  const CsvTable t = read_csv((dir / "a" / "shapley_sampled.csv").string());
  for (const auto& row : t.rows) {
    const double v = parse_double(row[static_cast<std::size_t>(t.column("value"))], "value");
    const double p = parse_double(row[static_cast<std::size_t>(t.column("plus"))], "plus");
    const double m = parse_double(row[static_cast<std::size_t>(t.column("minus"))], "minus");
    CHECK(std::abs(v - (p - m)) <= 1e-12 * (1 + std::abs(p) + std::abs(m)));
  }
}

TEST_CASE("constant contribution through the sample command") {
  const fs::path dir = scratch("constant");
  write(dir / "order.json", kOrder);
  const Run r = run({"sample", "--order", (dir / "order.json").string(), "--constant-nu", "1", "--samples", "10000",
                     "-o", dir.string()});
  REQUIRE(r.code == 0);
  const CsvTable t = read_csv((dir / "shapley_sampled.csv").string());
  REQUIRE(t.rows.size() == 4);
  for (const auto& row : t.rows) {
    CHECK(std::abs(parse_double(row[static_cast<std::size_t>(t.column("plus"))], "plus") - 1.0) <= 0.05);
    CHECK(std::abs(parse_double(row[static_cast<std::size_t>(t.column("minus"))], "minus") - 1.0) <= 0.05);
  }
}
