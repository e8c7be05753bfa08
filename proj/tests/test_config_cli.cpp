#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "icb/cli.hpp"
#include "icb/config.hpp"
#include "icb/report.hpp"
#include "json.hpp"

using namespace icb;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "icb");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "icb_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.model.mass = 2.5;
  c.model.theta = 0.1 + 0.2;
  c.domain.b_lambda = 123.456;
  c.domain.lambda_max = 15.05;
  c.epsilon = 1.0 / 3.0;
  c.trainer.init = -0.7;
  c.trainer.losses = {"violation_implicit"};
  c.sweeps.n_values = {1, 2, 3.5};
  c.output_dir = "somewhere";
  c.seed = 18446744073709551615ull;
  const ExperimentConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(config_hash(back) == config_hash(c));

  const ExperimentConfig d;
  CHECK(parse_config(serialize_config(d)) == d);
  CHECK(parse_config("{}") == d);
  CHECK(config_hash(c) != config_hash(d));
  CHECK(config_hash(d).size() == 16);
}

TEST_CASE("config epsilon") {
  CHECK(parse_config(R"({"epsilon": "auto"})").resolved_epsilon().value() == 0.25);
  CHECK(parse_config(R"({"epsilon": "auto", "model": {"mass": 0.5}})").resolved_epsilon().value() == 0.125);
  CHECK(parse_config(R"({"epsilon": 0.75})").resolved_epsilon().value() == 0.75);
  CHECK_THROWS_AS(parse_config(R"({"epsilon": "big"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"epsilon": -1})"), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"modle": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"mas": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"mass": "heavy"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"mass": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dataset": {"contact_bias": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trainer": {"losses": ["l1"]}})"), ConfigError);
  try {
    load_config("/nonexistent/cfg.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/cfg.json") != std::string::npos);
  }
}

TEST_CASE("csv formatting") {
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(csv_number(1.0 / 3.0)) == 1.0 / 3.0);
  CsvTable t{"x", {"a", "b"}, {}};
  t.add_row({"1", "2"});
  CHECK_THROWS_AS(t.add_row({"1"}), std::logic_error);
  std::ostringstream os;
  write_csv(os, t, "abc", 7);
  CHECK(os.str() == "# config_hash=abc seed=7\na,b\n1,2\n");
}

TEST_CASE("every emitted CSV column is documented in the schema") {
  std::ifstream in(ICB_SCHEMA_PATH);
  REQUIRE(in.good());
  const nlohmann::json schema = nlohmann::json::parse(in);
  const auto& tables = schema.at("tables");

  const std::vector<CsvTable> emitted{
      lipschitz_constants_table({}),
      loss_bounds_table({}, {}),
      loss_lipschitz_table({}),
      landscape_table({}),
      bound_curves_table({}, {}),
      sample_complexity_table(1, 1, {}),
      qg_certificate_table({}),
      qg_violations_table({}),
      training_table({}),
      lipschitz_validation_table({}),
      graph_distance_table({}),
      report_errors_table({}),
  };
  std::set<std::string> names;
  for (const CsvTable& t : emitted) {
    names.insert(t.name);
    INFO("table " << t.name);
    REQUIRE(tables.contains(t.name));
    const auto& cols = tables.at(t.name).at("columns");
    CHECK(cols.size() == t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      CHECK(cols.at(i).at("name").get<std::string>() == t.columns[i]);
      CHECK(!cols.at(i).at("description").get<std::string>().empty());
    }
  }
  for (auto it = tables.begin(); it != tables.end(); ++it) CHECK(names.count(it.key()) == 1);
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  CHECK(run({"lipschitz", "--eps", "0.5"}) == 0);
  CHECK(run({"nonsense"}) == kExitConfig);
  CHECK(run({"report", "--config", (dir / "missing.file").string()}) == kExitConfig);
  CHECK(run({"lipschitz", "--eps", "zero"}) == kExitConfig);
  CHECK(run({"graph-distance", "--z", "1", "--v", "0"}) == kExitConfig);
  CHECK(run({"graph-distance", "--z", "1", "--v", "0", "--y", "0.05"}) == 0);
  CHECK(run({"qg-verify", "--eps", "0.25", "--samples", "300", "--seed", "7", "--output-dir", dir.string()}) == 0);
  const std::string cert = slurp(dir / "qg_certificate.csv");
  CHECK(cert.rfind("# config_hash=", 0) == 0);
  CHECK(cert.find("\n1,0.25,300,") != std::string::npos);
}

TEST_CASE("report sections and determinism") {
  const auto dir_a = scratch("report_a");
  const auto dir_b = scratch("report_b");
  ExperimentConfig c;
  c.dataset.n = 40;
  c.sweeps.theta_points = 21;
  c.qg.samples = 200;
  c.trainer.iterations = 300;
  c.output_dir = dir_a.string();
  const ReportBundle a = run_report(c);
  CHECK(a.ok());
  c.output_dir = dir_b.string();
  const ReportBundle b = run_report(c);
  REQUIRE(a.files.size() == b.files.size());
  for (const char* name : {"lipschitz_constants", "loss_bounds", "loss_lipschitz", "landscape", "bound_curves",
                           "sample_complexity", "qg_certificate", "qg_violations", "training", "report_errors"}) {
    const auto fa = dir_a / (std::string(name) + ".csv");
    const auto fb = dir_b / (std::string(name) + ".csv");
    REQUIRE(std::filesystem::exists(fa));
    CHECK(slurp(fa) == slurp(fb));
  }

  c.epsilon = 0.5;
  c.domain.lambda_max = 15.05;
  c.output_dir = scratch("report_c").string();
  run_report(c);
  const std::string t1 = slurp(std::filesystem::path(c.output_dir) / "lipschitz_constants.csv");
  CHECK(t1.find("L_lambda_theta_vimp,m^2/(2*eps),1\n") != std::string::npos);
  CHECK(t1.find("L_h_lambda,max(phi_max; lambda_max),15.050000000000001\n") != std::string::npos);
}
