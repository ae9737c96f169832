#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "mqpt/experiment.hpp"
#include "mqpt/io.hpp"
#include "mqpt/scenarios.hpp"

using namespace mqpt;
using nlohmann::json;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ExperimentConfig base_config(const std::string& mode, const std::string& scenario) {
  ExperimentConfig c;
  c.mode = mode;
  c.scenario = scenario;
  c.seed = 7;
  return c;
}

json scrubbed(const Report& r) {
  json j = r.doc;
  j.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST_CASE("config validation names the problem") {
  json j;
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j), doctest::Contains("mode"),
                       std::runtime_error);

  j["mode"] = "interpolate";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::runtime_error);

  j["mode"] = "analytic";
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j), doctest::Contains("scenario"),
                       std::runtime_error);

  j["scenario"] = "product";
  j["dS"] = 1;
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(j), doctest::Contains("dimensions"),
                       std::runtime_error);

  j["dS"] = 2;
  CHECK_NOTHROW(ExperimentConfig::from_json(j));
}

TEST_CASE("analytic mode on the canonical instance reports the NCP structure") {
  const Report r = run_experiment(base_config("analytic", "canonical_cnot_bell"));
  REQUIRE(r.ok());
  const auto& m = r.doc.at("metrics");
  CHECK(m.at("norm_K").get<double>() > 0.1);
  CHECK(m.at("min_eig_B").get<double>() < -1e-3);
  CHECK(m.at("min_eig_M").get<double>() >= -1e-10);
  CHECK(m.at("trace_checks").at("trace_error").get<double>() <= 1e-10);
}

TEST_CASE("analytic mode on a product scenario sees no memory") {
  const Report r = run_experiment(base_config("analytic", "product"));
  REQUIRE(r.ok());
  const auto& m = r.doc.at("metrics");
  CHECK(m.at("norm_K").get<double>() <= 1e-10);
  CHECK(m.at("min_eig_B").get<double>() >= -1e-10);
}

TEST_CASE("tomography mode reconstructs noiselessly") {
  ExperimentConfig c = base_config("tomography", "random_correlated");
  c.w = 0.5;
  const Report r = run_experiment(c);
  REQUIRE(r.ok());
  const auto& m = r.doc.at("metrics");
  CHECK(m.at("reconstruction_error").get<double>() <= 1e-9);
  CHECK(m.at("preparations_used").get<std::size_t>() == 16);
  CHECK(m.at("p_list").size() == 4);
}

TEST_CASE("scan mode embeds the table") {
  ExperimentConfig c = base_config("scan", "");
  c.scan_instances = 8;
  const Report r = run_experiment(c);
  REQUIRE(r.ok());
  CHECK(r.doc.at("metrics").at("instances").get<std::size_t>() == 8);
  CHECK(r.doc.at("scan_table").get<std::string>().find("norm_K") != std::string::npos);
}

TEST_CASE("pipeline failures become structured error entries") {
  ExperimentConfig c = base_config("analytic", "");
  c.unitary_path = "/nonexistent/u.txt";
  c.state_path = "/nonexistent/rho.txt";
  const Report r = run_experiment(c);
  CHECK_FALSE(r.ok());
  REQUIRE(r.doc.at("errors").size() == 1);
  CHECK(r.doc.at("errors")[0].contains("stage"));
  CHECK(r.doc.at("errors")[0].contains("message"));
}

TEST_CASE("file-based instances run through the pipeline") {
  const std::string upath = temp_path("mqpt_exp_u.txt");
  const std::string spath = temp_path("mqpt_exp_rho.txt");
  const BipartiteState state = random_correlated_state(2, 2, 0.5, 77);
  const UnitaryMatrix u = haar_unitary(4, 78);
  io::save_state(spath, state);
  io::save_unitary(upath, u, 2, 2);

  ExperimentConfig c = base_config("analytic", "");
  c.unitary_path = upath;
  c.state_path = spath;
  const Report r = run_experiment(c);
  REQUIRE(r.ok());
  CHECK(r.doc.at("instance").get<std::string>() == "files");

  std::remove(upath.c_str());
  std::remove(spath.c_str());
}

TEST_CASE("reports round-trip and validate their schema") {
  const Report r = run_experiment(base_config("analytic", "canonical_cnot_bell"));
  const std::string path = temp_path("mqpt_report.json");
  write_report(r, path);
  const Report back = load_report(path);
  CHECK(back.doc == r.doc);

  // strip a required field: the loader names it
  json broken = r.doc;
  broken.erase("tool_version");
  {
    std::ofstream os(path);
    os << broken.dump(2) << '\n';
  }
  CHECK_THROWS_WITH_AS(load_report(path), doctest::Contains("tool_version"),
                       std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("identical configs produce identical reports modulo wall time") {
  ExperimentConfig c = base_config("tomography", "random_correlated");
  c.noise_sigma = 1e-7;
  const Report a = run_experiment(c);
  const Report b = run_experiment(c);
  CHECK(scrubbed(a) == scrubbed(b));
  CHECK(scrubbed(a).dump() == scrubbed(b).dump());
}

TEST_CASE("relative output paths honor MQPT_OUTPUT_DIR") {
  const std::string dir = std::filesystem::temp_directory_path().string();
  setenv("MQPT_OUTPUT_DIR", dir.c_str(), 1);
  CHECK(resolve_output_path("r.json") == dir + "/r.json");
  CHECK(resolve_output_path("/abs/r.json") == "/abs/r.json");
  unsetenv("MQPT_OUTPUT_DIR");
  CHECK(resolve_output_path("r.json") == "r.json");
}
