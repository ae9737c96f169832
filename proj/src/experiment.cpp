#include "mqpt/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "mqpt/io.hpp"
#include "mqpt/rng.hpp"
#include "mqpt/scenarios.hpp"
#include "mqpt/tomography.hpp"

namespace mqpt {

using nlohmann::json;

namespace {

const char* kModes[] = {"analytic", "tomography", "scan"};

bool known_mode(const std::string& m) {
  for (const char* k : kModes)
    if (m == k) return true;
  return false;
}

struct Instance {
  UnitaryMatrix u;
  BipartiteState state;
  std::string label;
};

Instance resolve_instance(const ExperimentConfig& c) {
  if (!c.unitary_path.empty() || !c.state_path.empty()) {
    io::LoadedUnitary lu = io::load_unitary(c.unitary_path);
    BipartiteState state = io::load_state(c.state_path);
    if (lu.dS != state.system_dim() || lu.dE != state.env_dim())
      throw std::runtime_error("config: unitary and state files disagree on dimensions");
    return Instance{std::move(lu.u), std::move(state), "files"};
  }
  if (c.scenario == "canonical_cnot_bell") {
    ScenarioInstance inst = canonical_cnot_bell();
    return Instance{std::move(inst.u), std::move(inst.state), inst.label};
  }
  if (c.scenario == "vanishing_memory") {
    ScenarioInstance inst = vanishing_memory_instance(c.seed);
    return Instance{std::move(inst.u), std::move(inst.state), inst.label};
  }
  if (c.scenario == "product")
    return Instance{haar_unitary(c.dS * c.dE, mix_seed(c.seed, 1)),
                    random_correlated_state(c.dS, c.dE, 0.0, c.seed), "product"};
  if (c.scenario == "random_correlated")
    return Instance{haar_unitary(c.dS * c.dE, mix_seed(c.seed, 1)),
                    random_correlated_state(c.dS, c.dE, c.w, c.seed), "random_correlated"};
  throw std::runtime_error("config: unknown scenario '" + c.scenario + "'");
}

json decomposition_metrics(const MMap& m) {
  const MMapAudit audit = audit_mmap(m);
  const MemorySplit split = memory_of(m);
  const DynamicalMap b = assemble_b(m);
  json metrics;
  metrics["norm_K"] = split.k.tensor.frobenius_norm();
  metrics["norm_Baff"] = b.affine.frobenius_norm();
  metrics["min_eig_M"] = audit.min_eigenvalue;
  metrics["min_eig_B"] = min_eigenvalue(b.combined_matrix().hermitized());
  metrics["trace_checks"] = {{"hermiticity", audit.hermiticity},
                             {"trace_error", audit.trace_error},
                             {"output_contraction_error", audit.contraction_error}};
  return metrics;
}

json p_list_of(const DensityMatrix& rhoS) {
  const PreparationBasis basis = pure_state_basis(rhoS.dim());
  json p = json::array();
  for (const auto& proj : basis.projectors) p.push_back(hs_inner(proj, rhoS.mat()).real());
  return p;
}

void run_analytic(const ExperimentConfig& c, json& doc) {
  const Instance inst = resolve_instance(c);
  const MMap m = build_mmap(inst.u, inst.state);
  doc["metrics"] = decomposition_metrics(m);
  doc["metrics"]["p_list"] = p_list_of(initial_state_of(m));
  doc["instance"] = inst.label;
}

void run_tomography(const ExperimentConfig& c, json& doc) {
  const Instance inst = resolve_instance(c);
  const std::size_t dS = inst.state.system_dim();
  const PreparationBasis basis = preparation_basis(dS);
  const TomographyRecord record =
      simulate_tomography(inst.u, inst.state, basis, c.noise_sigma, c.seed);
  const MMap rec = reconstruct_mmap(record, basis);
  const MMap ana = build_mmap(inst.u, inst.state);

  doc["metrics"] = decomposition_metrics(rec);
  doc["metrics"]["reconstruction_error"] = (rec.tensor - ana.tensor).frobenius_norm();
  doc["metrics"]["preparations_used"] = record.entries.size();
  doc["metrics"]["gram_condition"] = basis.gram_condition;
  json p = json::array();
  for (std::size_t m = 0; m < dS * dS; ++m) p.push_back(record.entries[basis.index(m, 0)].p);
  doc["metrics"]["p_list"] = p;
  doc["instance"] = inst.label;

  if (c.verbose) {
    json per = json::array();
    for (const auto& e : record.entries)
      per.push_back({{"m", e.m},
                     {"n", e.n},
                     {"p", e.p},
                     {"unnormalized_norm", e.unnormalized.frobenius_norm()},
                     {"degenerate", e.degenerate}});
    doc["per_mn"] = std::move(per);
  }
}

void run_scan(const ExperimentConfig& c, json& doc) {
  const std::vector<ScanRow> rows = ncp_scan(c.scan_instances, c.dS, c.dE, c.seed);
  std::size_t ncp_count = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.flags.ncp_expected) ++ncp_count;
    worst = std::min(worst, r.min_eig_b);
  }
  doc["metrics"] = {{"instances", rows.size()},
                    {"ncp_count", ncp_count},
                    {"most_negative_eigenvalue", worst}};
  doc["scan_table"] = format_scan_table(rows);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  if (!j.contains("mode")) throw std::runtime_error("config: missing field 'mode'");
  c.mode = j.at("mode").get<std::string>();
  c.dS = j.value("dS", std::size_t{2});
  c.dE = j.value("dE", std::size_t{2});
  c.scenario = j.value("scenario", std::string{});
  c.unitary_path = j.value("unitary_path", std::string{});
  c.state_path = j.value("state_path", std::string{});
  c.w = j.value("w", 0.5);
  c.seed = j.value("seed", std::uint64_t{0});
  c.noise_sigma = j.value("noise_sigma", 0.0);
  c.scan_instances = j.value("scan_instances", std::size_t{100});
  c.output_path = j.value("output_path", std::string{});
  c.verbose = j.value("verbose", false);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  return json{{"mode", mode},
              {"dS", dS},
              {"dE", dE},
              {"scenario", scenario},
              {"unitary_path", unitary_path},
              {"state_path", state_path},
              {"w", w},
              {"seed", seed},
              {"noise_sigma", noise_sigma},
              {"scan_instances", scan_instances},
              {"output_path", output_path},
              {"verbose", verbose}};
}

void ExperimentConfig::validate() const {
  if (!known_mode(mode))
    throw std::runtime_error("config: mode must be analytic, tomography, or scan");
  if (dS < 2 || dE < 2) throw std::runtime_error("config: dimensions must be >= 2");
  if (noise_sigma < 0.0) throw std::runtime_error("config: noise_sigma must be >= 0");
  const bool has_files = !unitary_path.empty() || !state_path.empty();
  if (has_files && (unitary_path.empty() || state_path.empty()))
    throw std::runtime_error("config: unitary_path and state_path must come together");
  if (mode != "scan" && !has_files && scenario.empty())
    throw std::runtime_error("config: missing field 'scenario' (or unitary_path/state_path)");
  if (mode == "scan" && scan_instances < 1)
    throw std::runtime_error("config: scan_instances must be >= 1");
}

bool Report::ok() const {
  return doc.contains("errors") && doc.at("errors").empty();
}

Report run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.doc["config"] = config.to_json();
  report.doc["tool_version"] = kToolVersion;
  report.doc["errors"] = json::array();

  try {
    config.validate();
    if (config.mode == "analytic")
      run_analytic(config, report.doc);
    else if (config.mode == "tomography")
      run_tomography(config, report.doc);
    else
      run_scan(config, report.doc);
  } catch (const std::exception& e) {
    report.doc["errors"].push_back({{"stage", config.mode}, {"message", e.what()}});
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.doc["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
  return report;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("MQPT_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  std::string out(dir);
  if (out.back() != '/') out += '/';
  return out + path;
}

void write_report(const Report& report, const std::string& path) {
  std::ofstream os(resolve_output_path(path));
  if (!os) throw std::runtime_error("cannot open report for writing: " + path);
  os << report.doc.dump(2) << '\n';
}

Report load_report(const std::string& path) {
  std::ifstream is(resolve_output_path(path));
  if (!is) throw std::runtime_error("cannot open report: " + path);
  Report report;
  try {
    is >> report.doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("report parse error in " + path + ": " + e.what());
  }
  for (const char* field : {"config", "tool_version", "errors", "wall_time_ms"})
    if (!report.doc.contains(field))
      throw std::runtime_error(std::string("report: missing field '") + field + "'");
  if (report.doc.at("errors").empty() && !report.doc.contains("metrics"))
    throw std::runtime_error("report: missing field 'metrics'");
  return report;
}

}  // namespace mqpt
