#ifndef MQPT_EXPERIMENT_HPP
#define MQPT_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace mqpt {

inline constexpr const char* kToolVersion = "mqpt 0.1.0";

// Batch-run description, normally loaded from a JSON config file. Exactly
// one of scenario / (unitary_path, state_path) selects the instance.
struct ExperimentConfig {
  std::string mode;  // analytic | tomography | scan
  std::size_t dS = 2;
  std::size_t dE = 2;
  std::string scenario;  // canonical_cnot_bell | vanishing_memory | product | random_correlated
  std::string unitary_path;
  std::string state_path;
  double w = 0.5;  // correlation weight for random_correlated
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::size_t scan_instances = 100;
  std::string output_path;
  bool verbose = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;  // mode-specific required fields, dims >= 2
};

// Structured result document. `doc` carries the full report (config echo,
// metrics, optional per-preparation diagnostics, error entries, tool version
// and wall time); two runs of the same config+seed differ only in
// "wall_time_ms".
struct Report {
  nlohmann::json doc;

  bool ok() const;  // no error entries
};

Report run_experiment(const ExperimentConfig& config);

void write_report(const Report& report, const std::string& path);
Report load_report(const std::string& path);  // validates the schema, names missing fields

// Relative paths land in $MQPT_OUTPUT_DIR when that is set.
std::string resolve_output_path(const std::string& path);

}  // namespace mqpt

#endif
