#ifndef MQPT_SCENARIOS_HPP
#define MQPT_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqpt/mmap.hpp"
#include "mqpt/states.hpp"

namespace mqpt {

// Deterministic, seeded problem-instance generators. Every generator is a
// pure function of (parameters, seed): repeated calls are bit-identical.

struct ScenarioFlags {
  bool product = false;
  bool correlated = false;
  bool vanishing_memory = false;
  bool ncp_expected = false;

  std::string to_string() const;
};

struct ScenarioInstance {
  std::string label;
  UnitaryMatrix u;
  BipartiteState state;
  std::uint64_t seed = 0;
  ScenarioFlags flags;  // verified at construction from the decomposition
};

// Haar-distributed unitary: complex Ginibre matrix, Gram-Schmidt QR with the
// positive-diagonal convention (which is exactly the Haar-correct phase fix).
UnitaryMatrix haar_unitary(std::size_t d, std::uint64_t seed);

// (1-w) * rhoS (x) rhoE + w * |psi><psi| with random full-rank marginals and
// a random pure bipartite projector. w=0 is an exact product state, w=1 a
// pure correlated state.
BipartiteState random_correlated_state(std::size_t dS, std::size_t dE, double w,
                                       std::uint64_t seed);

// Instance with flags read off the actual decomposition (norm of chi, norm
// of the memory matrix, minimum eigenvalue of the combined dynamical map).
ScenarioInstance make_instance(std::string label, UnitaryMatrix u, BipartiteState state,
                               std::uint64_t seed);

// Fixed constants of the canonical NCP demonstration: a Bell-diagonal
// two-qubit state with unequal weights evolved by CNOT.
inline constexpr double kCanonicalBellWeights[4] = {0.5, 0.3, 0.15, 0.05};

// Minimum eigenvalue of the combined dynamical map of that instance, as
// produced by the construction-time check (golden value, regenerated by
// canonical_cnot_bell() itself on every call).
inline constexpr double kCanonicalNcpWitness = -0.022015325445527392;

// The canonical instance. Construction verifies that the NCP witness is
// strictly below -1e-3 and matches kCanonicalNcpWitness; throws otherwise.
ScenarioInstance canonical_cnot_bell();

// An instance with nonzero correlations whose affine term vanishes:
// ||chi||_F > 1e-2 yet tr_E[U chi U^dagger] = 0 within 1e-10, with the
// memory matrix still nonzero. Built by solving the linear constraint on a
// traceless zero-partial-trace basis (null space), then scaling into the
// PSD region by bisection. dS = dE = 2, U = CNOT.
ScenarioInstance vanishing_memory_instance(std::uint64_t seed);

struct ScanRow {
  std::string label;
  std::uint64_t seed = 0;
  double norm_chi = 0.0;
  double norm_k = 0.0;
  double min_eig_b = 0.0;
  ScenarioFlags flags;
};

// Random-instance survey of the correlation/positivity relationship: for
// each instance the chi norm, memory-matrix norm, and the minimum eigenvalue
// of the combined dynamical map. fixed_w pins the correlation weight
// (0 yields all-product rows); otherwise w is drawn per instance.
std::vector<ScanRow> ncp_scan(std::size_t n_instances, std::size_t dS, std::size_t dE,
                              std::uint64_t seed, std::optional<double> fixed_w = std::nullopt);

// Tab-delimited table with a header row: label, seed, norm_chi, norm_K,
// min_eig_B, flags.
std::string format_scan_table(const std::vector<ScanRow>& rows);

}  // namespace mqpt

#endif
