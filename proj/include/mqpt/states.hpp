#ifndef MQPT_STATES_HPP
#define MQPT_STATES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "mqpt/constants.hpp"
#include "mqpt/linalg.hpp"
#include "mqpt/matrix.hpp"

namespace mqpt {

// Physical value types. Constructors validate their invariants and throw
// std::invalid_argument with a diagnostic on violation; all types are
// immutable after construction and safe to share across threads.

class DensityMatrix {
 public:
  // eig_floor widens the negativity tolerance; tomography with additive noise
  // needs a floor proportional to the noise scale, everything else uses the
  // default clamp.
  explicit DensityMatrix(ComplexMatrix mat, double eig_floor = tol::kEigClamp);

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  ComplexMatrix mat_;
};

class BipartiteState {
 public:
  // joint lives on system (x) environment, system factor first:
  // joint index = r * dE + alpha.
  BipartiteState(std::size_t dS, std::size_t dE, ComplexMatrix joint,
                 double eig_floor = tol::kEigClamp);

  std::size_t system_dim() const { return dS_; }
  std::size_t env_dim() const { return dE_; }
  const ComplexMatrix& joint() const { return joint_; }

 private:
  std::size_t dS_, dE_;
  ComplexMatrix joint_;
};

// chi = rho_SE - rho_S (x) rho_E; Hermitian with both partial traces zero.
class CorrelationMatrix {
 public:
  CorrelationMatrix(std::size_t dS, std::size_t dE, ComplexMatrix chi);

  std::size_t system_dim() const { return dS_; }
  std::size_t env_dim() const { return dE_; }
  const ComplexMatrix& chi() const { return chi_; }

 private:
  std::size_t dS_, dE_;
  ComplexMatrix chi_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix mat);

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  ComplexMatrix mat_;
};

// A completely positive, trace-non-increasing operation on the system,
// stored both as its operator list {A^k} and as the d^2 x d^2 matrix form
//   aform[k(r',r''), k(s',s'')] = sum_k A^k(r',r'') * conj(A^k(s',s''))
// which is the representation the super-superoperator contracts against.
class PreparationMap {
 public:
  static PreparationMap from_kraus(std::vector<ComplexMatrix> ops);
  static PreparationMap identity(std::size_t dS);
  // projection-plus-rotation with the single operator |ket><bra|
  static PreparationMap transition(const std::vector<cplx>& ket, const std::vector<cplx>& bra);
  // deterministic reset of the system into the pure state |ket>: operator
  // list {|ket><j|}_j. Trace preserving, output is always rank one, and the
  // post-preparation environment is the unconditioned marginal.
  static PreparationMap reset_to(const std::vector<cplx>& ket);

  std::size_t dim() const { return dS_; }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }
  const ComplexMatrix& aform() const { return aform_; }
  bool trace_preserving(double tolerance = tol::kStructure) const;

 private:
  PreparationMap(std::size_t dS, std::vector<ComplexMatrix> ops, ComplexMatrix aform)
      : dS_(dS), ops_(std::move(ops)), aform_(std::move(aform)) {}

  std::size_t dS_;
  std::vector<ComplexMatrix> ops_;
  ComplexMatrix aform_;
};

// joint = rho_S (x) rho_E + chi. Rejects joints that fail positivity (chi
// too large), reporting the offending minimum eigenvalue.
BipartiteState compose_bipartite(const DensityMatrix& rhoS, const DensityMatrix& rhoE,
                                 const std::optional<CorrelationMatrix>& chi);

struct StateSplit {
  DensityMatrix system;
  DensityMatrix environment;
  CorrelationMatrix correlations;
};

// marginals plus chi; compose_bipartite(split) reproduces the input.
StateSplit split_correlations(const BipartiteState& state);

struct PreparedState {
  double probability;
  BipartiteState state;  // normalized
};

// sigma = sum_k (A^k (x) I) rho (A^k (x) I)^dagger; probability = tr sigma.
// Throws when the probability falls below tol::kProbabilityFloor.
PreparedState apply_prep(const PreparationMap& prep, const BipartiteState& state);

// unnormalized variant: just sigma, no trace division (linearity checks and
// tomography consume this form)
ComplexMatrix apply_prep_unnormalized(const PreparationMap& prep, const ComplexMatrix& joint,
                                      std::size_t dS, std::size_t dE);

// tr_E[U rho U^dagger]
DensityMatrix evolve_reduce(const UnitaryMatrix& u, const BipartiteState& state);

}  // namespace mqpt

#endif
