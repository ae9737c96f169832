#include "mqpt/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mqpt {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, double eig_floor) : mat_(std::move(mat)) {
  require(mat_.square(), "DensityMatrix: matrix not square");
  require(mat_.all_finite(), "DensityMatrix: non-finite entries");
  require(mat_.is_hermitian(tol::kStructure), "DensityMatrix: not Hermitian");
  require(std::abs(mat_.trace() - cplx(1.0, 0.0)) <= tol::kStructure,
          "DensityMatrix: trace differs from one");
  const double lo = min_eigenvalue(mat_.hermitized());
  require(lo >= -eig_floor, "DensityMatrix: negative eigenvalue " + std::to_string(lo));
}

BipartiteState::BipartiteState(std::size_t dS, std::size_t dE, ComplexMatrix joint,
                               double eig_floor)
    : dS_(dS), dE_(dE), joint_(std::move(joint)) {
  require(dS_ >= 1 && dE_ >= 1, "BipartiteState: dimensions must be positive");
  require(joint_.square() && joint_.rows() == dS_ * dE_,
          "BipartiteState: joint matrix is not (dS*dE)-square");
  // DensityMatrix invariants on the joint; marginal validity follows because
  // partial traces of a PSD unit-trace matrix are PSD unit-trace.
  (void)DensityMatrix(joint_, eig_floor);
}

CorrelationMatrix::CorrelationMatrix(std::size_t dS, std::size_t dE, ComplexMatrix chi)
    : dS_(dS), dE_(dE), chi_(std::move(chi)) {
  require(chi_.square() && chi_.rows() == dS_ * dE_,
          "CorrelationMatrix: chi is not (dS*dE)-square");
  require(chi_.is_hermitian(tol::kStructure), "CorrelationMatrix: not Hermitian");
  const double trS = partial_trace(chi_, dS_, dE_, Subsystem::second).max_abs();
  const double trE = partial_trace(chi_, dS_, dE_, Subsystem::first).max_abs();
  require(trS <= tol::kStructure, "CorrelationMatrix: partial trace over S not zero");
  require(trE <= tol::kStructure, "CorrelationMatrix: partial trace over E not zero");
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  require(mat_.square(), "UnitaryMatrix: matrix not square");
  const ComplexMatrix gram = mat_.adjoint() * mat_;
  require((gram - ComplexMatrix::identity(mat_.rows())).max_abs() <= tol::kStructure,
          "UnitaryMatrix: U^dagger U differs from identity");
}

PreparationMap PreparationMap::from_kraus(std::vector<ComplexMatrix> ops) {
  require(!ops.empty(), "PreparationMap: empty operator list");
  const std::size_t d = ops.front().rows();
  for (const auto& op : ops)
    require(op.square() && op.rows() == d, "PreparationMap: operators must share one dimension");

  // trace-non-increasing: sum A^dagger A <= I
  ComplexMatrix sum(d, d);
  for (const auto& op : ops) sum += op.adjoint() * op;
  const double top = hermitian_eig(sum.hermitized()).eigenvalues.back();
  require(top <= 1.0 + tol::kEigClamp,
          "PreparationMap: operator list increases trace (max eig " + std::to_string(top) + ")");

  const std::size_t d2 = d * d;
  ComplexMatrix aform(d2, d2);
  for (const auto& op : ops) {
    const cplx* v = op.data();  // row-major vec matches the k(r',r'') grouping
    for (std::size_t i = 0; i < d2; ++i)
      for (std::size_t j = 0; j < d2; ++j) aform(i, j) += v[i] * std::conj(v[j]);
  }
  return PreparationMap(d, std::move(ops), std::move(aform));
}

PreparationMap PreparationMap::identity(std::size_t dS) {
  return from_kraus({ComplexMatrix::identity(dS)});
}

PreparationMap PreparationMap::transition(const std::vector<cplx>& ket,
                                          const std::vector<cplx>& bra) {
  require(ket.size() == bra.size() && !ket.empty(), "transition: ket/bra size mismatch");
  const std::size_t d = ket.size();
  ComplexMatrix op(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) op(r, c) = ket[r] * std::conj(bra[c]);
  return from_kraus({std::move(op)});
}

PreparationMap PreparationMap::reset_to(const std::vector<cplx>& ket) {
  const std::size_t d = ket.size();
  require(d >= 1, "reset_to: empty ket");
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    ComplexMatrix op(d, d);
    for (std::size_t r = 0; r < d; ++r) op(r, j) = ket[r];
    ops.push_back(std::move(op));
  }
  return from_kraus(std::move(ops));
}

bool PreparationMap::trace_preserving(double tolerance) const {
  ComplexMatrix sum(dS_, dS_);
  for (const auto& op : ops_) sum += op.adjoint() * op;
  return (sum - ComplexMatrix::identity(dS_)).max_abs() <= tolerance;
}

BipartiteState compose_bipartite(const DensityMatrix& rhoS, const DensityMatrix& rhoE,
                                 const std::optional<CorrelationMatrix>& chi) {
  ComplexMatrix joint = kron(rhoS.mat(), rhoE.mat());
  if (chi) {
    if (chi->system_dim() != rhoS.dim() || chi->env_dim() != rhoE.dim())
      throw std::invalid_argument("compose_bipartite: chi dimensions disagree with factors");
    joint += chi->chi();
  }
  const double lo = min_eigenvalue(joint.hermitized());
  if (lo < -tol::kEigClamp)
    throw std::invalid_argument(
        "compose_bipartite: correlations make the joint state non-positive (min eigenvalue " +
        std::to_string(lo) + ")");
  return BipartiteState(rhoS.dim(), rhoE.dim(), std::move(joint));
}

StateSplit split_correlations(const BipartiteState& state) {
  const std::size_t dS = state.system_dim();
  const std::size_t dE = state.env_dim();
  ComplexMatrix rhoS = partial_trace(state.joint(), dS, dE, Subsystem::first);
  ComplexMatrix rhoE = partial_trace(state.joint(), dS, dE, Subsystem::second);
  ComplexMatrix chi = state.joint() - kron(rhoS, rhoE);
  return StateSplit{DensityMatrix(rhoS.hermitized()), DensityMatrix(rhoE.hermitized()),
                    CorrelationMatrix(dS, dE, chi.hermitized())};
}

ComplexMatrix apply_prep_unnormalized(const PreparationMap& prep, const ComplexMatrix& joint,
                                      std::size_t dS, std::size_t dE) {
  if (prep.dim() != dS)
    throw std::invalid_argument("apply_prep: preparation dimension differs from system");
  const ComplexMatrix eye = ComplexMatrix::identity(dE);
  ComplexMatrix sigma(dS * dE, dS * dE);
  for (const auto& op : prep.ops()) {
    const ComplexMatrix lifted = kron(op, eye);
    sigma += lifted * joint * lifted.adjoint();
  }
  return sigma;
}

PreparedState apply_prep(const PreparationMap& prep, const BipartiteState& state) {
  ComplexMatrix sigma =
      apply_prep_unnormalized(prep, state.joint(), state.system_dim(), state.env_dim());
  const double p = sigma.trace().real();
  if (p < tol::kProbabilityFloor)
    throw std::runtime_error("apply_prep: preparation incompatible with state (probability " +
                             std::to_string(p) + ")");
  sigma *= cplx(1.0 / p, 0.0);
  return PreparedState{p,
                       BipartiteState(state.system_dim(), state.env_dim(), sigma.hermitized())};
}

DensityMatrix evolve_reduce(const UnitaryMatrix& u, const BipartiteState& state) {
  if (u.dim() != state.system_dim() * state.env_dim())
    throw std::invalid_argument("evolve_reduce: unitary dimension differs from joint space");
  const ComplexMatrix evolved = u.mat() * state.joint() * u.mat().adjoint();
  ComplexMatrix reduced =
      partial_trace(evolved, state.system_dim(), state.env_dim(), Subsystem::first);
  return DensityMatrix(reduced.hermitized());
}

}  // namespace mqpt
