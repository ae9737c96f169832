#include "mqpt/tomography.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "mqpt/constants.hpp"
#include "mqpt/kernels.hpp"
#include "mqpt/rng.hpp"

namespace mqpt {

namespace {

std::vector<cplx> normalized(std::vector<cplx> v) {
  double n = 0.0;
  for (const auto& c : v) n += std::norm(c);
  n = std::sqrt(n);
  for (auto& c : v) c /= n;
  return v;
}

ComplexMatrix projector_of(const std::vector<cplx>& ket) {
  const std::size_t d = ket.size();
  ComplexMatrix p(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) p(r, c) = ket[r] * std::conj(ket[c]);
  return p;
}

}  // namespace

PreparationBasis pure_state_basis(std::size_t dS) {
  if (dS < 2) throw std::invalid_argument("pure_state_basis: dimension must be >= 2");
  PreparationBasis basis;
  basis.dim = dS;

  if (dS == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    basis.kets = {
        {cplx(s, 0), cplx(s, 0)},   // |x+>
        {cplx(s, 0), cplx(0, s)},   // |y+>
        {cplx(1, 0), cplx(0, 0)},   // |z+>
        {cplx(s, 0), cplx(-s, 0)},  // |x->
    };
  } else {
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < dS; ++j) {
      std::vector<cplx> e(dS, cplx(0, 0));
      e[j] = 1.0;
      basis.kets.push_back(std::move(e));
    }
    for (std::size_t j = 0; j < dS; ++j)
      for (std::size_t k = j + 1; k < dS; ++k) {
        std::vector<cplx> e(dS, cplx(0, 0));
        e[j] = s;
        e[k] = s;
        basis.kets.push_back(std::move(e));
      }
    for (std::size_t j = 0; j < dS; ++j)
      for (std::size_t k = j + 1; k < dS; ++k) {
        std::vector<cplx> e(dS, cplx(0, 0));
        e[j] = s;
        e[k] = cplx(0, 1) * s;
        basis.kets.push_back(std::move(e));
      }
  }

  for (auto& ket : basis.kets) ket = normalized(std::move(ket));
  for (const auto& ket : basis.kets) basis.projectors.push_back(projector_of(ket));
  return basis;
}

PreparationBasis preparation_basis(std::size_t dS) {
  PreparationBasis basis = pure_state_basis(dS);
  const std::size_t d2 = dS * dS;
  const std::size_t d4 = d2 * d2;

  basis.preparations.reserve(d4);
  for (std::size_t m = 0; m < d2; ++m)
    for (std::size_t n = 0; n < d2; ++n)
      basis.preparations.push_back(PreparationMap::transition(basis.kets[n], basis.kets[m]));

  basis.gram = ComplexMatrix(d4, d4);
  for (std::size_t a = 0; a < d4; ++a)
    for (std::size_t b = 0; b < d4; ++b)
      basis.gram(a, b) = hs_inner(basis.preparations[a].aform(), basis.preparations[b].aform());

  basis.gram_spectrum = hermitian_eig(basis.gram.hermitized());
  basis.gram_condition = condition_number(basis.gram_spectrum);
  if (basis.gram_condition > tol::kGramCondLimit)
    throw std::runtime_error("preparation_basis: aform Gram matrix is ill-conditioned");

  // dual family: D_j = sum_i Ginv(i, j) aform_i, one Gram solve per column
  basis.duals.reserve(d4);
  for (std::size_t j = 0; j < d4; ++j) {
    std::vector<cplx> ej(d4, cplx(0, 0));
    ej[j] = 1.0;
    const std::vector<cplx> col = hermitian_solve(basis.gram_spectrum, ej);
    ComplexMatrix d(d2, d2);
    for (std::size_t i = 0; i < d4; ++i) {
      const ComplexMatrix& ai = basis.preparations[i].aform();
      for (std::size_t r = 0; r < d2; ++r)
        for (std::size_t c = 0; c < d2; ++c) d(r, c) += col[i] * ai(r, c);
    }
    basis.duals.push_back(std::move(d));
  }
  return basis;
}

bool TomographyRecord::has_degenerate() const {
  for (const auto& e : entries)
    if (e.degenerate) return true;
  return false;
}

TomographyRecord simulate_tomography(const UnitaryMatrix& u, const BipartiteState& state,
                                     const PreparationBasis& basis, double noise_sigma,
                                     std::uint64_t seed) {
  const std::size_t dS = state.system_dim();
  const std::size_t dE = state.env_dim();
  if (basis.dim != dS)
    throw std::invalid_argument("simulate_tomography: basis dimension differs from system");
  if (basis.preparations.size() != dS * dS * dS * dS)
    throw std::invalid_argument("simulate_tomography: basis has no preparations (use preparation_basis)");
  if (u.dim() != dS * dE)
    throw std::invalid_argument("simulate_tomography: unitary dimension differs from joint space");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("simulate_tomography: negative noise_sigma");

  const std::size_t d2 = dS * dS;
  const std::size_t grid = d2 * d2;
  std::vector<std::optional<TomographyEntry>> slots(grid);
  std::exception_ptr failure;  // exceptions must not escape the parallel region

  auto simulate_entry = [&](std::size_t idx) -> TomographyEntry {
    const std::size_t m = idx / d2;
    const std::size_t n = idx % d2;
    const PreparationMap& prep = basis.preparations[idx];

    // unnormalized output p * Q = tr_E[U sigma U^dagger], sigma unnormalized
    const ComplexMatrix sigma = apply_prep_unnormalized(prep, state.joint(), dS, dE);
    const ComplexMatrix evolved = u.mat() * sigma * u.mat().adjoint();
    ComplexMatrix unnorm = partial_trace(evolved, dS, dE, Subsystem::first).hermitized();

    if (noise_sigma > 0.0) {
      // one substream per grid entry; draws are re,im in row-major order
      Xorshift64Star rng(mix_seed(seed, idx));
      for (std::size_t r = 0; r < dS; ++r)
        for (std::size_t c = 0; c < dS; ++c) {
          const double dre = noise_sigma * rng.next_gaussian();
          const double dim2 = noise_sigma * rng.next_gaussian();
          unnorm(r, c) += cplx(dre, dim2);
        }
      unnorm = unnorm.hermitized();
    }

    const double p = unnorm.trace().real();
    if (p < tol::kProbabilityFloor) {
      // state orthogonal to this preparation arm: flag, keep a placeholder
      return TomographyEntry{m, n, p,
                             DensityMatrix(ComplexMatrix::identity(dS) *
                                           cplx(1.0 / static_cast<double>(dS), 0.0)),
                             unnorm, true};
    }

    ComplexMatrix q = unnorm;
    q *= cplx(1.0 / p, 0.0);
    // eigenvalue floor widened by a loose spectral bound on the additive
    // noise after normalization
    const double floor = tol::kEigClamp + 8.0 * noise_sigma * static_cast<double>(dS) / p;
    return TomographyEntry{m, n, p, DensityMatrix(q, floor), unnorm, false};
  };

#pragma omp parallel for schedule(static)
  for (std::size_t idx = 0; idx < grid; ++idx) {
    try {
      slots[idx] = simulate_entry(idx);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  TomographyRecord record;
  record.dim = dS;
  record.env_dim = dE;
  record.seed = seed;
  record.noise_sigma = noise_sigma;
  record.entries.reserve(grid);
  for (auto& slot : slots) record.entries.push_back(std::move(*slot));
  return record;
}

MMap reconstruct_mmap(const TomographyRecord& record, const PreparationBasis& basis) {
  const std::size_t dS = record.dim;
  const std::size_t grid = dS * dS * dS * dS;
  if (basis.dim != dS)
    throw std::invalid_argument("reconstruct_mmap: basis dimension differs from record");
  if (record.entries.size() != grid)
    throw std::invalid_argument("reconstruct_mmap: record incomplete (" +
                                std::to_string(record.entries.size()) + " of " +
                                std::to_string(grid) + " entries)");
  if (basis.duals.size() != grid)
    throw std::invalid_argument("reconstruct_mmap: basis has no dual family");
  if (record.has_degenerate())
    throw std::runtime_error(
        "reconstruct_mmap: record has degenerate preparation arms; "
        "re-measure with a basis compatible with the state");

  const std::size_t d3 = dS * dS * dS;
  MMap m;
  m.dim = dS;
  m.tensor = ComplexMatrix(d3, d3);
  for (std::size_t idx = 0; idx < grid; ++idx)
    kernels::accumulate_response(m.tensor.data(), record.entries[idx].unnormalized.data(),
                                 basis.duals[idx].data(), dS);
  m.tensor = m.tensor.hermitized();
  return m;
}

PrepDecomposition decompose_prep(const PreparationMap& prep, const PreparationBasis& basis) {
  if (prep.dim() != basis.dim)
    throw std::invalid_argument("decompose_prep: dimension mismatch");
  const std::size_t d4 = basis.preparations.size();
  if (d4 == 0) throw std::invalid_argument("decompose_prep: basis has no preparations");

  std::vector<cplx> rhs(d4);
  for (std::size_t i = 0; i < d4; ++i)
    rhs[i] = hs_inner(basis.preparations[i].aform(), prep.aform());

  PrepDecomposition out;
  out.coefficients = hermitian_solve(basis.gram_spectrum, rhs);

  ComplexMatrix rebuilt(basis.dim * basis.dim, basis.dim * basis.dim);
  for (std::size_t i = 0; i < d4; ++i) {
    const ComplexMatrix& ai = basis.preparations[i].aform();
    for (std::size_t r = 0; r < rebuilt.rows(); ++r)
      for (std::size_t c = 0; c < rebuilt.cols(); ++c)
        rebuilt(r, c) += out.coefficients[i] * ai(r, c);
  }
  out.residual = (rebuilt - prep.aform()).frobenius_norm();
  return out;
}

DensityMatrix predict_output(const MMap& m, const PreparationMap& prep,
                             const PreparationBasis& basis) {
  const PrepDecomposition dec = decompose_prep(prep, basis);
  const std::size_t d4 = basis.preparations.size();
  ComplexMatrix q(m.dim, m.dim);
  for (std::size_t i = 0; i < d4; ++i) {
    const ComplexMatrix r = contract_mmap_unnormalized(m, basis.preparations[i]);
    for (std::size_t a = 0; a < q.rows(); ++a)
      for (std::size_t b = 0; b < q.cols(); ++b) q(a, b) += dec.coefficients[i] * r(a, b);
  }
  const double p = q.trace().real();
  if (p < tol::kProbabilityFloor)
    throw std::runtime_error("predict_output: predicted trace below probability floor");
  q *= cplx(1.0 / p, 0.0);
  return DensityMatrix(q.hermitized());
}

}  // namespace mqpt
