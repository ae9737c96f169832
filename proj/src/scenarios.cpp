#include "mqpt/scenarios.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "mqpt/constants.hpp"
#include "mqpt/rng.hpp"

namespace mqpt {

namespace {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Xorshift64Star& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      g(r, c) = cplx(rng.next_gaussian(), rng.next_gaussian());
  return g;
}

ComplexMatrix random_density(std::size_t d, Xorshift64Star& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= cplx(1.0 / rho.trace().real(), 0.0);
  return rho.hermitized();
}

std::vector<cplx> random_ket(std::size_t d, Xorshift64Star& rng) {
  std::vector<cplx> v(d);
  double norm = 0.0;
  for (auto& c : v) {
    c = cplx(rng.next_gaussian(), rng.next_gaussian());
    norm += std::norm(c);
  }
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return v;
}

// modified Gram-Schmidt on columns, two passes for orthogonality at
// working precision; the positive real diagonal of R makes Q Haar when the
// input is Ginibre
ComplexMatrix gram_schmidt_q(ComplexMatrix a) {
  const std::size_t n = a.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx proj(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) proj += std::conj(a(k, i)) * a(k, j);
        for (std::size_t k = 0; k < n; ++k) a(k, j) -= proj * a(k, i);
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) norm += std::norm(a(k, j));
      norm = std::sqrt(norm);
      if (norm == 0.0) throw std::runtime_error("gram_schmidt_q: rank-deficient sample");
      for (std::size_t k = 0; k < n; ++k) a(k, j) /= norm;
    }
  }
  return a;
}

ComplexMatrix cnot_matrix() {
  ComplexMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

struct Decomposition {
  double norm_chi;
  double norm_k;
  double norm_baff;
  double min_eig_b;
};

Decomposition decompose(const UnitaryMatrix& u, const BipartiteState& state) {
  const MMap m = build_mmap(u, state);
  const MemorySplit split = memory_of(m);
  const DynamicalMap b = assemble_b(m);
  const StateSplit s = split_correlations(state);
  Decomposition d;
  d.norm_chi = s.correlations.chi().frobenius_norm();
  d.norm_k = split.k.tensor.frobenius_norm();
  d.norm_baff = b.affine.frobenius_norm();
  d.min_eig_b = min_eigenvalue(b.combined_matrix().hermitized());
  return d;
}

ScenarioFlags flags_from(const Decomposition& d) {
  ScenarioFlags f;
  f.product = d.norm_chi <= tol::kEigClamp;
  f.correlated = !f.product;
  f.vanishing_memory = f.correlated && d.norm_baff <= tol::kEigClamp;
  f.ncp_expected = d.min_eig_b < -tol::kEigClamp;
  return f;
}

}  // namespace

std::string ScenarioFlags::to_string() const {
  std::string s;
  auto add = [&s](const char* name) {
    if (!s.empty()) s += "|";
    s += name;
  };
  if (product) add("product");
  if (correlated) add("correlated");
  if (vanishing_memory) add("vanishing_memory");
  if (ncp_expected) add("ncp");
  if (s.empty()) s = "-";
  return s;
}

UnitaryMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
  Xorshift64Star rng(seed);
  if (d == 1) {
    const double a = 6.283185307179586476925286766559 * rng.next_unit();
    ComplexMatrix u(1, 1);
    u(0, 0) = cplx(std::cos(a), std::sin(a));
    return UnitaryMatrix(u);
  }
  return UnitaryMatrix(gram_schmidt_q(ginibre(d, d, rng)));
}

BipartiteState random_correlated_state(std::size_t dS, std::size_t dE, double w,
                                       std::uint64_t seed) {
  if (dS < 2 || dE < 2)
    throw std::invalid_argument("random_correlated_state: dimensions must be >= 2");
  if (w < 0.0 || w > 1.0)
    throw std::invalid_argument("random_correlated_state: weight outside [0,1]");
  Xorshift64Star rng(seed);
  const ComplexMatrix rhoS = random_density(dS, rng);
  const ComplexMatrix rhoE = random_density(dE, rng);
  const std::vector<cplx> psi = random_ket(dS * dE, rng);

  ComplexMatrix joint = kron(rhoS, rhoE);
  joint *= cplx(1.0 - w, 0.0);
  for (std::size_t r = 0; r < dS * dE; ++r)
    for (std::size_t c = 0; c < dS * dE; ++c) joint(r, c) += w * psi[r] * std::conj(psi[c]);
  return BipartiteState(dS, dE, joint.hermitized());
}

ScenarioInstance make_instance(std::string label, UnitaryMatrix u, BipartiteState state,
                               std::uint64_t seed) {
  const Decomposition d = decompose(u, state);
  return ScenarioInstance{std::move(label), std::move(u), std::move(state), seed,
                          flags_from(d)};
}

ScenarioInstance canonical_cnot_bell() {
  const double s = 1.0 / std::sqrt(2.0);
  // Bell kets as columns: phi+, phi-, psi+, psi-
  const double kets[4][4] = {{s, 0, 0, s}, {s, 0, 0, -s}, {0, s, s, 0}, {0, s, -s, 0}};
  ComplexMatrix joint(4, 4);
  for (int i = 0; i < 4; ++i)
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        joint(r, c) += kCanonicalBellWeights[i] * kets[i][r] * kets[i][c];

  UnitaryMatrix u(cnot_matrix());
  BipartiteState state(2, 2, joint);
  const Decomposition d = decompose(u, state);

  if (d.min_eig_b >= -1e-3)
    throw std::runtime_error("canonical_cnot_bell: NCP witness not below -1e-3");
  if (std::abs(d.min_eig_b - kCanonicalNcpWitness) > 1e-12)
    throw std::runtime_error("canonical_cnot_bell: witness drifted from recorded value");

  ScenarioInstance inst{"canonical_cnot_bell", std::move(u), std::move(state), 0,
                        flags_from(d)};
  return inst;
}

ScenarioInstance vanishing_memory_instance(std::uint64_t seed) {
  const std::size_t dS = 2, dE = 2;
  UnitaryMatrix u(cnot_matrix());

  // Hermitian basis with both partial traces zero: sigma_i (x) sigma_j
  std::vector<ComplexMatrix> sigma(3, ComplexMatrix(2, 2));
  sigma[0](0, 1) = 1.0;
  sigma[0](1, 0) = 1.0;
  sigma[1](0, 1) = cplx(0, -1);
  sigma[1](1, 0) = cplx(0, 1);
  sigma[2](0, 0) = 1.0;
  sigma[2](1, 1) = -1.0;
  std::vector<ComplexMatrix> basis;
  for (const auto& a : sigma)
    for (const auto& b : sigma) basis.push_back(kron(a, b));
  const std::size_t nb = basis.size();  // 9

  // Linear constraint tr_E[U chi U^dagger] = 0. The output is Hermitian and
  // traceless, so three real components per basis element; the null space of
  // T^T T carries the admissible directions.
  ComplexMatrix tt(nb, nb);
  std::vector<std::array<double, 3>> tcol(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const ComplexMatrix out =
        partial_trace(u.mat() * basis[j] * u.mat().adjoint(), dS, dE, Subsystem::first);
    tcol[j] = {out(0, 0).real(), out(0, 1).real(), out(0, 1).imag()};
  }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      tt(i, j) = tcol[i][0] * tcol[j][0] + tcol[i][1] * tcol[j][1] + tcol[i][2] * tcol[j][2];
  const HermitianSpectrum spec = hermitian_eig(tt);

  std::vector<std::size_t> null_dirs;
  for (std::size_t i = 0; i < nb; ++i)
    if (spec.eigenvalues[i] <= 1e-12) null_dirs.push_back(i);
  if (null_dirs.empty())
    throw std::runtime_error("vanishing_memory_instance: constraint has no null space");

  Xorshift64Star rng(seed);
  const int max_attempts = 64;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    // random combination of null directions
    std::vector<double> coeff(nb, 0.0);
    for (std::size_t i : null_dirs) {
      const double g = rng.next_gaussian();
      for (std::size_t j = 0; j < nb; ++j) coeff[j] += g * spec.eigenvectors(j, i).real();
    }
    ComplexMatrix chi0(4, 4);
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) chi0(r, c) += coeff[j] * basis[j](r, c);
    }
    chi0 = chi0.hermitized();
    const double norm0 = chi0.frobenius_norm();
    if (norm0 < 1e-8) continue;
    chi0 *= cplx(1.0 / norm0, 0.0);

    // scale into the PSD region around the maximally mixed product state
    ComplexMatrix base = ComplexMatrix::identity(4);
    base *= cplx(0.25, 0.0);
    const double margin = 1e-3;
    double lo = 0.0, hi = 1.0;
    while (min_eigenvalue((base + ComplexMatrix(chi0) * cplx(hi, 0.0)).hermitized()) >= margin &&
           hi < 1e3)
      hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (min_eigenvalue((base + ComplexMatrix(chi0) * cplx(mid, 0.0)).hermitized()) >= margin)
        lo = mid;
      else
        hi = mid;
    }
    const double t = lo;  // equals ||chi||_F since chi0 is unit-norm
    if (t <= 1e-2) continue;

    ComplexMatrix joint = base + ComplexMatrix(chi0) * cplx(t, 0.0);
    BipartiteState state(dS, dE, joint.hermitized());
    const Decomposition d = decompose(u, state);
    if (d.norm_chi <= 1e-2) continue;
    if (d.norm_baff > tol::kEigClamp) continue;   // constraint must have held
    if (d.norm_k <= 1e-2) continue;               // memory must survive as a tensor

    ScenarioInstance inst{"vanishing_memory", u, std::move(state), seed, flags_from(d)};
    return inst;
  }
  throw std::runtime_error("vanishing_memory_instance: search failed after bounded attempts");
}

std::vector<ScanRow> ncp_scan(std::size_t n_instances, std::size_t dS, std::size_t dE,
                              std::uint64_t seed, std::optional<double> fixed_w) {
  if (n_instances < 1) throw std::invalid_argument("ncp_scan: need at least one instance");
  std::vector<ScanRow> rows(n_instances);
  std::exception_ptr failure;

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n_instances; ++i) {
    try {
      const std::uint64_t inst_seed = mix_seed(seed, i);
      Xorshift64Star wrng(mix_seed(inst_seed, 0xC0FFEE));
      const double w = fixed_w ? *fixed_w : (0.1 + 0.8 * wrng.next_unit());
      const BipartiteState state = random_correlated_state(dS, dE, w, inst_seed);
      const UnitaryMatrix u = haar_unitary(dS * dE, mix_seed(inst_seed, 1));
      const Decomposition d = decompose(u, state);
      ScanRow row;
      row.label = "random-" + std::to_string(i);
      row.seed = inst_seed;
      row.norm_chi = d.norm_chi;
      row.norm_k = d.norm_k;
      row.min_eig_b = d.min_eig_b;
      row.flags = flags_from(d);
      rows[i] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string format_scan_table(const std::vector<ScanRow>& rows) {
  std::string out = "label\tseed\tnorm_chi\tnorm_K\tmin_eig_B\tflags\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s\t%llu\t%.17g\t%.17g\t%.17g\t%s\n", r.label.c_str(),
                  static_cast<unsigned long long>(r.seed), r.norm_chi, r.norm_k, r.min_eig_b,
                  r.flags.to_string().c_str());
    out += buf;
  }
  return out;
}

}  // namespace mqpt
