#include <doctest.h>

#include "helpers.hpp"
#include "mqpt/constants.hpp"
#include "mqpt/kernels.hpp"
#include "mqpt/mmap.hpp"
#include "mqpt/scenarios.hpp"

using namespace mqpt;
using test::oracle_mmap_tensor;
using test::oracle_standard_qpt;
using test::random_cptp_prep;
using test::random_density;

namespace {

struct Fixture {
  UnitaryMatrix u;
  BipartiteState state;
};

Fixture random_fixture(std::size_t dS, std::size_t dE, double w, std::uint64_t seed) {
  return Fixture{haar_unitary(dS * dE, seed), random_correlated_state(dS, dE, w, seed + 7)};
}

const std::vector<cplx> kXPlus = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};

}  // namespace

TEST_CASE("identity unitary on a product state collapses the tensor") {
  const DensityMatrix rhoS = random_density(2, 1);
  const DensityMatrix rhoE = random_density(2, 2);
  const BipartiteState state = compose_bipartite(rhoS, rhoE, std::nullopt);
  const MMap m = build_mmap(UnitaryMatrix(ComplexMatrix::identity(4)), state);

  // M[rr'r''; ss's''] = delta_rr' delta_ss' rhoS[r'',s'']
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t rp = 0; rp < 2; ++rp)
      for (std::size_t rpp = 0; rpp < 2; ++rpp)
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t sp = 0; sp < 2; ++sp)
            for (std::size_t spp = 0; spp < 2; ++spp) {
              const cplx got = m.tensor(r * 4 + rp * 2 + rpp, s * 4 + sp * 2 + spp);
              const cplx want =
                  (r == rp && s == sp) ? rhoS.mat()(rpp, spp) : cplx(0, 0);
              CHECK(std::abs(got - want) <= 1e-14);
            }
}

TEST_CASE("tensor matches the six-index oracle") {
  for (auto [dS, dE] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}}) {
    const Fixture f = random_fixture(dS, dE, 0.5, 11 + dS + dE);
    const MMap m = build_mmap(f.u, f.state);
    const ComplexMatrix want = oracle_mmap_tensor(f.u.mat(), f.state.joint(), dS, dE);
    CHECK((m.tensor - want).max_abs() <= 1e-12);
  }
}

TEST_CASE("audit: Hermitian, unit-trace-per-dim, PSD, output contraction") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const Fixture f = random_fixture(2, 3, 0.6, seed);
    const MMap m = build_mmap(f.u, f.state);
    const MMapAudit audit = audit_mmap(m);
    CHECK(audit.hermiticity <= 1e-12);
    CHECK(audit.trace_error <= 1e-10);
    CHECK(audit.contraction_error <= 1e-10);
    CHECK(audit.min_eigenvalue >= -tol::kEigClamp);
  }
}

TEST_CASE("contraction equals direct preparation-then-evolution") {
  for (std::uint64_t seed : {31, 32, 33}) {
    const Fixture f = random_fixture(2, 2, 0.5, seed);
    const MMap m = build_mmap(f.u, f.state);
    const PreparationMap prep = random_cptp_prep(2, 2, seed + 100);

    const DensityMatrix via_map = contract_mmap(m, prep);
    const DensityMatrix direct = evolve_reduce(f.u, apply_prep(prep, f.state).state);
    CHECK((via_map.mat() - direct.mat()).frobenius_norm() <= 1e-10);

    // pre-normalization trace carries the success probability
    const double p = apply_prep(prep, f.state).probability;
    CHECK(std::abs(contract_mmap_unnormalized(m, prep).trace().real() - p) <= 1e-10);

    // trace-preserving preparation: unit trace before normalization
    CHECK(std::abs(contract_mmap_unnormalized(m, prep).trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("identity preparation under identity dynamics returns the marginal") {
  const DensityMatrix rhoS = random_density(2, 41);
  const BipartiteState state = compose_bipartite(rhoS, random_density(2, 42), std::nullopt);
  const MMap m = build_mmap(UnitaryMatrix(ComplexMatrix::identity(4)), state);
  const DensityMatrix q = contract_mmap(m, PreparationMap::identity(2));
  CHECK((q.mat() - rhoS.mat()).max_abs() <= 1e-12);
}

TEST_CASE("initial state extraction") {
  // product case: exact marginal
  const DensityMatrix rhoS = random_density(2, 51);
  const BipartiteState prod = compose_bipartite(rhoS, random_density(3, 52), std::nullopt);
  const MMap mp = build_mmap(haar_unitary(6, 53), prod);
  CHECK((initial_state_of(mp).mat() - rhoS.mat()).max_abs() <= 1e-12);

  // correlated case: matches the split marginal
  const Fixture f = random_fixture(2, 3, 0.7, 54);
  const MMap m = build_mmap(f.u, f.state);
  const StateSplit split = split_correlations(f.state);
  CHECK((initial_state_of(m).mat() - split.system.mat()).max_abs() <= 1e-10);
}

TEST_CASE("bcp extraction: identity, swap, and the standard-QPT oracle") {
  // U = I: the identity map's matrix vec(I) vec(I)^dagger
  const BipartiteState prod =
      compose_bipartite(random_density(2, 61), random_density(2, 62), std::nullopt);
  const MMap mi = build_mmap(UnitaryMatrix(ComplexMatrix::identity(4)), prod);
  ComplexMatrix id_form(4, 4);
  for (std::size_t a : {0, 3})
    for (std::size_t b : {0, 3}) id_form(a, b) = 1.0;
  CHECK((bcp_of(mi) - id_form).max_abs() <= 1e-12);

  // U = SWAP: constant output map onto rho_E
  ComplexMatrix swap(4, 4);
  swap(0, 0) = 1.0;
  swap(1, 2) = 1.0;
  swap(2, 1) = 1.0;
  swap(3, 3) = 1.0;
  const MMap ms = build_mmap(UnitaryMatrix(swap), prod);
  const ComplexMatrix rhoE = partial_trace(prod.joint(), 2, 2, Subsystem::second);
  ComplexMatrix want(4, 4);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < 2; ++j) want(r * 2 + j, s * 2 + j) = rhoE(r, s);
  CHECK((bcp_of(ms) - want).max_abs() <= 1e-12);

  // random instance vs operational standard QPT on the product state
  for (std::uint64_t seed : {63, 64}) {
    const Fixture f = random_fixture(2, 3, 0.5, seed);
    const MMap m = build_mmap(f.u, f.state);
    const StateSplit split = split_correlations(f.state);
    const ComplexMatrix oracle = oracle_standard_qpt(f.u, split.environment, 2, 3);
    CHECK((bcp_of(m) - oracle).max_abs() <= 1e-9);

    // trace preserving as a map: delta_rs contraction is the identity
    ComplexMatrix tp(2, 2);
    const ComplexMatrix b = bcp_of(m);
    for (std::size_t rp = 0; rp < 2; ++rp)
      for (std::size_t sp = 0; sp < 2; ++sp) {
        cplx acc(0, 0);
        for (std::size_t r = 0; r < 2; ++r) acc += b(r * 2 + rp, r * 2 + sp);
        tp(rp, sp) = acc;
      }
    CHECK((tp - ComplexMatrix::identity(2)).max_abs() <= 1e-10);

    // PSD in its grouping
    CHECK(cp_check(b.hermitized(), Grouping::map_form).is_cp);
  }
}

TEST_CASE("memory split: product states carry no memory") {
  const BipartiteState prod =
      compose_bipartite(random_density(2, 71), random_density(2, 72), std::nullopt);
  const MMap m = build_mmap(haar_unitary(4, 73), prod);
  const MemorySplit split = memory_of(m);
  CHECK(split.k.tensor.frobenius_norm() <= 1e-10);
  CHECK((split.l - m.tensor).max_abs() <= 1e-10);
}

TEST_CASE("memory split: L is the product-state tensor, K the remainder") {
  for (std::uint64_t seed : {81, 82}) {
    const Fixture f = random_fixture(2, 2, 0.6, seed);
    const MMap m = build_mmap(f.u, f.state);
    const MemorySplit split = memory_of(m);

    // M = L + K identically
    CHECK((m.tensor - (split.l + split.k.tensor)).max_abs() == 0.0);

    // L alone is the map of the uncorrelated problem
    const StateSplit s = split_correlations(f.state);
    const ComplexMatrix l_direct = oracle_mmap_tensor(
        f.u.mat(), kron(s.system.mat(), s.environment.mat()), 2, 2);
    CHECK((split.l - l_direct).max_abs() <= 1e-10);

    // K is the chi-only tensor
    const ComplexMatrix k_direct = oracle_mmap_tensor(f.u.mat(), s.correlations.chi(), 2, 2);
    CHECK((split.k.tensor - k_direct).max_abs() <= 1e-10);

    // both delta-contractions of K vanish
    ComplexMatrix c(4, 4);
    kernels::trace_over_output(split.k.tensor.data(), c.data(), 2);
    CHECK(c.max_abs() <= 1e-10);
    kernels::trace_over_initial(split.k.tensor.data(), c.data(), 2);
    CHECK(c.max_abs() <= 1e-10);
  }
}

TEST_CASE("memory matrix of the canonical instance is large") {
  const ScenarioInstance inst = canonical_cnot_bell();
  const MMap m = build_mmap(inst.u, inst.state);
  const MemorySplit split = memory_of(m);
  CHECK(split.k.tensor.frobenius_norm() > 0.1);

  // explicit tensor computation oracle
  const StateSplit s = split_correlations(inst.state);
  const ComplexMatrix k_direct = oracle_mmap_tensor(inst.u.mat(), s.correlations.chi(), 2, 2);
  CHECK((split.k.tensor - k_direct).max_abs() <= 1e-12);
}

TEST_CASE("memory applied to the identity preparation is the affine term") {
  for (std::uint64_t seed : {91, 92}) {
    const Fixture f = random_fixture(2, 2, 0.5, seed);
    const MMap m = build_mmap(f.u, f.state);
    const MemorySplit split = memory_of(m);
    const StateSplit s = split_correlations(f.state);

    const ComplexMatrix direct = partial_trace(
        f.u.mat() * s.correlations.chi() * f.u.mat().adjoint(), 2, 2, Subsystem::first);
    CHECK((apply_k(split.k, PreparationMap::identity(2)) - direct).max_abs() <= 1e-10);
  }
}

TEST_CASE("memory vanishes on product states for any preparation") {
  const BipartiteState prod =
      compose_bipartite(random_density(2, 101), random_density(2, 102), std::nullopt);
  const MMap m = build_mmap(haar_unitary(4, 103), prod);
  const MemoryMatrix k = memory_of(m).k;
  CHECK(apply_k(k, random_cptp_prep(2, 3, 104)).max_abs() <= 1e-10);
}

TEST_CASE("memory vanishes on pure-reset preparations even with correlations") {
  // deterministic reset to a pure state draws the unconditioned environment:
  // the output equals the L contraction and K contributes nothing
  const ScenarioInstance inst = canonical_cnot_bell();
  const MMap m = build_mmap(inst.u, inst.state);
  const MemorySplit split = memory_of(m);

  const PreparationMap reset = PreparationMap::reset_to(kXPlus);
  CHECK(apply_k(split.k, reset).max_abs() <= 1e-10);

  // both sides by direct evolution: full dynamics vs the uncorrelated map
  const DensityMatrix full = evolve_reduce(inst.u, apply_prep(reset, inst.state).state);
  ComplexMatrix via_l(2, 2);
  kernels::contract_super(split.l.data(), reset.aform().data(), via_l.data(), 2);
  CHECK((full.mat() - via_l).max_abs() <= 1e-10);

  // a selective transition preparation, by contrast, does pull memory in
  const PreparationMap selective = PreparationMap::transition(kXPlus, kXPlus);
  CHECK(apply_k(split.k, selective).max_abs() > 1e-3);
}

TEST_CASE("assemble_b reproduces the full dynamics on the initial state") {
  SUBCASE("product state: affine part zero") {
    const BipartiteState prod =
        compose_bipartite(random_density(2, 111), random_density(2, 112), std::nullopt);
    const MMap m = build_mmap(haar_unitary(4, 113), prod);
    const DynamicalMap b = assemble_b(m);
    CHECK(b.affine.frobenius_norm() <= 1e-10);
    CHECK((b.combined_matrix() - b.linear).max_abs() <= 1e-10);
  }

  SUBCASE("canonical correlated instance") {
    const ScenarioInstance inst = canonical_cnot_bell();
    const MMap m = build_mmap(inst.u, inst.state);
    const DynamicalMap b = assemble_b(m);
    CHECK(b.affine.frobenius_norm() > 1e-3);

    // affine part is Hermitian and traceless
    CHECK(b.affine.hermiticity_defect() <= 1e-10);
    CHECK(std::abs(b.affine.trace()) <= 1e-10);

    // B(rho_S) = B_cp(rho_S) + B_aff equals the dynamics of the state itself
    const ComplexMatrix rhoS = initial_state_of(m).mat();
    ComplexMatrix out(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t s = 0; s < 2; ++s) {
        cplx acc(0, 0);
        for (std::size_t rp = 0; rp < 2; ++rp)
          for (std::size_t sp = 0; sp < 2; ++sp)
            acc += b.linear(r * 2 + rp, s * 2 + sp) * rhoS(rp, sp);
        out(r, s) = acc + b.affine(r, s);
      }
    const DensityMatrix direct = evolve_reduce(inst.u, inst.state);
    CHECK((out - direct.mat()).max_abs() <= 1e-10);
  }
}

TEST_CASE("cp_check recognizes the expected spectra") {
  // every construcible tensor is CP in the iota grouping
  const Fixture f = random_fixture(2, 2, 0.5, 121);
  const MMap m = build_mmap(f.u, f.state);
  CHECK(cp_check(m.tensor.hermitized(), Grouping::super_super).is_cp);

  // identity map's matrix: rank one, eigenvalues {dS, 0, 0, 0}
  const ComplexMatrix id_form = PreparationMap::identity(2).aform();
  const CpCheck idc = cp_check(id_form, Grouping::map_form);
  CHECK(idc.is_cp);
  CHECK(idc.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hermitian_eig(id_form).eigenvalues.back() == doctest::Approx(2.0).epsilon(1e-12));

  // the canonical combined dynamical map is the NCP witness
  const ScenarioInstance inst = canonical_cnot_bell();
  const DynamicalMap b = assemble_b(build_mmap(inst.u, inst.state));
  const CpCheck ncp = cp_check(b.combined_matrix().hermitized(), Grouping::map_form);
  CHECK_FALSE(ncp.is_cp);
  CHECK(ncp.min_eigenvalue < -1e-3);

  // non-Hermitian input and wrong grouping size are rejected
  ComplexMatrix bad(4, 4);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(cp_check(bad, Grouping::map_form), std::invalid_argument);
  CHECK_THROWS_AS(cp_check(ComplexMatrix::identity(4), Grouping::super_super),
                  std::invalid_argument);
}

TEST_CASE("Kraus extraction reproduces the tensor and its action") {
  SUBCASE("low-rank product case") {
    const BipartiteState prod =
        compose_bipartite(random_density(2, 131), random_density(2, 132), std::nullopt);
    const MMap m = build_mmap(UnitaryMatrix(ComplexMatrix::identity(4)), prod);
    const KrausSet set = kraus_of(m);
    CHECK((kraus_reconstruct(set) - m.tensor).max_abs() <= 1e-10);
  }

  SUBCASE("random instances") {
    for (std::uint64_t seed : {141, 142}) {
      const Fixture f = random_fixture(2, 3, 0.5, seed);
      const MMap m = build_mmap(f.u, f.state);
      const KrausSet set = kraus_of(m);

      CHECK(set.ops.size() <= 8);  // at most dS^3 spectral operators
      CHECK((kraus_reconstruct(set) - m.tensor).frobenius_norm() <= 1e-9);

      // operator-sum action equals the tensor contraction
      const PreparationMap prep = random_cptp_prep(2, 2, seed + 10);
      const ComplexMatrix via_ops = apply_kraus(set, prep.aform());
      const ComplexMatrix via_tensor = contract_mmap_unnormalized(m, prep);
      CHECK((via_ops - via_tensor).max_abs() <= 1e-9);
    }
  }

  SUBCASE("rank bound follows the state rank") {
    // pure joint state: rank(rho) = 1, so at most dE spectral operators
    const BipartiteState pure = random_correlated_state(2, 3, 1.0, 151);
    const MMap m = build_mmap(haar_unitary(6, 152), pure);
    const KrausSet set = kraus_of(m);
    CHECK(set.ops.size() <= 3);
  }
}

TEST_CASE("contraction is linear in the aform") {
  const Fixture f = random_fixture(2, 2, 0.5, 161);
  const MMap m = build_mmap(f.u, f.state);
  const PreparationMap a1 = random_cptp_prep(2, 2, 162);
  const PreparationMap a2 = random_cptp_prep(2, 3, 163);

  const double alpha = 0.73, beta = -1.4;
  ComplexMatrix combined = a1.aform() * cplx(alpha, 0) + a2.aform() * cplx(beta, 0);
  ComplexMatrix q_combined(2, 2);
  kernels::contract_super(m.tensor.data(), combined.data(), q_combined.data(), 2);

  const ComplexMatrix expect = contract_mmap_unnormalized(m, a1) * cplx(alpha, 0) +
                               contract_mmap_unnormalized(m, a2) * cplx(beta, 0);
  CHECK((q_combined - expect).max_abs() <= 1e-11);
}
