#include "helpers.hpp"

#include <cmath>

#include "mqpt/linalg.hpp"
#include "mqpt/scenarios.hpp"

namespace mqpt::test {

PreparationMap random_cptp_prep(std::size_t dS, std::size_t arms, std::uint64_t seed) {
  const UnitaryMatrix big = haar_unitary(dS * arms, seed);
  std::vector<ComplexMatrix> ops;
  ops.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    ComplexMatrix a(dS, dS);
    for (std::size_t i = 0; i < dS; ++i)
      for (std::size_t j = 0; j < dS; ++j) a(i, j) = big.mat()(k * dS + i, j);
    ops.push_back(std::move(a));
  }
  return PreparationMap::from_kraus(std::move(ops));
}

ComplexMatrix oracle_mmap_tensor(const ComplexMatrix& u, const ComplexMatrix& rho,
                                 std::size_t dS, std::size_t dE) {
  const std::size_t d3 = dS * dS * dS;
  ComplexMatrix out(d3, d3);
  for (std::size_t r = 0; r < dS; ++r)
    for (std::size_t rp = 0; rp < dS; ++rp)
      for (std::size_t rpp = 0; rpp < dS; ++rpp)
        for (std::size_t s = 0; s < dS; ++s)
          for (std::size_t sp = 0; sp < dS; ++sp)
            for (std::size_t spp = 0; spp < dS; ++spp) {
              cplx acc(0.0, 0.0);
              for (std::size_t a = 0; a < dE; ++a)
                for (std::size_t b = 0; b < dE; ++b)
                  for (std::size_t e = 0; e < dE; ++e)
                    acc += u(r * dE + e, rp * dE + a) * rho(rpp * dE + a, spp * dE + b) *
                           std::conj(u(s * dE + e, sp * dE + b));
              out(r * dS * dS + rp * dS + rpp, s * dS * dS + sp * dS + spp) = acc;
            }
  return out;
}

ComplexMatrix oracle_standard_qpt(const UnitaryMatrix& u, const DensityMatrix& rhoE,
                                  std::size_t dS, std::size_t dE) {
  // local spanning projector family: |j>, (|j>+|k>)/sqrt2, (|j>+i|k>)/sqrt2
  std::vector<std::vector<cplx>> kets;
  for (std::size_t j = 0; j < dS; ++j) {
    std::vector<cplx> e(dS, cplx(0, 0));
    e[j] = 1.0;
    kets.push_back(e);
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < dS; ++j)
    for (std::size_t k = j + 1; k < dS; ++k) {
      std::vector<cplx> e(dS, cplx(0, 0));
      e[j] = s;
      e[k] = s;
      kets.push_back(e);
      e[k] = cplx(0, 1) * s;
      kets.push_back(e);
    }
  const std::size_t d2 = dS * dS;

  std::vector<ComplexMatrix> projectors;
  for (const auto& ket : kets) {
    ComplexMatrix p(dS, dS);
    for (std::size_t r = 0; r < dS; ++r)
      for (std::size_t c = 0; c < dS; ++c) p(r, c) = ket[r] * std::conj(ket[c]);
    projectors.push_back(std::move(p));
  }

  // send each projector through the channel
  std::vector<ComplexMatrix> outputs;
  for (const auto& p : projectors) {
    const ComplexMatrix in = kron(p, rhoE.mat());
    const ComplexMatrix ev = u.mat() * in * u.mat().adjoint();
    outputs.push_back(partial_trace(ev, dS, dE, Subsystem::first));
  }

  // dual family from the projector Gram
  ComplexMatrix gram(d2, d2);
  for (std::size_t a = 0; a < d2; ++a)
    for (std::size_t b = 0; b < d2; ++b) gram(a, b) = hs_inner(projectors[a], projectors[b]);
  const HermitianSpectrum spec = hermitian_eig(gram.hermitized());

  std::vector<ComplexMatrix> duals;
  for (std::size_t j = 0; j < d2; ++j) {
    std::vector<cplx> ej(d2, cplx(0, 0));
    ej[j] = 1.0;
    const std::vector<cplx> col = hermitian_solve(spec, ej);
    ComplexMatrix dmat(dS, dS);
    for (std::size_t i = 0; i < d2; ++i)
      for (std::size_t r = 0; r < dS; ++r)
        for (std::size_t c = 0; c < dS; ++c) dmat(r, c) += col[i] * projectors[i](r, c);
    duals.push_back(std::move(dmat));
  }

  // F[(r r'), (s s')] = sum_m O^m[r,s] conj(D^m[r',s'])
  ComplexMatrix f(d2, d2);
  for (std::size_t m = 0; m < d2; ++m)
    for (std::size_t r = 0; r < dS; ++r)
      for (std::size_t rp = 0; rp < dS; ++rp)
        for (std::size_t ss = 0; ss < dS; ++ss)
          for (std::size_t sp = 0; sp < dS; ++sp)
            f(r * dS + rp, ss * dS + sp) += outputs[m](r, ss) * std::conj(duals[m](rp, sp));
  return f;
}

}  // namespace mqpt::test
