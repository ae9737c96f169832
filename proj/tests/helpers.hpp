#ifndef MQPT_TESTS_HELPERS_HPP
#define MQPT_TESTS_HELPERS_HPP

// Shared fixtures and the independent oracles the tests check against.
// Everything here recomputes results from scratch with plain loops; none of
// it reuses the kernel or module code paths under test.

#include <complex>
#include <cstdint>
#include <vector>

#include "mqpt/matrix.hpp"
#include "mqpt/rng.hpp"
#include "mqpt/states.hpp"

namespace mqpt::test {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = cplx(rng.next_gaussian(), rng.next_gaussian());
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  return random_matrix(n, n, seed).hermitized();
}

inline ComplexMatrix random_psd(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix g = random_matrix(n, n, seed);
  return (g * g.adjoint()).hermitized();
}

inline DensityMatrix random_density(std::size_t n, std::uint64_t seed) {
  ComplexMatrix rho = random_psd(n, seed);
  rho *= cplx(1.0 / rho.trace().real(), 0.0);
  return DensityMatrix(rho.hermitized());
}

// Trace-preserving preparation with `arms` Kraus operators, carved out of a
// Haar-style random isometry.
PreparationMap random_cptp_prep(std::size_t dS, std::size_t arms, std::uint64_t seed);

// --- oracles -------------------------------------------------------------

// kron by the index formula out(i*rb+k, j*cb+l) = a(i,j) b(k,l)
inline ComplexMatrix oracle_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// partial trace by explicit double-loop summation
inline ComplexMatrix oracle_ptrace_first(const ComplexMatrix& m, std::size_t dA,
                                         std::size_t dB) {
  ComplexMatrix out(dA, dA);
  for (std::size_t r = 0; r < dA; ++r)
    for (std::size_t s = 0; s < dA; ++s)
      for (std::size_t b = 0; b < dB; ++b) out(r, s) += m(r * dB + b, s * dB + b);
  return out;
}

inline ComplexMatrix oracle_ptrace_second(const ComplexMatrix& m, std::size_t dA,
                                          std::size_t dB) {
  ComplexMatrix out(dB, dB);
  for (std::size_t a = 0; a < dB; ++a)
    for (std::size_t b = 0; b < dB; ++b)
      for (std::size_t r = 0; r < dA; ++r) out(a, b) += m(r * dB + a, r * dB + b);
  return out;
}

// Eq.-level six-index loop for the super-superoperator, written without the
// kernel's blocking
ComplexMatrix oracle_mmap_tensor(const ComplexMatrix& u, const ComplexMatrix& rho,
                                 std::size_t dS, std::size_t dE);

// Standard process tomography of rho -> tr_E[U (rho (x) rhoE) U^dagger],
// done operationally: feed a spanning projector family through the channel
// and invert with the state dual basis. Returns the d^2 x d^2 matrix form.
ComplexMatrix oracle_standard_qpt(const UnitaryMatrix& u, const DensityMatrix& rhoE,
                                  std::size_t dS, std::size_t dE);

}  // namespace mqpt::test

#endif
