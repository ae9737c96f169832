#ifndef MQPT_LINALG_HPP
#define MQPT_LINALG_HPP

#include <vector>

#include "mqpt/matrix.hpp"

namespace mqpt {

enum class Subsystem { first, second };

// Kronecker product, block structure a_ij * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace of a (dimA*dimB)-square matrix over the factor NOT kept.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep);

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, orthonormal, paired with eigenvalues
};

// Cyclic Jacobi diagonalization of a complex Hermitian matrix. Sweeps until
// the off-diagonal Frobenius norm falls below tol::kJacobiOff (relative to
// max(1, ||m||_F)); throws on non-Hermitian input or if kJacobiMaxSweeps
// sweeps do not converge. Kept serial: rotations are order-dependent and the
// matrices here stay small.
HermitianSpectrum hermitian_eig(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& hermitian);

// Hermitian PSD square root via the spectrum; eigenvalues in
// [-tol::kEigClamp, 0) clamp to zero, anything lower throws.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Solve h x = b for Hermitian positive-definite h through its spectrum.
// Throws if the condition number exceeds tol::kGramCondLimit.
std::vector<cplx> hermitian_solve(const HermitianSpectrum& spec, const std::vector<cplx>& b);

// lambda_max / lambda_min from an already computed spectrum.
double condition_number(const HermitianSpectrum& spec);

}  // namespace mqpt

#endif
