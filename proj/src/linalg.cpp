#include "mqpt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mqpt/constants.hpp"
#include "mqpt/kernels.hpp"

namespace mqpt {

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  kernels::matmul(a.data(), b.data(), out.data(), a.rows(), a.cols(), b.cols());
  return out;
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  cplx acc(0.0, 0.0);
  const cplx* pa = a.data();
  const cplx* pb = b.data();
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(pa[i]) * pb[i];
  return acc;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  kernels::kron(a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols(), out.data());
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep) {
  if (!m.square() || m.rows() != dimA * dimB)
    throw std::invalid_argument("partial_trace: matrix is not (dimA*dimB)-square");
  if (keep == Subsystem::first) {
    ComplexMatrix out(dimA, dimA);
    kernels::partial_trace_first(m.data(), dimA, dimB, out.data());
    return out;
  }
  ComplexMatrix out(dimB, dimB);
  kernels::partial_trace_second(m.data(), dimA, dimB, out.data());
  return out;
}

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace

HermitianSpectrum hermitian_eig(const ComplexMatrix& m) {
  if (!m.square()) throw std::invalid_argument("hermitian_eig: matrix not square");
  if (!m.is_hermitian(tol::kStructure))
    throw std::invalid_argument("hermitian_eig: matrix not Hermitian within tolerance");

  const std::size_t n = m.rows();
  ComplexMatrix a = m.hermitized();  // kill the sub-tolerance asymmetry up front
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double threshold = tol::kJacobiOff * std::max(1.0, a.frobenius_norm());
  bool converged = offdiag_frobenius(a) <= threshold;

  for (int sweep = 0; sweep < tol::kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double rabs = std::abs(apq);
        if (rabs == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx phase = apq / rabs;  // e^{i phi}

        // rotation angle from tan(2 theta) = 2|apq| / (aqq - app)
        const double tau = (aqq - app) / (2.0 * rabs);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // unitary J: J(p,p)=c, J(p,q)=s*phase, J(q,p)=-s*conj(phase), J(q,q)=c
        // columns p and q of A and V transform; rows follow by symmetry
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(phase) * akq;
          a(k, q) = s * phase * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * std::conj(phase) * apk + c * aqk;
        }
        a(p, q) = cplx(0.0, 0.0);
        a(q, p) = cplx(0.0, 0.0);
        a(p, p) = cplx(a(p, p).real(), 0.0);
        a(q, q) = cplx(a(q, q).real(), 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * std::conj(phase) * vkq;
          v(k, q) = s * phase * vkp + c * vkq;
        }
      }
    }
    converged = offdiag_frobenius(a) <= threshold;
  }
  if (!converged)
    throw std::runtime_error("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianSpectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    spec.eigenvalues[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < n; ++k) spec.eigenvectors(k, i) = v(k, order[i]);
  }
  return spec;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  return hermitian_eig(hermitian).eigenvalues.front();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianSpectrum spec = hermitian_eig(m);
  const std::size_t n = m.rows();
  std::vector<double> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lambda = spec.eigenvalues[i];
    if (lambda < -tol::kEigClamp)
      throw std::invalid_argument("psd_sqrt: eigenvalue below -1e-10, input not PSD");
    if (lambda < 0.0) lambda = 0.0;
    roots[i] = std::sqrt(lambda);
  }
  ComplexMatrix scaled(n, n);  // V * diag(sqrt(lambda))
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scaled(r, c) = spec.eigenvectors(r, c) * roots[c];
  return (scaled * spec.eigenvectors.adjoint()).hermitized();
}

std::vector<cplx> hermitian_solve(const HermitianSpectrum& spec, const std::vector<cplx>& b) {
  const std::size_t n = spec.eigenvalues.size();
  if (b.size() != n) throw std::invalid_argument("hermitian_solve: size mismatch");
  if (condition_number(spec) > tol::kGramCondLimit)
    throw std::runtime_error("hermitian_solve: matrix condition number exceeds limit");
  // x = V diag(1/lambda) V^dagger b
  std::vector<cplx> proj(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) acc += std::conj(spec.eigenvectors(k, i)) * b[k];
    proj[i] = acc / spec.eigenvalues[i];
  }
  std::vector<cplx> x(n, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += spec.eigenvectors(k, i) * proj[i];
    x[k] = acc;
  }
  return x;
}

double condition_number(const HermitianSpectrum& spec) {
  const double lo = std::abs(spec.eigenvalues.front());
  const double hi = std::abs(spec.eigenvalues.back());
  const double mn = std::min(lo, hi);
  const double mx = std::max(lo, hi);
  if (mn == 0.0) return std::numeric_limits<double>::infinity();
  return mx / mn;
}

}  // namespace mqpt
