#include "mqpt/mmap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mqpt/constants.hpp"
#include "mqpt/kernels.hpp"

namespace mqpt {

MMap build_mmap(const UnitaryMatrix& u, const BipartiteState& state) {
  const std::size_t dS = state.system_dim();
  const std::size_t dE = state.env_dim();
  if (u.dim() != dS * dE)
    throw std::invalid_argument("build_mmap: unitary dimension differs from joint space");
  MMap m;
  m.dim = dS;
  m.tensor = ComplexMatrix(dS * dS * dS, dS * dS * dS);
  kernels::build_mmap(u.mat().data(), state.joint().data(), dS, dE, m.tensor.data());
  return m;
}

ComplexMatrix contract_mmap_unnormalized(const MMap& m, const PreparationMap& prep) {
  if (prep.dim() != m.dim)
    throw std::invalid_argument("contract_mmap: preparation dimension differs from map");
  ComplexMatrix q(m.dim, m.dim);
  kernels::contract_super(m.tensor.data(), prep.aform().data(), q.data(), m.dim);
  return q;
}

DensityMatrix contract_mmap(const MMap& m, const PreparationMap& prep) {
  ComplexMatrix q = contract_mmap_unnormalized(m, prep);
  const double p = q.trace().real();
  if (p < tol::kProbabilityFloor)
    throw std::runtime_error("contract_mmap: output trace below probability floor");
  q *= cplx(1.0 / p, 0.0);
  return DensityMatrix(q.hermitized());
}

DensityMatrix initial_state_of(const MMap& m) {
  const std::size_t d = m.dim;
  ComplexMatrix rho(d, d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      cplx acc(0.0, 0.0);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t rp = 0; rp < d; ++rp)
          acc += m.tensor((r * d + rp) * d + x, (r * d + rp) * d + y);
      rho(x, y) = acc / static_cast<double>(d);
    }
  return DensityMatrix(rho.hermitized());
}

ComplexMatrix bcp_of(const MMap& m) {
  ComplexMatrix b(m.dim * m.dim, m.dim * m.dim);
  kernels::trace_over_initial(m.tensor.data(), b.data(), m.dim);
  return b;
}

MemorySplit memory_of(const MMap& m) {
  const std::size_t d = m.dim;
  const ComplexMatrix bcp = bcp_of(m);
  const ComplexMatrix rhoS = initial_state_of(m).mat();

  const std::size_t d2 = d * d;
  const std::size_t d3 = d2 * d;
  ComplexMatrix l(d3, d3);
  for (std::size_t k1 = 0; k1 < d2; ++k1)
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      const cplx bv = bcp(k1, k2);
      for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) l(k1 * d + x, k2 * d + y) = bv * rhoS(x, y);
    }

  MemoryMatrix k;
  k.dim = d;
  k.tensor = m.tensor - l;
  return MemorySplit{std::move(l), std::move(k)};
}

ComplexMatrix apply_k(const MemoryMatrix& k, const PreparationMap& prep) {
  if (prep.dim() != k.dim)
    throw std::invalid_argument("apply_k: preparation dimension differs from memory matrix");
  ComplexMatrix out(k.dim, k.dim);
  kernels::contract_super(k.tensor.data(), prep.aform().data(), out.data(), k.dim);
  return out;
}

ComplexMatrix DynamicalMap::combined_matrix() const {
  const std::size_t d = dim;
  ComplexMatrix combined = linear;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t j = 0; j < d; ++j)
        combined(r * d + j, s * d + j) += affine(r, s);
  return combined;
}

DynamicalMap assemble_b(const MMap& m) {
  DynamicalMap b;
  b.dim = m.dim;
  b.linear = bcp_of(m);
  b.affine = apply_k(memory_of(m).k, PreparationMap::identity(m.dim)).hermitized();
  return b;
}

CpCheck cp_check(const ComplexMatrix& t, Grouping grouping) {
  if (!t.square()) throw std::invalid_argument("cp_check: tensor not square");
  const std::size_t n = t.rows();
  // n must be d^2 (map_form) or d^3 (super_super) for integer d
  std::size_t d = 0;
  for (std::size_t c = 1; c * c <= n; ++c) {
    if (grouping == Grouping::map_form && c * c == n) d = c;
    if (grouping == Grouping::super_super && c * c * c == n) d = c;
  }
  if (d == 0) throw std::invalid_argument("cp_check: size inconsistent with grouping tag");
  if (!t.is_hermitian(tol::kStructure))
    throw std::invalid_argument("cp_check: tensor not Hermitian in stated grouping");
  CpCheck out;
  out.min_eigenvalue = min_eigenvalue(t.hermitized());
  out.is_cp = out.min_eigenvalue >= -tol::kEigClamp;
  return out;
}

KrausSet kraus_of(const MMap& m) {
  const std::size_t d = m.dim;
  const std::size_t d2 = d * d;
  const std::size_t d3 = d2 * d;
  const HermitianSpectrum spec = hermitian_eig(m.tensor.hermitized());

  KrausSet set;
  set.dim = d;
  for (std::size_t i = 0; i < d3; ++i) {
    double lambda = spec.eigenvalues[i];
    if (lambda < -tol::kEigClamp)
      throw std::runtime_error("kraus_of: tensor eigenvalue below clamp, not PSD");
    // the clamp band is numerically zero and contributes nothing, so the
    // operator count tracks the tensor rank
    if (lambda <= tol::kEigClamp) continue;
    const double w = std::sqrt(lambda);
    // eigenvector component iota(r,r',r'') becomes entry (r, k(r',r''))
    ComplexMatrix op(d, d2);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t k = 0; k < d2; ++k) op(r, k) = w * spec.eigenvectors(r * d2 + k, i);
    set.ops.push_back(std::move(op));
  }
  return set;
}

ComplexMatrix apply_kraus(const KrausSet& set, const ComplexMatrix& aform) {
  const std::size_t d = set.dim;
  if (aform.rows() != d * d || aform.cols() != d * d)
    throw std::invalid_argument("apply_kraus: aform has wrong shape");
  ComplexMatrix q(d, d);
  for (const auto& op : set.ops) q += op * aform * op.adjoint();
  return q;
}

ComplexMatrix kraus_reconstruct(const KrausSet& set) {
  const std::size_t d = set.dim;
  const std::size_t d3 = d * d * d;
  ComplexMatrix t(d3, d3);
  for (const auto& op : set.ops) {
    const cplx* v = op.data();  // (r, k) layout coincides with the iota flattening
    for (std::size_t i = 0; i < d3; ++i)
      for (std::size_t j = 0; j < d3; ++j) t(i, j) += v[i] * std::conj(v[j]);
  }
  return t;
}

MMapAudit audit_mmap(const MMap& m) {
  const std::size_t d = m.dim;
  MMapAudit audit;
  audit.hermiticity = m.tensor.hermiticity_defect();
  audit.trace_error = std::abs(m.tensor.trace() - cplx(static_cast<double>(d), 0.0));

  ComplexMatrix contracted(d * d, d * d);
  kernels::trace_over_output(m.tensor.data(), contracted.data(), d);
  const ComplexMatrix expected = kron(ComplexMatrix::identity(d), initial_state_of(m).mat());
  audit.contraction_error = (contracted - expected).max_abs();

  audit.min_eigenvalue = min_eigenvalue(m.tensor.hermitized());
  return audit;
}

}  // namespace mqpt
