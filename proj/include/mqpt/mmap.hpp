#ifndef MQPT_MMAP_HPP
#define MQPT_MMAP_HPP

#include <vector>

#include "mqpt/states.hpp"

namespace mqpt {

// The d^3 x d^3 super-superoperator. It eats a preparation (through its
// aform) and returns the evolved reduced state:
//
//   M[iota(r,r',r''), iota(s,s',s'')] =
//       sum_{a,b,e} U[(r e),(r' a)] rho_SE[(r'' a),(s'' b)] conj(U[(s e),(s' b)])
//
//   Q[r,s] = sum M[iota(r,r',r''), iota(s,s',s'')] * aform[k(r',r''), k(s',s'')]
//
// with iota(r,r',r'') = r*dS^2 + r'*dS + r'' on rows and columns alike
// (kernels.hpp is the single source of truth for index order). In this
// flattening M is Hermitian and PSD, its total trace is dS, and tracing the
// output pair (r,s) leaves I (x) rho_S.
struct MMap {
  std::size_t dim = 0;   // dS
  ComplexMatrix tensor;  // d^3 x d^3
};

// K = M - L: the part of M generated by the correlation matrix alone.
// Hermitian with both delta-contractions zero.
struct MemoryMatrix {
  std::size_t dim = 0;
  ComplexMatrix tensor;  // d^3 x d^3, same grouping as MMap
};

// B = B_cp + B_aff: the (possibly not completely positive) dynamical map.
// linear is the d^2 x d^2 matrix form of the CP part; affine is the constant
// dS-square correction tr_E[U chi U^dagger].
struct DynamicalMap {
  std::size_t dim = 0;
  ComplexMatrix linear;
  ComplexMatrix affine;

  // Matrix form of rho -> linear(rho) + affine * tr(rho); a negative
  // eigenvalue here is the NCP witness.
  ComplexMatrix combined_matrix() const;
};

// Operator-sum form of an MMap: rectangular operators mapping the k(r',r'')
// pair index to the output index r, with sum_mu M^mu aform M^mu^dagger
// reproducing every contraction.
struct KrausSet {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> ops;  // each dS x dS^2
};

MMap build_mmap(const UnitaryMatrix& u, const BipartiteState& state);

// Contraction against a preparation, normalized by its trace. The
// pre-normalization trace equals the preparation's success probability.
DensityMatrix contract_mmap(const MMap& m, const PreparationMap& prep);
ComplexMatrix contract_mmap_unnormalized(const MMap& m, const PreparationMap& prep);

// rho_S recovered from M alone: (1/dS) sum_{r,r'} M[iota(r,r',r''), iota(r,r',s'')]
DensityMatrix initial_state_of(const MMap& m);

// The CP dynamical map of the uncorrelated problem, read off M by tracing
// the initial-state pair: B_cp[(r dS + r'), (s dS + s')] = sum_x M[iota(r,r',x), iota(s,s',x)]
ComplexMatrix bcp_of(const MMap& m);

struct MemorySplit {
  ComplexMatrix l;  // d^3 x d^3, L[iota...] = B_cp[(rr'),(ss')] * rho_S[r'', s'']
  MemoryMatrix k;   // M - L
};

MemorySplit memory_of(const MMap& m);

// chi_S(t) = K(prep): the coherence the initial correlations push into the
// system under this preparation. Not a state: Hermitian, traceless for
// trace-preserving preparations, deliberately not normalized.
ComplexMatrix apply_k(const MemoryMatrix& k, const PreparationMap& prep);

DynamicalMap assemble_b(const MMap& m);

enum class Grouping {
  map_form,     // d^2 x d^2, (r r'; s s') pairs
  super_super,  // d^3 x d^3, iota triples
};

struct CpCheck {
  double min_eigenvalue = 0.0;
  bool is_cp = false;
};

// min eigenvalue of the tensor in its PSD grouping; is_cp iff it clears
// -tol::kEigClamp. Throws on non-Hermitian input or a size inconsistent
// with the grouping tag.
CpCheck cp_check(const ComplexMatrix& t, Grouping grouping);

// Spectral Kraus extraction; reconstruction reproduces the tensor to
// tol::kRoundTrip. Throws if the tensor has an eigenvalue below the clamp.
KrausSet kraus_of(const MMap& m);

// sum_mu M^mu aform M^mu^dagger
ComplexMatrix apply_kraus(const KrausSet& set, const ComplexMatrix& aform);

ComplexMatrix kraus_reconstruct(const KrausSet& set);

// Invariant audit used by validation paths and the report: returns the worst
// violation per property.
struct MMapAudit {
  double hermiticity = 0.0;        // max |t - t^dagger| entry
  double trace_error = 0.0;        // |tr M - dS|
  double contraction_error = 0.0;  // || delta_rs M - I (x) rho_S ||_max
  double min_eigenvalue = 0.0;
};

MMapAudit audit_mmap(const MMap& m);

}  // namespace mqpt

#endif
