#ifndef MQPT_TOMOGRAPHY_HPP
#define MQPT_TOMOGRAPHY_HPP

#include <cstdint>
#include <vector>

#include "mqpt/mmap.hpp"
#include "mqpt/states.hpp"

namespace mqpt {

// The operational protocol: d^2 pure input projectors P^(m) generate d^4
// one-operator preparations A^(mn) = |pi^(n)><pi^(m)| whose responses pin
// down the full super-superoperator by linear inversion.
struct PreparationBasis {
  std::size_t dim = 0;                       // dS
  std::vector<std::vector<cplx>> kets;       // |pi^(m)>, d^2 of them
  std::vector<ComplexMatrix> projectors;     // P^(m) = |pi^(m)><pi^(m)|
  std::vector<PreparationMap> preparations;  // A^(mn) at index m*d^2 + n
  ComplexMatrix gram;                        // d^4 x d^4 aform Gram (HS inner products)
  HermitianSpectrum gram_spectrum;           // cached for solves
  double gram_condition = 0.0;
  std::vector<ComplexMatrix> duals;          // D^(mn): <D^(mn), aform(A^(kl))> = delta delta

  std::size_t index(std::size_t m, std::size_t n) const { return m * dim * dim + n; }
};

// The d^2 projector family. dS = 2 is the fixed qubit set
//   (I+sx)/2, (I+sy)/2, (I+sz)/2, (I-sx)/2
// with eigenvectors |x+>, |y+>, |z+>, |x->. Higher dimensions use the
// standard informationally complete pure set: |j>, (|j>+|k>)/sqrt2,
// (|j>+i|k>)/sqrt2 for j < k. Only kets and projectors are populated.
PreparationBasis pure_state_basis(std::size_t dS);

// Full basis: transition preparations, Gram, its spectrum and the dual
// family. Throws if the Gram is ill-conditioned.
PreparationBasis preparation_basis(std::size_t dS);

struct TomographyEntry {
  std::size_t m = 0, n = 0;
  double p = 0.0;              // success probability of arm m
  DensityMatrix q;             // normalized output
  ComplexMatrix unnormalized;  // p * q, the reconstruction input
  bool degenerate = false;     // p fell below the probability floor
};

struct TomographyRecord {
  std::size_t dim = 0;      // dS
  std::size_t env_dim = 0;  // dE
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::vector<TomographyEntry> entries;  // index m*d^2+n, complete grid

  bool has_degenerate() const;
};

// Runs the (m,n) preparation grid through the joint dynamics. Entries are
// simulated independently (the grid parallelizes) with one derived RNG
// substream per entry, so the record is identical under any thread count.
// noise_sigma > 0 adds i.i.d. Gaussian perturbations to the real and
// imaginary parts of each unnormalized-output entry, re-Hermitizes, and
// rereads the probability off the perturbed trace.
TomographyRecord simulate_tomography(const UnitaryMatrix& u, const BipartiteState& state,
                                     const PreparationBasis& basis, double noise_sigma,
                                     std::uint64_t seed);

// Linear inversion through the cached dual family:
//   M = sum_mn unnormalized^(mn)[r,s] placed against conj(D^(mn)) on the
//       preparation index pairs.
// Output is Hermitized. Refuses records with degenerate entries.
MMap reconstruct_mmap(const TomographyRecord& record, const PreparationBasis& basis);

struct PrepDecomposition {
  std::vector<cplx> coefficients;  // alpha^(mn), length d^4
  double residual = 0.0;           // || sum alpha aform - aform(prep) ||_F
};

// Coefficients of an arbitrary preparation over the basis, via the Gram
// solve on HS inner products.
PrepDecomposition decompose_prep(const PreparationMap& prep, const PreparationBasis& basis);

// Output state predicted from basis responses alone:
//   Q = sum alpha^(mn) * (M contracted with A^(mn)), normalized.
// Cross-validates the direct contraction path.
DensityMatrix predict_output(const MMap& m, const PreparationMap& prep,
                             const PreparationBasis& basis);

}  // namespace mqpt

#endif
