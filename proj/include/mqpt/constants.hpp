#ifndef MQPT_CONSTANTS_HPP
#define MQPT_CONSTANTS_HPP

// Shared numerical tolerances. Every module pulls its thresholds from here;
// do not introduce ad-hoc epsilons elsewhere.

namespace mqpt::tol {

// Eigenvalues in [-kEigClamp, 0) are treated as zero; anything below is a
// genuine negativity and gets rejected. Single clamp constant for the whole
// codebase.
inline constexpr double kEigClamp = 1e-10;

// Hermiticity / unitarity / trace checks on physical objects.
inline constexpr double kStructure = 1e-10;

// Identities that hold by construction (splits, recompositions).
inline constexpr double kConstruction = 1e-12;

// Round trips that pass through one eigendecomposition (Kraus rebuilds,
// tomographic reconstruction).
inline constexpr double kRoundTrip = 1e-9;

// Cyclic Jacobi sweep control: stop when the off-diagonal Frobenius norm
// drops below kJacobiOff (relative to max(1, ||A||_F)).
inline constexpr double kJacobiOff = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

// Preparations whose success probability falls below this are considered
// incompatible with the state rather than numerically noisy.
inline constexpr double kProbabilityFloor = 1e-14;

// Gram matrices with a worse condition number than this are refused for
// linear inversion.
inline constexpr double kGramCondLimit = 1e8;

}  // namespace mqpt::tol

#endif
