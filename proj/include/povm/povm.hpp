#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "povm/operator_core.hpp"
#include "povm/random.hpp"
#include "povm/tolerances.hpp"

namespace povm {

/// A validated finite-outcome POVM: N labeled effects on C^dim, each 0 <= A_n <= I and nonzero,
/// summing to the identity. The outcome sigma-algebra is the power set of the labels; A(X) for a
/// subset X is the sum of its singleton effects.
///
/// Instances are only created through validate_povm (or Povm::validate), so holding a Povm means
/// every invariant held within the tolerances it was validated against. Effects are stored as
/// their Hermitian part, which leaves already-Hermitian input bit-identical.
class Povm {
 public:
  static Povm validate(Eigen::Index dim, std::vector<std::string> outcomes, std::vector<HermitianMatrix> effects,
                       const Tolerances& tol = {});

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const std::vector<HermitianMatrix>& effects() const noexcept { return effects_; }
  const HermitianMatrix& operator[](std::size_t n) const { return effects_.at(n); }

  /// A(X) for X given as outcome indices.
  HermitianMatrix effect_of(std::span<const std::size_t> subset) const;

  /// max_n |A_n - B_n|_op; infinity when shapes differ.
  double distance(const Povm& other) const;

  bool operator==(const Povm& other) const;

 private:
  Povm(Eigen::Index dim, std::vector<std::string> outcomes, std::vector<HermitianMatrix> effects)
      : dim_(dim), outcomes_(std::move(outcomes)), effects_(std::move(effects)) {}

  Eigen::Index dim_;
  std::vector<std::string> outcomes_;
  std::vector<HermitianMatrix> effects_;
};

/// Validation entry point for raw data. Checks, in order: label count and uniqueness, shapes,
/// hermiticity, positivity, nonzero effects, A_n <= I, then normalization (the NotNormalized error
/// carries the residual |sum A_n - I|_op).
Povm validate_povm(Eigen::Index dim, std::vector<std::string> outcomes, std::vector<HermitianMatrix> effects,
                   const Tolerances& tol = {});

/// "x1", ..., "xN".
std::vector<std::string> default_labels(std::size_t n, const std::string& prefix = "x");

struct PvmCheck {
  bool is_pvm = false;
  double idempotency_defect = 0;   // max_n |A_n^2 - A_n|_op
  double orthogonality_defect = 0; // max_{k<l} |A_k A_l|_op
};

/// Sharpness test: every effect idempotent and all pairs orthogonal within tol_eq.
PvmCheck is_pvm(const Povm& a, const Tolerances& tol = {});

struct CommutativityCheck {
  bool is_commutative = true;
  double max_commutator_norm = 0;
  std::size_t worst_k = 0, worst_l = 0;
};

CommutativityCheck is_commutative(const Povm& a, const Tolerances& tol = {});

/// A POVM that passed is_pvm.
class Pvm {
 public:
  static Pvm from(Povm a, const Tolerances& tol = {});

  const Povm& povm() const noexcept { return povm_; }
  operator const Povm&() const noexcept { return povm_; }
  std::size_t size() const noexcept { return povm_.size(); }
  Eigen::Index dim() const noexcept { return povm_.dim(); }
  const HermitianMatrix& operator[](std::size_t n) const { return povm_[n]; }

 private:
  explicit Pvm(Povm a) : povm_(std::move(a)) {}
  Povm povm_;
};

/// Density operator: PSD with unit trace.
class State {
 public:
  static State validate(HermitianMatrix rho, const Tolerances& tol = {});

  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const HermitianMatrix& matrix() const noexcept { return rho_; }

 private:
  explicit State(HermitianMatrix rho) : rho_(std::move(rho)) {}
  HermitianMatrix rho_;
};

struct ClassificationReport {
  bool is_valid = true;
  bool is_pvm = false;
  bool is_commutative = false;
  std::optional<bool> is_extreme;  // unset unless extremality was computed
  double max_commutator_norm = 0;
  double max_idempotency_defect = 0;
  double max_orthogonality_defect = 0;
  std::optional<std::size_t> kernel_dimension;
};

/// PVM and commutativity classification; extremality is left unknown (see classify_extremality).
ClassificationReport classify(const Povm& a, const Tolerances& tol = {});

/// t A + (1 - t) B, for t in (0, 1), computed as A + (1 - t)(B - A) so that mixing A with itself
/// returns A exactly.
Povm convex_combine(const Povm& a, const Povm& b, double t, const Tolerances& tol = {});

/// p_n = tr(rho A_n). Entries in [-tol_psd, 0) are clamped to 0.
std::vector<double> born_probabilities(const State& rho, const Povm& a, const Tolerances& tol = {});

/// Haar-random unitary from QR of a complex Ginibre matrix with the R-diagonal phases divided out.
ComplexMatrix<double> random_unitary(Eigen::Index dim, Rng& rng);

/// Projectors onto N consecutive column groups of a Haar unitary. Each group gets one column and the
/// remaining dim - N columns go to uniformly chosen groups.
Pvm random_pvm(Eigen::Index dim, std::size_t n, std::uint64_t seed);

/// A_n = S^{-1/2} M_n M_n^dagger S^{-1/2}, S = sum_n M_n M_n^dagger, with dim x rank complex
/// Gaussian M_n. rank = 0 means full rank.
Povm random_povm(Eigen::Index dim, std::size_t n, std::uint64_t seed, Eigen::Index rank = 0);

/// G G^dagger / tr(G G^dagger) for a complex Gaussian dim x dim G.
State random_state(Eigen::Index dim, std::uint64_t seed);

}  // namespace povm
