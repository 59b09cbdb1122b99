#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "povm/povm.hpp"

namespace povm {

/// A sequence (D_1, ..., D_N) of Hermitian operators, one per outcome. Against a POVM A it is
/// admissible when |D_n|_op <= 1, supp D_n is inside supp A_n, and sum_n sqrt(A_n) D_n sqrt(A_n) = 0.
struct Perturbation {
  std::vector<HermitianMatrix> blocks;

  double max_norm() const;
  Perturbation scaled(double factor) const;
};

/// Two POVMs whose midpoint is the certified POVM.
struct DecompositionCertificate {
  Povm plus;
  Povm minus;
  double weight = 0.5;
  double separation = 0;  // max_n |A+_n - A_n|_op
  double residual = 0;    // max_n |(A+_n + A-_n)/2 - A_n|_op
};

struct ExtremalityVerdict {
  bool extreme = true;
  std::size_t kernel_dimension = 0;
  std::optional<DecompositionCertificate> certificate;
};

/// The real-linear map (D_1, ..., D_N) -> sum_n sqrt(A_n) D_n sqrt(A_n), with each D_n ranging over
/// Hermitian operators supported on supp A_n.
///
/// Domain coordinates: for outcome n with support isometry V_n (dim x r_n), the r_n^2 coordinates of
/// X_n in hermitian_basis(r_n), D_n = V_n X_n V_n^dagger. Blocks are concatenated in outcome order.
/// Codomain coordinates: hermitian_basis(dim), so the matrix is dim^2 x sum_n r_n^2.
class PerturbationMap {
 public:
  PerturbationMap(const Povm& a, const Tolerances& tol = {});

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::vector<HermitianMatrix>& sqrt_effects() const noexcept { return sqrt_effects_; }
  const std::vector<ComplexMatrix<double>>& support_bases() const noexcept { return supports_; }
  const std::vector<Eigen::Index>& support_ranks() const noexcept { return ranks_; }

  /// Domain coordinates -> Perturbation blocks.
  Perturbation assemble(const Eigen::Ref<const Eigen::VectorXd>& coords) const;

  /// sum_n sqrt(A_n) D_n sqrt(A_n).
  HermitianMatrix apply(const Perturbation& d) const;

 private:
  std::vector<HermitianMatrix> sqrt_effects_;
  std::vector<ComplexMatrix<double>> supports_;
  std::vector<Eigen::Index> ranks_;
  std::vector<Eigen::Index> offsets_;
  Eigen::MatrixXd matrix_;
};

Eigen::MatrixXd perturbation_map(const Povm& a, const Tolerances& tol = {});

/// Orthonormal kernel basis of the perturbation map, each element rescaled so max_n |D_n|_op = 1.
/// Empty iff the POVM is extreme.
std::vector<Perturbation> perturbation_kernel(const Povm& a, const Tolerances& tol = {});

/// Extreme iff the perturbation kernel is trivial. A non-extreme verdict carries the certificate
/// built from the first kernel element.
ExtremalityVerdict is_extreme(const Povm& a, const Tolerances& tol = {});

/// A+-_n = A_n +- sqrt(A_n) D_n sqrt(A_n).
///
/// Throws InvalidPerturbation when D violates the norm, support, or zero-sum conditions and
/// TrivialPerturbation when every compression vanishes. When a half would contain a zero effect
/// the perturbation is halved and retried; ZeroEffectProduced is thrown only if halving drives the
/// separation below tol_eq.
DecompositionCertificate decompose_along(const Povm& a, const Perturbation& d, const Tolerances& tol = {});

/// D_k = sqrt(A_k) A_l^2 sqrt(A_k), D_l = -sqrt(A_l) A_k^2 sqrt(A_l), other blocks zero.
/// For commuting A_k, A_l this is in the perturbation kernel and sqrt(A_k) D_k sqrt(A_k) = (A_k A_l)^2.
/// Throws NotCommutative if the POVM is not commutative and OrthogonalPair if A_k A_l = 0.
Perturbation proof1_witness(const Povm& a, std::size_t k, std::size_t l, const Tolerances& tol = {});

struct TheoremReport {
  std::string branch;  // "pvm" or "non-pvm"
  bool extreme = false;
  std::size_t kernel_dimension = 0;
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::optional<DecompositionCertificate> certificate;         // from the commutativity witness
  std::optional<DecompositionCertificate> kernel_certificate;  // from is_extreme
  std::map<std::string, double> residuals;
};

/// For a commutative POVM, checks extreme <=> PVM. PVMs must have a trivial perturbation kernel;
/// non-PVMs must be non-extreme, and the lexicographically first pair (k, l) with
/// |A_k A_l|_op > tol_eq yields a witness and a certificate. Throws NotCommutative on
/// non-commutative input and TheoremViolation when any check fails.
TheoremReport theorem_check(const Povm& a, const Tolerances& tol = {});

/// classify() plus the extremality verdict and kernel dimension.
ClassificationReport classify_extremality(const Povm& a, const Tolerances& tol = {});

}  // namespace povm
