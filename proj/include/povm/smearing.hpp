#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "povm/povm.hpp"

namespace povm {

/// Joint-eigenvalue clustering threshold used when splitting blocks during simultaneous
/// diagonalization. Deliberately looser than tol_eq.
inline constexpr double kClusterTolerance = 1e-7;

/// Row-stochastic J x N matrix: row j is a probability distribution over the N POVM outcomes,
/// conditioned on PVM outcome j. Columns carry the POVM outcome labels.
class MarkovKernel {
 public:
  /// Entries in [-tol_psd, 0) are clamped to 0; rows must sum to 1 within tol_eq.
  static MarkovKernel validate(Eigen::MatrixXd entries, std::vector<std::string> outcomes = {}, const Tolerances& tol = {});

  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double operator()(Eigen::Index j, Eigen::Index n) const { return entries_(j, n); }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }

  /// nu(j, X) for a set of outcome indices.
  double weight(Eigen::Index j, std::span<const std::size_t> subset) const;

 private:
  MarkovKernel(Eigen::MatrixXd entries, std::vector<std::string> outcomes)
      : entries_(std::move(entries)), outcomes_(std::move(outcomes)) {}

  Eigen::MatrixXd entries_;
  std::vector<std::string> outcomes_;
};

/// A_n = sum_j kernel(j, n) E_j.
struct SmearingForm {
  Pvm pvm;
  MarkovKernel kernel;
  double reconstruction_residual = 0;  // max_n |A_n - sum_j kernel(j,n) E_j|_op
};

/// Joint spectral decomposition of a commutative POVM by sequential block refinement: split the
/// space by the eigenvalues of A_1, refine every block by the eigenvalues of the compression of
/// A_2, and so on. Eigenvalues closer than kClusterTolerance stay in one block, so kernel rows
/// come out pairwise distinct. Blocks are ordered by descending joint eigenvalues.
SmearingForm simultaneous_diagonalize(const Povm& a, const Tolerances& tol = {});

struct DeterminismCheck {
  bool deterministic = false;
  double max_distance = 0;  // max over entries of the distance to {0, 1}
};

DeterminismCheck kernel_is_deterministic(const MarkovKernel& kernel, const Tolerances& tol = {});

/// A_n = E(Y_n) with Y_n = { j : kernel(j, n) = 1 }.
Pvm extract_pvm(const SmearingForm& form, const Tolerances& tol = {});

/// Runs the smearing forward: A_n = sum_j kernel(j, n) E_j.
Povm smear(const Pvm& e, const MarkovKernel& kernel, const Tolerances& tol = {});

/// Smears a rank-one random PVM (J = dim) with a random kernel. Stochastic kernels have flat
/// Dirichlet rows, resampled until some entry lies in [0.05, 0.95]; deterministic kernels are
/// random 0/1 surjections onto the N outcomes (N <= dim).
Povm random_commutative_povm(Eigen::Index dim, std::size_t n, std::uint64_t seed, bool deterministic);

/// Outcome of checking extreme => deterministic kernel => PVM on one commutative POVM.
struct ChainCheck {
  bool extreme = false;
  bool deterministic = false;
  bool pvm = false;
  double reconstruction_residual = 0;

  bool holds() const noexcept { return (!extreme || deterministic) && (!deterministic || pvm); }
};

ChainCheck second_proof_chain(const Povm& a, const Tolerances& tol = {});

}  // namespace povm
