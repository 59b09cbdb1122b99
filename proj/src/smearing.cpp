#include "povm/smearing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povm/extremality.hpp"

namespace povm {

MarkovKernel MarkovKernel::validate(Eigen::MatrixXd entries, std::vector<std::string> outcomes, const Tolerances& tol) {
  if (entries.rows() < 1 || entries.cols() < 1) throw Error(ErrorKind::InvalidKernel, "kernel must be at least 1x1");
  if (outcomes.empty()) outcomes = default_labels(static_cast<std::size_t>(entries.cols()));
  if (outcomes.size() != static_cast<std::size_t>(entries.cols()))
    throw Error(ErrorKind::ShapeMismatch, "kernel has " + std::to_string(entries.cols()) + " columns but " +
                                              std::to_string(outcomes.size()) + " outcome labels");
  if (!entries.allFinite()) throw Error(ErrorKind::InvalidKernel, "kernel has non-finite entries");
  const double lowest = entries.minCoeff();
  if (lowest < -tol.tol_psd) throw Error(ErrorKind::InvalidKernel, "negative kernel entry " + std::to_string(lowest), -lowest);
  entries = entries.cwiseMax(0.0);
  for (Eigen::Index j = 0; j < entries.rows(); ++j) {
    const double mass = entries.row(j).sum();
    if (std::abs(mass - 1.0) > tol.tol_eq)
      throw Error(ErrorKind::InvalidKernel, "row " + std::to_string(j) + " sums to " + std::to_string(mass),
                  std::abs(mass - 1.0));
  }
  return MarkovKernel(std::move(entries), std::move(outcomes));
}

double MarkovKernel::weight(Eigen::Index j, std::span<const std::size_t> subset) const {
  double w = 0;
  for (std::size_t n : subset) w += entries_(j, static_cast<Eigen::Index>(n));
  return w;
}

SmearingForm simultaneous_diagonalize(const Povm& a, const Tolerances& tol) {
  const auto comm = is_commutative(a, tol);
  if (!comm.is_commutative)
    throw Error(ErrorKind::NotCommutative,
                "effects " + a.outcomes()[comm.worst_k] + " and " + a.outcomes()[comm.worst_l] +
                    " have commutator norm " + std::to_string(comm.max_commutator_norm),
                comm.max_commutator_norm);

  const Eigen::Index dim = a.dim();
  std::vector<ComplexMatrix<double>> blocks{ComplexMatrix<double>::Identity(dim, dim)};
  for (const auto& effect : a.effects()) {
    std::vector<ComplexMatrix<double>> refined;
    for (const auto& v : blocks) {
      const HermitianMatrix compression = hermitian_part(v.adjoint() * effect * v);
      const auto spec = spectral_decomposition(compression);
      const Eigen::Index m = spec.eigenvalues.size();
      // Walk eigenvalues from the top; a gap above kClusterTolerance starts a new block.
      Eigen::Index hi = m;
      while (hi > 0) {
        Eigen::Index lo = hi - 1;
        while (lo > 0 && spec.eigenvalues(lo) - spec.eigenvalues(lo - 1) <= kClusterTolerance) --lo;
        refined.push_back(v * spec.eigenvectors.middleCols(lo, hi - lo));
        hi = lo;
      }
    }
    blocks = std::move(refined);
  }

  const auto j_count = static_cast<Eigen::Index>(blocks.size());
  Eigen::MatrixXd nu(j_count, static_cast<Eigen::Index>(a.size()));
  std::vector<HermitianMatrix> projectors;
  projectors.reserve(blocks.size());
  for (Eigen::Index j = 0; j < j_count; ++j) {
    const auto& v = blocks[static_cast<std::size_t>(j)];
    projectors.push_back(hermitian_part(v * v.adjoint()));
    for (std::size_t n = 0; n < a.size(); ++n)
      nu(j, static_cast<Eigen::Index>(n)) = (v.adjoint() * a[n] * v).trace().real() / static_cast<double>(v.cols());
  }
  // Rows sum to 1 up to rounding; renormalize so the stored kernel is stochastic to working precision.
  for (Eigen::Index j = 0; j < j_count; ++j) nu.row(j) /= nu.row(j).sum();

  double residual = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    HermitianMatrix rebuilt = HermitianMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < j_count; ++j) rebuilt += nu(j, static_cast<Eigen::Index>(n)) * projectors[static_cast<std::size_t>(j)];
    residual = std::max(residual, operator_norm(HermitianMatrix(a[n] - rebuilt)));
  }

  Pvm pvm = Pvm::from(Povm::validate(dim, default_labels(blocks.size(), "e"), std::move(projectors), tol), tol);
  MarkovKernel kernel = MarkovKernel::validate(std::move(nu), a.outcomes(), tol);
  return SmearingForm{std::move(pvm), std::move(kernel), residual};
}

DeterminismCheck kernel_is_deterministic(const MarkovKernel& kernel, const Tolerances& tol) {
  const Eigen::ArrayXXd v = kernel.matrix().array();
  const double distance = v.abs().min((1.0 - v).abs()).maxCoeff();
  return {distance <= tol.tol_eq, distance};
}

Pvm extract_pvm(const SmearingForm& form, const Tolerances& tol) {
  const auto check = kernel_is_deterministic(form.kernel, tol);
  if (!check.deterministic)
    throw Error(ErrorKind::NotDeterministic, "kernel entry at distance " + std::to_string(check.max_distance) + " from {0,1}",
                check.max_distance);
  const Eigen::Index dim = form.pvm.dim();
  std::vector<HermitianMatrix> effects;
  for (Eigen::Index n = 0; n < form.kernel.cols(); ++n) {
    HermitianMatrix e = HermitianMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < form.kernel.rows(); ++j)
      if (form.kernel(j, n) > 0.5) e += form.pvm[static_cast<std::size_t>(j)];
    effects.push_back(std::move(e));
  }
  return Pvm::from(Povm::validate(dim, form.kernel.outcomes(), std::move(effects), tol), tol);
}

Povm smear(const Pvm& e, const MarkovKernel& kernel, const Tolerances& tol) {
  if (kernel.rows() != static_cast<Eigen::Index>(e.size()))
    throw Error(ErrorKind::ShapeMismatch,
                "kernel has " + std::to_string(kernel.rows()) + " rows for a PVM with " + std::to_string(e.size()) + " outcomes");
  const Eigen::Index dim = e.dim();
  std::vector<HermitianMatrix> effects;
  effects.reserve(static_cast<std::size_t>(kernel.cols()));
  for (Eigen::Index n = 0; n < kernel.cols(); ++n) {
    HermitianMatrix a = HermitianMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < kernel.rows(); ++j) a += kernel(j, n) * e[static_cast<std::size_t>(j)];
    effects.push_back(std::move(a));
  }
  return Povm::validate(dim, kernel.outcomes(), std::move(effects), tol);
}

Povm random_commutative_povm(Eigen::Index dim, std::size_t n, std::uint64_t seed, bool deterministic) {
  if (dim < 1 || n < 1) throw Error(ErrorKind::ShapeMismatch, "random_commutative_povm needs dim, N >= 1");
  const auto outcomes = static_cast<Eigen::Index>(n);
  if (deterministic && outcomes > dim)
    throw Error(ErrorKind::BadPartition, "a deterministic kernel needs N <= dim");

  const Pvm e = random_pvm(dim, static_cast<std::size_t>(dim), split_seed(seed, 0));
  Rng rng(split_seed(seed, 1));
  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(dim, outcomes);

  if (deterministic) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(dim));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    std::shuffle(rows.begin(), rows.end(), rng.engine());
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::Index column = i < outcomes ? i : static_cast<Eigen::Index>(rng.below(n));
      nu(rows[static_cast<std::size_t>(i)], column) = 1.0;
    }
    return smear(e, MarkovKernel::validate(std::move(nu)));
  }

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index c = 0; c < outcomes; ++c) nu(j, c) = -std::log(1.0 - rng.uniform());
      nu.row(j) /= nu.row(j).sum();
    }
    if (((nu.array() >= 0.05) && (nu.array() <= 0.95)).any()) return smear(e, MarkovKernel::validate(nu));
  }
  throw Error(ErrorKind::RetryExhausted,
              "no stochastic kernel with an entry in [0.05, 0.95] after " + std::to_string(kMaxAttempts) + " draws");
}

ChainCheck second_proof_chain(const Povm& a, const Tolerances& tol) {
  ChainCheck chain;
  const auto form = simultaneous_diagonalize(a, tol);
  chain.reconstruction_residual = form.reconstruction_residual;
  chain.extreme = is_extreme(a, tol).extreme;
  chain.deterministic = kernel_is_deterministic(form.kernel, tol).deterministic;
  chain.pvm = is_pvm(a, tol).is_pvm;
  return chain;
}

}  // namespace povm
