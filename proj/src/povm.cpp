#include "povm/povm.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace povm {

namespace {

std::string effect_name(std::size_t n, const std::vector<std::string>& labels) {
  return "effect " + std::to_string(n) + (n < labels.size() ? " ('" + labels[n] + "')" : std::string());
}

}  // namespace

std::vector<std::string> default_labels(std::size_t n, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

Povm Povm::validate(Eigen::Index dim, std::vector<std::string> outcomes, std::vector<HermitianMatrix> effects,
                    const Tolerances& tol) {
  tol.check();
  if (dim < 1) throw Error(ErrorKind::ShapeMismatch, "dim must be >= 1");
  if (outcomes.size() != effects.size())
    throw Error(ErrorKind::ShapeMismatch,
                std::to_string(outcomes.size()) + " labels for " + std::to_string(effects.size()) + " effects");
  {
    std::set<std::string> seen;
    for (const auto& label : outcomes)
      if (!seen.insert(label).second) throw Error(ErrorKind::DuplicateLabel, "outcome label '" + label + "' repeated");
  }

  HermitianMatrix sum = HermitianMatrix::Zero(dim, dim);
  for (std::size_t n = 0; n < effects.size(); ++n) {
    const std::string name = effect_name(n, outcomes);
    auto& e = effects[n];
    if (e.rows() != dim || e.cols() != dim)
      throw Error(ErrorKind::ShapeMismatch, name + " is " + std::to_string(e.rows()) + "x" + std::to_string(e.cols()) +
                                                ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
    require_hermitian(e, tol, name);
    e = hermitian_part(e);

    const auto spec = spectral_decomposition(e);
    const double lo = spec.eigenvalues(0);
    const double hi = spec.eigenvalues(dim - 1);
    if (lo < -tol.tol_psd) throw Error(ErrorKind::NotPositive, name + " has eigenvalue " + std::to_string(lo), -lo);
    if (hi <= tol.tol_eq) throw Error(ErrorKind::ZeroEffect, name + " is zero", hi);
    if (hi > 1.0 + tol.tol_psd)
      throw Error(ErrorKind::EffectExceedsIdentity, name + " has eigenvalue " + std::to_string(hi), hi - 1.0);
    sum += e;
  }

  const double residual = operator_norm(sum - HermitianMatrix::Identity(dim, dim));
  if (!(residual <= tol.tol_eq))
    throw Error(ErrorKind::NotNormalized, "effects sum to I up to residual=" + std::to_string(residual), residual);

  return Povm(dim, std::move(outcomes), std::move(effects));
}

Povm validate_povm(Eigen::Index dim, std::vector<std::string> outcomes, std::vector<HermitianMatrix> effects,
                   const Tolerances& tol) {
  return Povm::validate(dim, std::move(outcomes), std::move(effects), tol);
}

HermitianMatrix Povm::effect_of(std::span<const std::size_t> subset) const {
  HermitianMatrix out = HermitianMatrix::Zero(dim_, dim_);
  for (std::size_t n : subset) out += effects_.at(n);
  return out;
}

double Povm::distance(const Povm& other) const {
  if (other.dim_ != dim_ || other.size() != size()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (std::size_t n = 0; n < size(); ++n) worst = std::max(worst, operator_norm(effects_[n] - other.effects_[n]));
  return worst;
}

bool Povm::operator==(const Povm& other) const {
  if (dim_ != other.dim_ || outcomes_ != other.outcomes_) return false;
  for (std::size_t n = 0; n < size(); ++n)
    if (effects_[n] != other.effects_[n]) return false;
  return true;
}

PvmCheck is_pvm(const Povm& a, const Tolerances& tol) {
  PvmCheck check;
  for (std::size_t n = 0; n < a.size(); ++n)
    check.idempotency_defect = std::max(check.idempotency_defect, operator_norm(a[n] * a[n] - a[n]));
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t l = k + 1; l < a.size(); ++l)
      check.orthogonality_defect = std::max(check.orthogonality_defect, operator_norm(a[k] * a[l]));
  check.is_pvm = check.idempotency_defect <= tol.tol_eq && check.orthogonality_defect <= tol.tol_eq;
  return check;
}

CommutativityCheck is_commutative(const Povm& a, const Tolerances& tol) {
  CommutativityCheck check;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t l = k + 1; l < a.size(); ++l) {
      const double c = operator_norm(a[k] * a[l] - a[l] * a[k]);
      if (c > check.max_commutator_norm) {
        check.max_commutator_norm = c;
        check.worst_k = k;
        check.worst_l = l;
      }
    }
  }
  check.is_commutative = check.max_commutator_norm <= tol.tol_eq;
  return check;
}

Pvm Pvm::from(Povm a, const Tolerances& tol) {
  const auto check = is_pvm(a, tol);
  if (!check.is_pvm)
    throw Error(ErrorKind::NotProjective,
                "idempotency defect " + std::to_string(check.idempotency_defect) + ", orthogonality defect " +
                    std::to_string(check.orthogonality_defect),
                std::max(check.idempotency_defect, check.orthogonality_defect));
  return Pvm(std::move(a));
}

State State::validate(HermitianMatrix rho, const Tolerances& tol) {
  tol.check();
  require_hermitian(rho, tol, "state");
  rho = hermitian_part(rho);
  if (!psd_check(rho, tol)) throw Error(ErrorKind::NotPositive, "state has a negative eigenvalue");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > tol.tol_eq)
    throw Error(ErrorKind::NotState, "trace " + std::to_string(trace) + " != 1", std::abs(trace - 1.0));
  return State(std::move(rho));
}

ClassificationReport classify(const Povm& a, const Tolerances& tol) {
  ClassificationReport report;
  const auto pvm = is_pvm(a, tol);
  const auto comm = is_commutative(a, tol);
  report.is_pvm = pvm.is_pvm;
  report.is_commutative = comm.is_commutative;
  report.max_commutator_norm = comm.max_commutator_norm;
  report.max_idempotency_defect = pvm.idempotency_defect;
  report.max_orthogonality_defect = pvm.orthogonality_defect;
  return report;
}

Povm convex_combine(const Povm& a, const Povm& b, double t, const Tolerances& tol) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::WeightOutOfRange, "weight " + std::to_string(t) + " not in (0,1)");
  if (a.dim() != b.dim() || a.outcomes() != b.outcomes())
    throw Error(ErrorKind::ShapeMismatch, "convex combination needs equal dimension and outcome labels");
  std::vector<HermitianMatrix> effects;
  effects.reserve(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) effects.push_back(a[n] + (1.0 - t) * (b[n] - a[n]));
  return Povm::validate(a.dim(), a.outcomes(), std::move(effects), tol);
}

std::vector<double> born_probabilities(const State& rho, const Povm& a, const Tolerances& tol) {
  if (rho.dim() != a.dim()) throw Error(ErrorKind::ShapeMismatch, "state and POVM dimensions differ");
  std::vector<double> p;
  p.reserve(a.size());
  for (const auto& e : a.effects()) {
    const double pn = real_inner(rho.matrix(), e);  // tr(rho A) for Hermitian rho
    p.push_back(pn < 0.0 && pn >= -tol.tol_psd ? 0.0 : pn);
  }
  return p;
}

ComplexMatrix<double> random_unitary(Eigen::Index dim, Rng& rng) {
  ComplexMatrix<double> z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix<double>> qr(z);
  ComplexMatrix<double> q = qr.householderQ();
  const ComplexMatrix<double>& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Pvm random_pvm(Eigen::Index dim, std::size_t n, std::uint64_t seed) {
  if (dim < 1 || n < 1 || static_cast<Eigen::Index>(n) > dim)
    throw Error(ErrorKind::BadPartition,
                "cannot split " + std::to_string(dim) + " dimensions into " + std::to_string(n) + " nonempty groups");
  Rng rng(seed);
  Rng unitary_rng = rng.split(0);
  const ComplexMatrix<double> u = random_unitary(dim, unitary_rng);

  std::vector<Eigen::Index> sizes(n, 1);
  for (Eigen::Index extra = dim - static_cast<Eigen::Index>(n); extra > 0; --extra) ++sizes[rng.below(n)];

  std::vector<HermitianMatrix> effects;
  effects.reserve(n);
  Eigen::Index col = 0;
  for (Eigen::Index size : sizes) {
    const auto block = u.middleCols(col, size);
    effects.push_back(hermitian_part(block * block.adjoint()));
    col += size;
  }
  return Pvm::from(Povm::validate(dim, default_labels(n), std::move(effects)));
}

Povm random_povm(Eigen::Index dim, std::size_t n, std::uint64_t seed, Eigen::Index rank) {
  if (dim < 1 || n < 1) throw Error(ErrorKind::ShapeMismatch, "random_povm needs dim, N >= 1");
  if (rank <= 0) rank = dim;
  Rng rng(seed);
  std::vector<HermitianMatrix> factors;
  factors.reserve(n);
  HermitianMatrix s = HermitianMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    HermitianMatrix m(dim, rank);
    for (Eigen::Index j = 0; j < rank; ++j)
      for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = rng.complex_normal();
    s += m * m.adjoint();
    factors.push_back(std::move(m));
  }

  const auto spec = spectral_decomposition(s);
  const double lo = spec.eigenvalues(0);
  const double hi = spec.eigenvalues(dim - 1);
  if (!(lo > Tolerances{}.tol_rank * hi))
    throw Error(ErrorKind::SingularSum, "sum of Gaussian effects is singular (min eigenvalue " + std::to_string(lo) + ")", lo);
  const Eigen::VectorXd inv_sqrt = spec.eigenvalues.cwiseSqrt().cwiseInverse();
  const HermitianMatrix s_inv_sqrt =
      spec.eigenvectors * inv_sqrt.cast<std::complex<double>>().asDiagonal() * spec.eigenvectors.adjoint();

  std::vector<HermitianMatrix> effects;
  effects.reserve(n);
  for (const auto& m : factors) {
    const HermitianMatrix w = s_inv_sqrt * m;
    effects.push_back(hermitian_part(w * w.adjoint()));
  }
  return Povm::validate(dim, default_labels(n), std::move(effects));
}

State random_state(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  HermitianMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  HermitianMatrix rho = hermitian_part(g * g.adjoint());
  rho /= rho.trace().real();
  return State::validate(std::move(rho));
}

}  // namespace povm
