#include "povm/extremality.hpp"

#include <algorithm>

namespace povm {

double Perturbation::max_norm() const {
  double worst = 0;
  for (const auto& b : blocks) worst = std::max(worst, operator_norm(b));
  return worst;
}

Perturbation Perturbation::scaled(double factor) const {
  Perturbation out;
  out.blocks.reserve(blocks.size());
  for (const auto& b : blocks) out.blocks.push_back(factor * b);
  return out;
}

PerturbationMap::PerturbationMap(const Povm& a, const Tolerances& tol) {
  const Eigen::Index dim = a.dim();
  Eigen::Index columns = 0;
  for (const auto& e : a.effects()) {
    sqrt_effects_.push_back(psd_sqrt(e, tol));
    supports_.push_back(support_basis(e, tol));
    ranks_.push_back(supports_.back().cols());
    offsets_.push_back(columns);
    columns += ranks_.back() * ranks_.back();
  }

  const auto target = hermitian_basis(dim);
  matrix_.resize(dim * dim, columns);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (ranks_[n] == 0) continue;
    const ComplexMatrix<double> w = sqrt_effects_[n] * supports_[n];
    const auto local = hermitian_basis(ranks_[n]);
    for (std::size_t i = 0; i < local.size(); ++i) {
      const HermitianMatrix image = w * local[i] * w.adjoint();
      matrix_.col(offsets_[n] + static_cast<Eigen::Index>(i)) = hermitian_coordinates(image, target);
    }
  }
}

Perturbation PerturbationMap::assemble(const Eigen::Ref<const Eigen::VectorXd>& coords) const {
  Perturbation d;
  d.blocks.reserve(supports_.size());
  for (std::size_t n = 0; n < supports_.size(); ++n) {
    const Eigen::Index dim = supports_[n].rows();
    const Eigen::Index r = ranks_[n];
    HermitianMatrix x = HermitianMatrix::Zero(r, r);
    if (r > 0) {
      const auto local = hermitian_basis(r);
      for (std::size_t i = 0; i < local.size(); ++i) x += coords(offsets_[n] + static_cast<Eigen::Index>(i)) * local[i];
    }
    d.blocks.push_back(r > 0 ? HermitianMatrix(hermitian_part(supports_[n] * x * supports_[n].adjoint()))
                             : HermitianMatrix::Zero(dim, dim));
  }
  return d;
}

HermitianMatrix PerturbationMap::apply(const Perturbation& d) const {
  const Eigen::Index dim = sqrt_effects_.empty() ? 0 : sqrt_effects_.front().rows();
  HermitianMatrix sum = HermitianMatrix::Zero(dim, dim);
  for (std::size_t n = 0; n < sqrt_effects_.size(); ++n) sum += sqrt_effects_[n] * d.blocks.at(n) * sqrt_effects_[n];
  return sum;
}

Eigen::MatrixXd perturbation_map(const Povm& a, const Tolerances& tol) { return PerturbationMap(a, tol).matrix(); }

namespace {

std::vector<Perturbation> kernel_of(const PerturbationMap& map, const Tolerances& tol) {
  const Eigen::MatrixXd null = real_nullspace(map.matrix(), tol);
  std::vector<Perturbation> kernel;
  kernel.reserve(static_cast<std::size_t>(null.cols()));
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    Perturbation d = map.assemble(null.col(c));
    const double norm = d.max_norm();
    kernel.push_back(norm > 0 ? d.scaled(1.0 / norm) : d);
  }
  return kernel;
}

}  // namespace

std::vector<Perturbation> perturbation_kernel(const Povm& a, const Tolerances& tol) {
  return kernel_of(PerturbationMap(a, tol), tol);
}

ExtremalityVerdict is_extreme(const Povm& a, const Tolerances& tol) {
  const auto kernel = perturbation_kernel(a, tol);
  ExtremalityVerdict verdict;
  verdict.kernel_dimension = kernel.size();
  verdict.extreme = kernel.empty();
  if (!verdict.extreme) verdict.certificate = decompose_along(a, kernel.front(), tol);
  return verdict;
}

DecompositionCertificate decompose_along(const Povm& a, const Perturbation& d, const Tolerances& tol) {
  const Eigen::Index dim = a.dim();
  if (d.blocks.size() != a.size())
    throw Error(ErrorKind::InvalidPerturbation,
                std::to_string(d.blocks.size()) + " blocks for " + std::to_string(a.size()) + " outcomes");

  std::vector<HermitianMatrix> compressions;
  compressions.reserve(a.size());
  HermitianMatrix sum = HermitianMatrix::Zero(dim, dim);
  double largest = 0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const auto& block = d.blocks[n];
    if (block.rows() != dim || block.cols() != dim)
      throw Error(ErrorKind::InvalidPerturbation, "block " + std::to_string(n) + " has the wrong shape");
    if (hermiticity_defect(block) > tol.tol_herm)
      throw Error(ErrorKind::InvalidPerturbation, "block " + std::to_string(n) + " is not Hermitian");
    const double norm = operator_norm(block);
    if (norm > 1.0 + tol.tol_eq)
      throw Error(ErrorKind::InvalidPerturbation, "block " + std::to_string(n) + " has norm " + std::to_string(norm), norm);
    const HermitianMatrix p = support_projection(a[n], tol);
    const double leak = operator_norm(p * block * p - block);
    if (leak > tol.tol_eq)
      throw Error(ErrorKind::InvalidPerturbation,
                  "block " + std::to_string(n) + " leaves the support of its effect by " + std::to_string(leak), leak);
    const HermitianMatrix root = psd_sqrt(a[n], tol);
    compressions.push_back(hermitian_part(root * block * root));
    sum += compressions.back();
    largest = std::max(largest, operator_norm(compressions.back()));
  }
  const double zero_sum = operator_norm(sum);
  if (zero_sum > tol.tol_eq)
    throw Error(ErrorKind::InvalidPerturbation, "compressions sum to " + std::to_string(zero_sum) + ", not 0", zero_sum);
  if (largest <= tol.tol_eq) throw Error(ErrorKind::TrivialPerturbation, "every compression vanishes", largest);

  for (double scale = 1.0; scale * largest > tol.tol_eq; scale /= 2) {
    std::vector<HermitianMatrix> plus, minus;
    plus.reserve(a.size());
    minus.reserve(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
      plus.push_back(a[n] + scale * compressions[n]);
      minus.push_back(a[n] - scale * compressions[n]);
    }
    try {
      Povm p = Povm::validate(dim, a.outcomes(), std::move(plus), tol);
      Povm m = Povm::validate(dim, a.outcomes(), std::move(minus), tol);
      double residual = 0;
      for (std::size_t n = 0; n < a.size(); ++n)
        residual = std::max(residual, operator_norm(HermitianMatrix(0.5 * (p[n] + m[n]) - a[n])));
      const double separation = p.distance(a);
      return DecompositionCertificate{std::move(p), std::move(m), 0.5, separation, residual};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroEffect) throw;
    }
  }
  throw Error(ErrorKind::ZeroEffectProduced, "halving the perturbation did not clear the zero effects");
}

Perturbation proof1_witness(const Povm& a, std::size_t k, std::size_t l, const Tolerances& tol) {
  if (k == l || k >= a.size() || l >= a.size())
    throw Error(ErrorKind::ShapeMismatch, "witness needs two distinct outcome indices below " + std::to_string(a.size()));
  const auto comm = is_commutative(a, tol);
  if (!comm.is_commutative)
    throw Error(ErrorKind::NotCommutative,
                "effects " + std::to_string(comm.worst_k) + " and " + std::to_string(comm.worst_l) +
                    " have commutator norm " + std::to_string(comm.max_commutator_norm),
                comm.max_commutator_norm);
  const double overlap = operator_norm(a[k] * a[l]);
  if (overlap <= tol.tol_eq)
    throw Error(ErrorKind::OrthogonalPair, "A_k A_l = 0 for k=" + std::to_string(k) + ", l=" + std::to_string(l), overlap);

  const HermitianMatrix root_k = psd_sqrt(a[k], tol);
  const HermitianMatrix root_l = psd_sqrt(a[l], tol);
  Perturbation d;
  d.blocks.assign(a.size(), HermitianMatrix::Zero(a.dim(), a.dim()));
  d.blocks[k] = hermitian_part(root_k * a[l] * a[l] * root_k);
  d.blocks[l] = hermitian_part(-(root_l * a[k] * a[k] * root_l));
  return d;
}

TheoremReport theorem_check(const Povm& a, const Tolerances& tol) {
  const auto comm = is_commutative(a, tol);
  if (!comm.is_commutative)
    throw Error(ErrorKind::NotCommutative, "theorem applies to commutative POVMs only", comm.max_commutator_norm);

  TheoremReport report;
  const auto pvm = is_pvm(a, tol);
  auto verdict = is_extreme(a, tol);
  report.extreme = verdict.extreme;
  report.kernel_dimension = verdict.kernel_dimension;
  report.kernel_certificate = std::move(verdict.certificate);
  report.residuals["commutator"] = comm.max_commutator_norm;
  report.residuals["idempotency"] = pvm.idempotency_defect;
  report.residuals["orthogonality"] = pvm.orthogonality_defect;

  if (pvm.is_pvm) {
    report.branch = "pvm";
    if (!report.extreme)
      throw Error(ErrorKind::TheoremViolation,
                  "PVM with perturbation kernel of dimension " + std::to_string(report.kernel_dimension));
    return report;
  }

  report.branch = "non-pvm";
  if (report.extreme) throw Error(ErrorKind::TheoremViolation, "commutative non-PVM reported extreme");
  report.residuals["kernel_certificate_midpoint"] = report.kernel_certificate->residual;

  for (std::size_t k = 0; k < a.size() && !report.pair; ++k)
    for (std::size_t l = k + 1; l < a.size() && !report.pair; ++l)
      if (operator_norm(a[k] * a[l]) > tol.tol_eq) report.pair = {k, l};
  if (!report.pair) throw Error(ErrorKind::TheoremViolation, "non-PVM whose effects are pairwise orthogonal");

  const auto [k, l] = *report.pair;
  const Perturbation witness = proof1_witness(a, k, l, tol);
  const PerturbationMap map(a, tol);
  const HermitianMatrix overlap = a[k] * a[l];
  report.residuals["witness_zero_sum"] = operator_norm(map.apply(witness));
  report.residuals["witness_identity"] = operator_norm(
      HermitianMatrix(map.sqrt_effects()[k] * witness.blocks[k] * map.sqrt_effects()[k] - overlap * overlap));

  // Rescaled to unit norm; still in the kernel.
  const double norm = witness.max_norm();
  try {
    report.certificate = decompose_along(a, witness.scaled(1.0 / norm), tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::TheoremViolation, std::string("witness decomposition failed: ") + e.what());
  }
  report.residuals["witness_midpoint"] = report.certificate->residual;
  report.residuals["witness_separation"] = report.certificate->separation;
  return report;
}

ClassificationReport classify_extremality(const Povm& a, const Tolerances& tol) {
  ClassificationReport report = classify(a, tol);
  const auto verdict = is_extreme(a, tol);
  report.is_extreme = verdict.extreme;
  report.kernel_dimension = verdict.kernel_dimension;
  return report;
}

}  // namespace povm
