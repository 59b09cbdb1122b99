#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "povm/error.hpp"
#include "povm/tolerances.hpp"

namespace povm {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// The carrier for every operator in the library: a dim x dim complex matrix expected to equal its
/// adjoint. Hermiticity is checked at API boundaries, not encoded in the type.
using HermitianMatrix = ComplexMatrix<double>;

template <typename Real>
struct SpectralDecomposition {
  RealVector<Real> eigenvalues;        // ascending
  ComplexMatrix<Real> eigenvectors;    // orthonormal columns

  ComplexMatrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() * eigenvectors.adjoint();
  }
};

/// Largest entrywise modulus of H - H^dagger.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  if (h.size() == 0) return 0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol, const std::string& what = "matrix") {
  if (h.rows() != h.cols() || h.rows() < 1)
    throw Error(ErrorKind::ShapeMismatch, what + " must be square with dim >= 1");
  const double defect = static_cast<double>(hermiticity_defect(h));
  if (!(defect <= tol.tol_herm))
    throw Error(ErrorKind::NonHermitianInput, what + " deviates from its adjoint by " + std::to_string(defect), defect);
}

/// (H + H^dagger) / 2. Exact on inputs that are already Hermitian.
template <typename Derived>
typename Derived::PlainObject hermitian_part(const Eigen::MatrixBase<Derived>& h) {
  return (h + h.adjoint()) / typename Derived::RealScalar(2);
}

/// Operator norm, computed as the largest singular value.
template <typename Derived>
typename Derived::RealScalar operator_norm(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.size() == 0) return Real(0);
  const typename Derived::PlainObject plain = m;
  if (plain.cwiseAbs().maxCoeff() == Real(0)) return Real(0);
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(plain);
  return svd.singularValues()(0);
}

template <typename Derived>
SpectralDecomposition<typename Derived::RealScalar> spectral_decomposition(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(hermitian_part(h).template cast<std::complex<Real>>());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonHermitianInput, "eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// True iff the smallest eigenvalue is >= -tol_psd.
template <typename Derived>
bool psd_check(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  require_hermitian(h, tol);
  const auto spec = spectral_decomposition(h);
  return static_cast<double>(spec.eigenvalues(0)) >= -tol.tol_psd;
}

/// PSD square root. Eigenvalues in [-tol_psd, 0) are clamped to zero.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> psd_sqrt(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  require_hermitian(h, tol);
  const auto spec = spectral_decomposition(h);
  if (static_cast<double>(spec.eigenvalues(0)) < -tol.tol_psd)
    throw Error(ErrorKind::NotPositive, "square root of a matrix with eigenvalue " + std::to_string(double(spec.eigenvalues(0))),
                -double(spec.eigenvalues(0)));
  const RealVector<Real> roots = spec.eigenvalues.cwiseMax(Real(0)).cwiseSqrt();
  const ComplexMatrix<Real> s = spec.eigenvectors * roots.template cast<std::complex<Real>>().asDiagonal() * spec.eigenvectors.adjoint();
  return hermitian_part(s);
}

/// Orthonormal basis (as columns) of the span of eigenvectors with eigenvalue > tol_rank * lambda_max.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> support_basis(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  require_hermitian(h, tol);
  const auto spec = spectral_decomposition(h);
  const Eigen::Index n = spec.eigenvalues.size();
  if (static_cast<double>(spec.eigenvalues(0)) < -tol.tol_psd)
    throw Error(ErrorKind::NotPositive, "support of a non-positive matrix", -double(spec.eigenvalues(0)));
  const Real lambda_max = spec.eigenvalues(n - 1);
  if (lambda_max <= Real(0)) return ComplexMatrix<Real>(n, 0);
  const Real cutoff = Real(tol.tol_rank) * lambda_max;
  Eigen::Index first = 0;
  while (first < n && spec.eigenvalues(first) <= cutoff) ++first;
  return spec.eigenvectors.rightCols(n - first);
}

template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> support_projection(const Eigen::MatrixBase<Derived>& h, const Tolerances& tol = {}) {
  const auto basis = support_basis(h, tol);
  return hermitian_part(basis * basis.adjoint());
}

/// Number of singular values above tol_rank * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= Real(0)) return 0;
  const Real cutoff = Real(tol.tol_rank) * s(0);
  return (s.array() > cutoff).count();
}

/// Orthonormal basis of the numerical nullspace of a real m x n matrix, one vector per column. The
/// rank is decided by the relative cutoff tol_rank * sigma_max; a zero matrix has full nullity.
template <typename Derived>
RealMatrix<typename Derived::Scalar> real_nullspace(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = typename Derived::Scalar;
  static_assert(!Eigen::NumTraits<Real>::IsComplex, "real_nullspace expects a real matrix");
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return RealMatrix<Real>::Identity(n, n);
  Eigen::JacobiSVD<RealMatrix<Real>> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s(0) > Real(0)) {
    const Real cutoff = Real(tol.tol_rank) * s(0);
    rank = (s.array() > cutoff).count();
  }
  return svd.matrixV().rightCols(n - rank);
}

/// Re tr(A^dagger B), the real inner product on Hermitian matrices.
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar real_inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

/// Orthonormal basis of the real vector space of dim x dim Hermitian matrices under Re tr(X^dagger Y):
/// I/sqrt(dim), then the dim-1 traceless diagonal generators, then for each i < j the symmetric
/// (E_ij + E_ji)/sqrt2 and antisymmetric i(E_ji - E_ij)/sqrt2 pair.
template <typename Real = double>
std::vector<ComplexMatrix<Real>> hermitian_basis(Eigen::Index dim) {
  using C = std::complex<Real>;
  if (dim < 1) throw Error(ErrorKind::ShapeMismatch, "hermitian_basis needs dim >= 1");
  std::vector<ComplexMatrix<Real>> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  basis.push_back(ComplexMatrix<Real>::Identity(dim, dim) / std::sqrt(Real(dim)));
  for (Eigen::Index l = 1; l < dim; ++l) {
    ComplexMatrix<Real> g = ComplexMatrix<Real>::Zero(dim, dim);
    const Real scale = Real(1) / std::sqrt(Real(l) * Real(l + 1));
    for (Eigen::Index j = 0; j < l; ++j) g(j, j) = scale;
    g(l, l) = -Real(l) * scale;
    basis.push_back(std::move(g));
  }
  const Real r = Real(1) / std::sqrt(Real(2));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      ComplexMatrix<Real> sym = ComplexMatrix<Real>::Zero(dim, dim);
      sym(i, j) = sym(j, i) = r;
      basis.push_back(std::move(sym));
      ComplexMatrix<Real> anti = ComplexMatrix<Real>::Zero(dim, dim);
      anti(i, j) = C(0, -r);
      anti(j, i) = C(0, r);
      basis.push_back(std::move(anti));
    }
  }
  return basis;
}

/// Coordinates of a Hermitian matrix in hermitian_basis(dim).
template <typename Derived>
RealVector<typename Derived::RealScalar> hermitian_coordinates(const Eigen::MatrixBase<Derived>& h,
                                                               const std::vector<ComplexMatrix<typename Derived::RealScalar>>& basis) {
  RealVector<typename Derived::RealScalar> c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c(static_cast<Eigen::Index>(i)) = real_inner(basis[i], h);
  return c;
}

}  // namespace povm
