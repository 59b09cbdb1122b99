#include <doctest.h>

#include "oracles.hpp"
#include "povm/operator_core.hpp"
#include "povm/random.hpp"

using namespace povm;

namespace {

HermitianMatrix diag(std::initializer_list<double> values) {
  HermitianMatrix m = HermitianMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

HermitianMatrix random_psd(Eigen::Index dim, Rng& rng, Eigen::Index rank) {
  HermitianMatrix g(dim, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return hermitian_part(g * g.adjoint());
}

HermitianMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  HermitianMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return hermitian_part(g);
}

}  // namespace

TEST_SUITE("operator_core") {

TEST_CASE("psd_check examples") {
  CHECK(psd_check(diag({0.5, 0.5})));
  Tolerances tight;
  tight.tol_psd = 1e-9;
  CHECK_FALSE(psd_check(diag({1, -0.001}), tight));
  CHECK(psd_check(HermitianMatrix::Zero(3, 3)));
}

TEST_CASE("psd_check rejects non-Hermitian input") {
  HermitianMatrix m = diag({1, 1});
  m(0, 1) = 0.3;
  try {
    (void)psd_check(m);
    FAIL("expected NonHermitianInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitianInput);
  }
}

TEST_CASE("psd_sqrt examples") {
  CHECK((psd_sqrt(diag({4, 1})) - diag({2, 1})).norm() < 1e-14);
  CHECK(psd_sqrt(HermitianMatrix::Zero(2, 2)).norm() == 0.0);
  const HermitianMatrix half = 0.5 * HermitianMatrix::Identity(2, 2);
  CHECK((psd_sqrt(half) - HermitianMatrix::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("psd_sqrt clamps boundary negativity and rejects real negativity") {
  CHECK((psd_sqrt(diag({1, -1e-12})) - diag({1, 0})).norm() < 1e-15);
  CHECK_THROWS_AS(psd_sqrt(diag({1, -0.01})), Error);
}

TEST_CASE("psd_sqrt round trip on random PSD matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(dim)));
    const HermitianMatrix h = random_psd(dim, rng, rank);
    const HermitianMatrix s = psd_sqrt(h);
    CHECK(operator_norm(HermitianMatrix(s * s - h)) <= 1e-9);
    CHECK(operator_norm(HermitianMatrix(s * h - h * s)) <= 1e-9);
    CHECK(psd_check(s));
  }
}

TEST_CASE("psd_sqrt on long double") {
  Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> m(2, 2);
  m << 4.0L, 0.0L, 0.0L, 9.0L;
  const auto s = psd_sqrt(m);
  CHECK(std::abs(s(0, 0).real() - 2.0L) < 1e-15L);
  CHECK(std::abs(s(1, 1).real() - 3.0L) < 1e-15L);
}

TEST_CASE("support_projection examples") {
  CHECK((support_projection(diag({0.7, 0})) - diag({1, 0})).norm() < 1e-15);
  CHECK((support_projection(HermitianMatrix::Identity(2, 2)) - HermitianMatrix::Identity(2, 2)).norm() < 1e-15);
  Tolerances tol;
  tol.tol_rank = 1e-10;
  CHECK((support_projection(diag({0.5, 1e-14}), tol) - diag({1, 0})).norm() < 1e-15);
  CHECK(support_projection(HermitianMatrix::Zero(2, 2)).norm() == 0.0);
}

TEST_CASE("support_projection is idempotent and preserves H") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(dim)));
    const HermitianMatrix h = random_psd(dim, rng, rank);
    const HermitianMatrix p = support_projection(h);
    CHECK(operator_norm(HermitianMatrix(p * p - p)) <= 1e-10);
    CHECK(operator_norm(HermitianMatrix(p * h - h)) <= 1e-9);
    CHECK(std::llround(p.trace().real()) == rank);
  }
}

TEST_CASE("support_projection rejects non-positive input") {
  CHECK_THROWS_AS(support_projection(diag({1, -0.5})), Error);
}

TEST_CASE("real_nullspace examples") {
  Eigen::MatrixXd row(1, 2);
  row << 1, 1;
  const Eigen::MatrixXd n1 = real_nullspace(row);
  REQUIRE(n1.cols() == 1);
  CHECK(std::abs(std::abs(n1(0, 0)) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(n1(0, 0) + n1(1, 0)) < 1e-15);

  CHECK(real_nullspace(Eigen::MatrixXd::Identity(3, 3)).cols() == 0);

  Eigen::MatrixXd two(2, 3);
  two << 1, 0, 0, 0, 1, 0;
  const Eigen::MatrixXd n2 = real_nullspace(two);
  REQUIRE(n2.cols() == 1);
  CHECK(std::abs(std::abs(n2(2, 0)) - 1) < 1e-15);

  CHECK(real_nullspace(Eigen::MatrixXd::Zero(2, 3)).cols() == 3);
}

TEST_CASE("real_nullspace soundness and completeness against the Gram oracle") {
  Rng rng(13);
  const Tolerances tol;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(10));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(12));
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(std::min(m, n))));
    Eigen::MatrixXd left(m, r), right(r, n);
    for (Eigen::Index i = 0; i < left.size(); ++i) left.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < right.size(); ++i) right.data()[i] = rng.normal();
    const Eigen::MatrixXd mat = left * right;
    const Eigen::MatrixXd null = real_nullspace(mat, tol);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    const double sigma_max = svd.singularValues()(0);
    for (Eigen::Index c = 0; c < null.cols(); ++c) CHECK((mat * null.col(c)).norm() <= tol.tol_rank * sigma_max);
    CHECK((null.transpose() * null - Eigen::MatrixXd::Identity(null.cols(), null.cols())).norm() < 1e-12);
    CHECK(null.cols() == n - r);
    CHECK(null.cols() == oracle::gram_nullity(mat));
  }
}

TEST_CASE("hermitian_basis examples") {
  const auto b1 = hermitian_basis(1);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0](0, 0) == std::complex<double>(1, 0));

  const auto b2 = hermitian_basis(2);
  REQUIRE(b2.size() == 4);
  CHECK((b2[0] - HermitianMatrix::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-15);
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(b2[i].trace()) < 1e-15);

  const auto b3 = hermitian_basis(3);
  REQUIRE(b3.size() == 9);
  for (std::size_t i = 0; i < b3.size(); ++i) {
    CHECK(hermiticity_defect(b3[i]) == 0.0);
    for (std::size_t j = 0; j < b3.size(); ++j)
      CHECK(std::abs(real_inner(b3[i], b3[j]) - (i == j ? 1.0 : 0.0)) < 1e-15);
  }
}

TEST_CASE("hermitian_basis expansion reproduces random Hermitian matrices") {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.below(6));
    const HermitianMatrix h = random_hermitian(dim, rng);
    const auto basis = hermitian_basis(dim);
    const Eigen::VectorXd c = hermitian_coordinates(h, basis);
    HermitianMatrix rebuilt = HermitianMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) rebuilt += c(static_cast<Eigen::Index>(i)) * basis[i];
    CHECK((rebuilt - h).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("operator_norm is the largest singular value") {
  HermitianMatrix m = HermitianMatrix::Zero(2, 2);
  m(0, 1) = 3;
  CHECK(operator_norm(m) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(operator_norm(diag({-0.25, -0.25})) == 0.25);
}

TEST_CASE("tolerances validation") {
  Tolerances bad;
  bad.tol_rank = 1.5;
  CHECK_THROWS_AS(bad.check(), Error);
  CHECK_NOTHROW(Tolerances{}.check());
}

}  // TEST_SUITE
