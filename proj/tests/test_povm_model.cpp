#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "povm/povm.hpp"

using namespace povm;
using fixtures::diag;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected povm::Error");
  return ErrorKind::MalformedInput;
}

}  // namespace

TEST_SUITE("povm_model") {

TEST_CASE("validate_povm accepts identity and coin") {
  const Povm id = validate_povm(2, {"x"}, {HermitianMatrix::Identity(2, 2)});
  CHECK(id.size() == 1);
  const Povm coin = fixtures::coin();
  CHECK(coin.size() == 2);
  CHECK(coin.dim() == 2);
}

TEST_CASE("validate_povm error paths") {
  CHECK(kind_of([] { validate_povm(2, {"a", "b"}, {diag(0.6, 0.6), diag(0.6, 0.6)}); }) == ErrorKind::NotNormalized);
  try {
    validate_povm(2, {"a", "b"}, {diag(0.6, 0.6), diag(0.6, 0.6)});
  } catch (const Error& e) {
    CHECK(e.residual() == doctest::Approx(0.2).epsilon(1e-12));
  }
  CHECK(kind_of([] { validate_povm(2, {"a", "b"}, {HermitianMatrix::Identity(2, 2), diag(0, 0)}); }) == ErrorKind::ZeroEffect);
  CHECK(kind_of([] { validate_povm(2, {"a", "b"}, {diag(-0.5, 0.5), diag(1.5, 0.5)}); }) == ErrorKind::NotPositive);
  CHECK(kind_of([] { validate_povm(2, {"a"}, {diag(1.5, 1)}); }) == ErrorKind::EffectExceedsIdentity);
  CHECK(kind_of([] { validate_povm(2, {"a", "a"}, {diag(0.5, 0.5), diag(0.5, 0.5)}); }) == ErrorKind::DuplicateLabel);
  CHECK(kind_of([] { validate_povm(2, {"a", "b"}, {diag(0.5, 0.5)}); }) == ErrorKind::ShapeMismatch);
  HermitianMatrix skew = diag(0.5, 0.5);
  skew(0, 1) = 0.1;
  CHECK(kind_of([&] { validate_povm(2, {"a", "b"}, {skew, diag(0.5, 0.5)}); }) == ErrorKind::NonHermitianInput);
}

TEST_CASE("effect_of sums singleton effects") {
  const Povm t = fixtures::trine();
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK((t.effect_of(all) - HermitianMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(t.effect_of(std::vector<std::size_t>{}).norm() == 0.0);
}

TEST_CASE("is_pvm examples") {
  const auto basis = is_pvm(fixtures::basis_pvm());
  CHECK(basis.is_pvm);
  CHECK(basis.idempotency_defect == 0.0);

  const auto coin = is_pvm(fixtures::coin());
  CHECK_FALSE(coin.is_pvm);
  CHECK(coin.idempotency_defect == 0.25);

  // (2/3)P - (4/9)P = (2/9)P for a rank-one projector P.
  const auto trine = is_pvm(fixtures::trine());
  CHECK_FALSE(trine.is_pvm);
  CHECK(trine.idempotency_defect == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("is_commutative examples") {
  CHECK(is_commutative(fixtures::biased()).is_commutative);
  CHECK(is_commutative(fixtures::basis_pvm()).is_commutative);
  // [P_u, P_v] = (u.v)(u v^T - v u^T) has norm |cos t sin t| for unit vectors at angle t; t = 120 deg.
  const double expected = (4.0 / 9.0) * std::abs(std::cos(2 * std::numbers::pi / 3) * std::sin(2 * std::numbers::pi / 3));
  const auto trine = is_commutative(fixtures::trine());
  CHECK_FALSE(trine.is_commutative);
  CHECK(trine.max_commutator_norm == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(std::sqrt(3.0) / 9.0).epsilon(1e-15));
}

TEST_CASE("convex_combine examples") {
  const Povm coin = fixtures::coin();
  CHECK(convex_combine(coin, coin, 0.5) == coin);

  const Povm a = validate_povm(2, {"0", "1"}, {diag(1, 0), diag(0, 1)});
  const Povm b = validate_povm(2, {"0", "1"}, {diag(0, 1), diag(1, 0)});
  const Povm mix = convex_combine(a, b, 0.5);
  CHECK((mix[0] - 0.5 * HermitianMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((mix[1] - 0.5 * HermitianMatrix::Identity(2, 2)).norm() < 1e-15);

  CHECK(kind_of([] { validate_povm(2, {"0", "1"}, {HermitianMatrix::Identity(2, 2), diag(0, 0)}); }) == ErrorKind::ZeroEffect);
  CHECK(kind_of([&] { convex_combine(a, b, 0.0); }) == ErrorKind::WeightOutOfRange);
  CHECK(kind_of([&] { convex_combine(a, b, 1.0); }) == ErrorKind::WeightOutOfRange);
  CHECK(kind_of([&] { convex_combine(a, coin, 0.3); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("convex_combine with itself is exact and mixtures validate") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Povm a = random_povm(3, 4, seed);
    const Povm b = random_povm(3, 4, seed + 1000);
    for (double t : {0.1, 0.3, 0.5, 0.77}) {
      CHECK(convex_combine(a, a, t) == a);
      CHECK_NOTHROW(convex_combine(a, b, t));
    }
  }
}

TEST_CASE("born_probabilities examples") {
  const State mixed = State::validate(0.5 * HermitianMatrix::Identity(2, 2));
  const auto p = born_probabilities(mixed, fixtures::coin());
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);

  const State zero = State::validate(diag(1, 0));
  const auto q = born_probabilities(zero, fixtures::biased());
  CHECK(q[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.3).epsilon(1e-15));

  const auto r = born_probabilities(zero, fixtures::basis_pvm());
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);

  CHECK(kind_of([&] { born_probabilities(random_state(3, 1), fixtures::coin()); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("State validation") {
  CHECK(kind_of([] { State::validate(diag(0.5, 0.4)); }) == ErrorKind::NotState);
  CHECK(kind_of([] { State::validate(diag(1.5, -0.5)); }) == ErrorKind::NotPositive);
}

TEST_CASE("random_pvm examples") {
  const Pvm one = random_pvm(2, 1, 7);
  REQUIRE(one.size() == 1);
  CHECK((one[0] - HermitianMatrix::Identity(2, 2)).norm() < 1e-12);

  const Pvm two = random_pvm(2, 2, 7);
  CHECK(std::abs(two[0].trace().real() - 1) < 1e-12);
  CHECK(std::abs(two[1].trace().real() - 1) < 1e-12);
  CHECK(operator_norm(HermitianMatrix(two[0] + two[1] - HermitianMatrix::Identity(2, 2))) < 1e-12);

  const Pvm three = random_pvm(4, 3, 7);
  long total = 0;
  for (std::size_t n = 0; n < 3; ++n) {
    const long rank = std::lround(three[n].trace().real());
    CHECK(rank >= 1);
    total += rank;
  }
  CHECK(total == 4);
  CHECK(is_pvm(three).is_pvm);

  CHECK(kind_of([] { random_pvm(2, 3, 1); }) == ErrorKind::BadPartition);
  CHECK(kind_of([] { random_pvm(2, 0, 1); }) == ErrorKind::BadPartition);
}

TEST_CASE("random_povm examples") {
  const Povm one = random_povm(3, 1, 5);
  CHECK(operator_norm(HermitianMatrix(one[0] - HermitianMatrix::Identity(3, 3))) < 1e-12);

  const Povm qubit = random_povm(2, 3, 5);
  CHECK(is_commutative(qubit).max_commutator_norm > 1e-3);

  CHECK(random_povm(4, 5, 99) == random_povm(4, 5, 99));
  CHECK_FALSE(random_povm(4, 5, 99) == random_povm(4, 5, 100));

  CHECK(kind_of([] { random_povm(4, 2, 1, 1); }) == ErrorKind::SingularSum);
}

TEST_CASE("generator outputs validate and PVMs are commutative") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(seed % 6);
    const std::size_t n = 1 + seed % static_cast<std::uint64_t>(dim);
    const Pvm e = random_pvm(dim, n, seed);
    CHECK(is_commutative(e).is_commutative);

    const Povm a = random_povm(dim, 1 + seed % 5, seed);
    HermitianMatrix sum = HermitianMatrix::Zero(dim, dim);
    for (const auto& effect : a.effects()) {
      sum += effect;
      CHECK(psd_check(effect));
    }
    CHECK(operator_norm(HermitianMatrix(sum - HermitianMatrix::Identity(dim, dim))) <= 1e-9);
  }
}

TEST_CASE("born_probabilities are a distribution on random pairs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(seed % 6);
    const auto p = born_probabilities(random_state(dim, seed), random_povm(dim, 1 + seed % 7, seed + 500));
    double total = 0;
    for (double x : p) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("classify fills PVM and commutativity fields") {
  const auto report = classify(fixtures::coin());
  CHECK(report.is_commutative);
  CHECK_FALSE(report.is_pvm);
  CHECK_FALSE(report.is_extreme.has_value());
  CHECK(report.max_idempotency_defect == 0.25);
}

}  // TEST_SUITE
