#pragma once

#include <cmath>
#include <numbers>

#include "povm/povm.hpp"

namespace fixtures {

using povm::HermitianMatrix;

inline HermitianMatrix diag(double a, double b) {
  HermitianMatrix m = HermitianMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline HermitianMatrix ket_projector(const Eigen::VectorXcd& v) { return v * v.adjoint() / v.squaredNorm(); }

/// Coin tossing on C^2: { I/2, I/2 }.
inline povm::Povm coin() {
  return povm::validate_povm(2, {"heads", "tails"}, {0.5 * HermitianMatrix::Identity(2, 2), 0.5 * HermitianMatrix::Identity(2, 2)});
}

/// Computational-basis PVM on C^2.
inline povm::Povm basis_pvm() { return povm::validate_povm(2, {"0", "1"}, {diag(1, 0), diag(0, 1)}); }

/// { diag(0.7, 0.3), diag(0.3, 0.7) }.
inline povm::Povm biased() { return povm::validate_povm(2, {"a", "b"}, {diag(0.7, 0.3), diag(0.3, 0.7)}); }

/// Qubit trine: (2/3)|phi_k><phi_k| with phi_k = (cos 2 pi k/3, sin 2 pi k/3).
inline povm::Povm trine() {
  std::vector<HermitianMatrix> effects;
  for (int k = 1; k <= 3; ++k) {
    const double angle = 2 * std::numbers::pi * k / 3;
    Eigen::VectorXcd phi(2);
    phi << std::cos(angle), std::sin(angle);
    effects.push_back((2.0 / 3.0) * ket_projector(phi));
  }
  return povm::validate_povm(2, {"t1", "t2", "t3"}, std::move(effects));
}

}  // namespace fixtures
