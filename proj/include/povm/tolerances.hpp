#pragma once

#include "povm/error.hpp"

namespace povm {

struct Tolerances {
  double tol_herm = 1e-9;  // |H - H^dagger| entrywise
  double tol_psd = 1e-9;   // allowed negativity of eigenvalues
  double tol_eq = 1e-9;    // operator equality, in operator norm
  double tol_rank = 1e-10; // relative singular-value cutoff

  void check() const {
    if (!(tol_herm > 0 && tol_psd > 0 && tol_eq > 0 && tol_rank > 0 && tol_rank < 1))
      throw Error(ErrorKind::InvalidTolerances, "tolerances must be positive and tol_rank < 1");
  }
};

}  // namespace povm
