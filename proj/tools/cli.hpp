#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "povm/error.hpp"

namespace povm::cli {

/// Process exit codes. Stable; scripts depend on them.
enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,           // input parsed but failed validation
  kMalformed = 2,         // unreadable/malformed JSON, shape errors, usage errors
  kExtremeInput = 3,      // decompose on an extreme POVM
  kNotCommutative = 4,    // diagonalize / theorem check on a non-commutative POVM
  kTheoremViolation = 5,  // verify-theorem found a failing instance
};

int exit_code_for(ErrorKind kind);

/// Runs the command line `args` (args[0] is the program name). Reports go to `out`, diagnostics
/// and timing to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace povm::cli
