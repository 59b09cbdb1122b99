#pragma once

#include <json.hpp>

#include <string>

#include "povm/extremality.hpp"
#include "povm/povm.hpp"
#include "povm/smearing.hpp"

namespace povm::io {

using json = nlohmann::json;

// Matrices are row-major lists of rows; each entry is a two-element array [re, im]. Plain numbers
// are accepted on input as real entries. Schema errors raise Error(MalformedInput).

json matrix_to_json(const ComplexMatrix<double>& m);
ComplexMatrix<double> matrix_from_json(const json& j);

/// { "dim": int, "outcomes": [string], "effects": [matrix] }
json to_json(const Povm& a);
Povm povm_from_json(const json& j, const Tolerances& tol = {});

/// { "dim": int, "matrix": matrix }
json to_json(const State& rho);
State state_from_json(const json& j, const Tolerances& tol = {});

/// Accepts a bare [[real]] array or an object with "kernel" and optional "outcomes".
MarkovKernel kernel_from_json(const json& j, const Tolerances& tol = {});

/// { "pvm": povm, "kernel": [[real]], "residual": real, "outcomes": [string] }
json to_json(const SmearingForm& form);
SmearingForm smearing_form_from_json(const json& j, const Tolerances& tol = {});

/// { "plus": povm, "minus": povm, "weight": 0.5, "separation": real, "residual": real }
json to_json(const DecompositionCertificate& cert);

json to_json(const ClassificationReport& report);
json to_json(const Tolerances& tol);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace povm::io
