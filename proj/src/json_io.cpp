#include "povm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace povm::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedInput, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) malformed("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

Eigen::Index dim_field(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) malformed("'dim' must be a positive integer");
  return static_cast<Eigen::Index>(d.get<long long>());
}

std::complex<double> entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) return {e[0].get<double>(), e[1].get<double>()};
  malformed("matrix entry must be [re, im] or a number");
}

}  // namespace

json matrix_to_json(const ComplexMatrix<double>& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix<double> matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) malformed("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) malformed("matrix rows must be lists");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed("matrix rows have unequal lengths");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

json to_json(const Povm& a) {
  json effects = json::array();
  for (const auto& e : a.effects()) effects.push_back(matrix_to_json(e));
  return {{"dim", a.dim()}, {"outcomes", a.outcomes()}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const json& j, const Tolerances& tol) {
  const Eigen::Index dim = dim_field(j);
  const json& effects_j = field(j, "effects");
  if (!effects_j.is_array()) malformed("'effects' must be a list of matrices");
  std::vector<HermitianMatrix> effects;
  for (const auto& e : effects_j) effects.push_back(matrix_from_json(e));

  std::vector<std::string> outcomes;
  if (j.contains("outcomes")) {
    const json& o = j["outcomes"];
    if (!o.is_array()) malformed("'outcomes' must be a list of strings");
    for (const auto& label : o) {
      if (!label.is_string()) malformed("outcome labels must be strings");
      outcomes.push_back(label.get<std::string>());
    }
  } else {
    outcomes = default_labels(effects.size());
  }
  return Povm::validate(dim, std::move(outcomes), std::move(effects), tol);
}

json to_json(const State& rho) { return {{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}}; }

State state_from_json(const json& j, const Tolerances& tol) {
  const Eigen::Index dim = dim_field(j);
  HermitianMatrix m = matrix_from_json(field(j, "matrix"));
  if (m.rows() != dim || m.cols() != dim) throw Error(ErrorKind::ShapeMismatch, "state matrix does not match 'dim'");
  return State::validate(std::move(m), tol);
}

MarkovKernel kernel_from_json(const json& j, const Tolerances& tol) {
  const json& rows_j = j.is_object() ? field(j, "kernel") : j;
  if (!rows_j.is_array() || rows_j.empty() || !rows_j[0].is_array()) malformed("kernel must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(rows_j.size());
  const auto cols = static_cast<Eigen::Index>(rows_j[0].size());
  Eigen::MatrixXd nu(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = rows_j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed("kernel rows have unequal lengths");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) malformed("kernel entries must be numbers");
      nu(r, c) = v.get<double>();
    }
  }
  std::vector<std::string> outcomes;
  if (j.is_object() && j.contains("outcomes")) outcomes = j["outcomes"].get<std::vector<std::string>>();
  return MarkovKernel::validate(std::move(nu), std::move(outcomes), tol);
}

json to_json(const SmearingForm& form) {
  json kernel = json::array();
  for (Eigen::Index r = 0; r < form.kernel.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < form.kernel.cols(); ++c) row.push_back(form.kernel(r, c));
    kernel.push_back(std::move(row));
  }
  return {{"pvm", to_json(form.pvm.povm())},
          {"kernel", std::move(kernel)},
          {"residual", form.reconstruction_residual},
          {"outcomes", form.kernel.outcomes()}};
}

SmearingForm smearing_form_from_json(const json& j, const Tolerances& tol) {
  Pvm pvm = Pvm::from(povm_from_json(field(j, "pvm"), tol), tol);
  MarkovKernel kernel = kernel_from_json(j, tol);
  const double residual = j.contains("residual") && j["residual"].is_number() ? j["residual"].get<double>() : 0.0;
  return SmearingForm{std::move(pvm), std::move(kernel), residual};
}

json to_json(const DecompositionCertificate& cert) {
  return {{"plus", to_json(cert.plus)},
          {"minus", to_json(cert.minus)},
          {"weight", cert.weight},
          {"separation", cert.separation},
          {"residual", cert.residual}};
}

json to_json(const ClassificationReport& report) {
  json j = {{"is_valid", report.is_valid},
            {"is_pvm", report.is_pvm},
            {"is_commutative", report.is_commutative},
            {"max_commutator_norm", report.max_commutator_norm},
            {"max_idempotency_defect", report.max_idempotency_defect},
            {"max_orthogonality_defect", report.max_orthogonality_defect}};
  j["is_extreme"] = report.is_extreme ? json(*report.is_extreme) : json("unknown");
  if (report.kernel_dimension) j["kernel_dimension"] = *report.kernel_dimension;
  return j;
}

json to_json(const Tolerances& tol) {
  return {{"tol_herm", tol.tol_herm}, {"tol_psd", tol.tol_psd}, {"tol_eq", tol.tol_eq}, {"tol_rank", tol.tol_rank}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    malformed("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) malformed("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace povm::io
