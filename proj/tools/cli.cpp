#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "povm/extremality.hpp"
#include "povm/json_io.hpp"
#include "povm/smearing.hpp"

namespace povm::cli {

namespace {

using io::json;

/// Ordered key=value report, mirrored into a JSON object for --json.
class Report {
 public:
  Report(std::string command, const Tolerances& tol) : command_(std::move(command)) {
    doc_["command"] = command_;
    doc_["tolerances"] = io::to_json(tol);
    std::ostringstream line;
    line << "tol_herm=" << tol.tol_herm << " tol_psd=" << tol.tol_psd << " tol_eq=" << tol.tol_eq
         << " tol_rank=" << tol.tol_rank;
    header_ = line.str();
  }

  template <typename T>
  void add(const std::string& key, const T& value) {
    std::ostringstream s;
    if constexpr (std::is_same_v<T, bool>)
      s << (value ? "true" : "false");
    else
      s << value;
    lines_.emplace_back(key, s.str());
    doc_["fields"][key] = value;
  }

  void residual(const std::string& key, double value) {
    std::ostringstream s;
    s << value;
    lines_.emplace_back(key, s.str());
    doc_["residuals"][key] = value;
  }

  json& doc() { return doc_; }

  void print(std::ostream& out, std::ostream& err, bool as_json, std::chrono::steady_clock::time_point start) {
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (as_json) {
      doc_["elapsed_ms"] = elapsed_ms;
      out << doc_.dump(2) << '\n';
    } else {
      out << "command=" << command_ << '\n' << header_ << '\n';
      for (const auto& [k, v] : lines_) out << k << '=' << v << '\n';
    }
    err << "elapsed_ms=" << elapsed_ms << '\n';
  }

 private:
  std::string command_;
  std::string header_;
  std::vector<std::pair<std::string, std::string>> lines_;
  json doc_;
};

struct CommonOptions {
  std::optional<double> tol_eq, tol_psd, tol_rank, tol_herm;
  bool json = false;
};

void add_common(CLI::App& sub, CommonOptions& common) {
  sub.add_option("--tol-eq", common.tol_eq, "operator-equality tolerance");
  sub.add_option("--tol-psd", common.tol_psd, "allowed eigenvalue negativity");
  sub.add_option("--tol-rank", common.tol_rank, "relative singular-value cutoff");
  sub.add_option("--tol-herm", common.tol_herm, "hermiticity tolerance");
  sub.add_flag("--json", common.json, "print the full report as JSON");
}

Tolerances resolve_tolerances(const CommonOptions& common) {
  Tolerances tol;
  if (const char* env = std::getenv("POVM_TOL_EQ")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw Error(ErrorKind::InvalidTolerances, std::string("bad POVM_TOL_EQ '") + env + "'");
    tol.tol_eq = v;
  }
  if (common.tol_eq) tol.tol_eq = *common.tol_eq;
  if (common.tol_psd) tol.tol_psd = *common.tol_psd;
  if (common.tol_rank) tol.tol_rank = *common.tol_rank;
  if (common.tol_herm) tol.tol_herm = *common.tol_herm;
  tol.check();
  return tol;
}

void add_classification(Report& report, const ClassificationReport& c) {
  report.add("pvm", c.is_pvm);
  report.add("commutative", c.is_commutative);
  report.add("extreme", c.is_extreme ? std::string(*c.is_extreme ? "true" : "false") : std::string("unknown"));
  if (c.kernel_dimension) report.add("kernel_dimension", *c.kernel_dimension);
  report.add("commutator_norm", c.max_commutator_norm);
  report.add("idempotency_defect", c.max_idempotency_defect);
  report.add("orthogonality_defect", c.max_orthogonality_defect);
  report.doc()["classification"] = io::to_json(c);
}

void add_instance(Report& report, const Povm& a) {
  report.add("dim", a.dim());
  report.add("outcomes", a.size());
  report.doc()["instance"] = {{"dim", a.dim()}, {"N", a.size()}};
}

/// Raw residuals of every POVM invariant, computed before validation so failing files still report them.
void add_raw_residuals(Report& report, const json& doc) {
  if (!doc.is_object() || !doc.contains("effects") || !doc["effects"].is_array()) return;
  std::vector<HermitianMatrix> effects;
  for (const auto& e : doc["effects"]) effects.push_back(io::matrix_from_json(e));
  if (effects.empty()) return;
  const Eigen::Index dim = effects.front().rows();
  double herm = 0, negativity = 0, excess = 0;
  HermitianMatrix sum = HermitianMatrix::Zero(dim, dim);
  for (const auto& e : effects) {
    if (e.rows() != dim || e.cols() != dim) return;
    herm = std::max(herm, hermiticity_defect(e));
    const auto spec = spectral_decomposition(e);
    negativity = std::max(negativity, -spec.eigenvalues(0));
    excess = std::max(excess, spec.eigenvalues(dim - 1) - 1.0);
    sum += e;
  }
  report.residual("hermiticity_residual", herm);
  report.residual("positivity_residual", std::max(0.0, negativity));
  report.residual("bound_residual", std::max(0.0, excess));
  report.residual("normalization_residual", operator_norm(HermitianMatrix(sum - HermitianMatrix::Identity(dim, dim))));
}

void add_certificate(Report& report, const DecompositionCertificate& cert) {
  report.add("separation", cert.separation);
  report.residual("midpoint_residual", cert.residual);
}

struct TrialOutcome {
  bool passed = false;
  bool extreme = false;
  bool deterministic = false;
  std::string branch;
  std::string failure;
  std::map<std::string, double> residuals;
};

TrialOutcome run_trial(Eigen::Index dim, std::size_t n, std::uint64_t seed, bool deterministic, const Tolerances& tol,
                       std::optional<Povm>& instance) {
  TrialOutcome outcome;
  outcome.deterministic = deterministic;
  try {
    instance.emplace(random_commutative_povm(dim, n, seed, deterministic));
    const Povm& a = *instance;
    const TheoremReport theorem = theorem_check(a, tol);
    outcome.branch = theorem.branch;
    outcome.extreme = theorem.extreme;
    outcome.residuals = theorem.residuals;
    const ChainCheck chain = second_proof_chain(a, tol);
    outcome.residuals["reconstruction"] = chain.reconstruction_residual;

    std::vector<std::string> problems;
    if (deterministic != (theorem.branch == "pvm")) problems.push_back("branch disagrees with the generated kernel");
    if (!chain.holds()) problems.push_back("extreme => deterministic => PVM chain broken");
    if (chain.reconstruction_residual > tol.tol_eq) problems.push_back("reconstruction residual above tol_eq");
    for (const auto* cert : {theorem.certificate ? &*theorem.certificate : nullptr,
                             theorem.kernel_certificate ? &*theorem.kernel_certificate : nullptr}) {
      if (!cert) continue;
      if (cert->residual > tol.tol_eq) problems.push_back("certificate midpoint residual above tol_eq");
      if (!(cert->separation > tol.tol_eq)) problems.push_back("certificate separation not above tol_eq");
    }
    if (theorem.branch == "non-pvm" && theorem.residuals.at("witness_zero_sum") > tol.tol_eq)
      problems.push_back("witness zero-sum residual above tol_eq");
    outcome.passed = problems.empty();
    if (!problems.empty()) outcome.failure = problems.front();
  } catch (const Error& e) {
    outcome.failure = e.what();
  }
  return outcome;
}

int cmd_verify_theorem(std::size_t trials, Eigen::Index dim, std::size_t n, std::uint64_t seed, const std::string& kernels,
                       unsigned threads, const std::string& dump, const Tolerances& tol, bool as_json, std::ostream& out,
                       std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  if (trials < 1) {
    err << "verify-theorem: --trials must be >= 1\n";
    return kMalformed;
  }
  if (kernels != "mixed" && kernels != "stochastic" && kernels != "deterministic") {
    err << "verify-theorem: --kernels must be mixed, stochastic or deterministic\n";
    return kMalformed;
  }
  const bool det_possible = static_cast<Eigen::Index>(n) <= dim;
  if (kernels == "deterministic" && !det_possible) {
    err << "verify-theorem: deterministic kernels need --outcomes <= --dim\n";
    return kMalformed;
  }
  if (kernels == "stochastic" && n < 2) {
    err << "verify-theorem: stochastic kernels need --outcomes >= 2\n";
    return kMalformed;
  }

  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::optional<Povm>> instances(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      bool deterministic = kernels == "deterministic";
      if (kernels == "mixed") deterministic = det_possible && (i % 4 == 0 || n < 2);
      outcomes[i] = run_trial(dim, n, split_seed(seed, i), deterministic, tol, instances[i]);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Report report("verify-theorem", tol);
  report.add("trials", trials);
  report.add("dim", dim);
  report.add("outcomes", n);
  report.add("seed", seed);
  report.add("kernels", kernels);
  report.doc()["instance"] = {{"dim", dim}, {"N", n}, {"seed", seed}, {"trials", trials}};

  // Defects of the instance itself are reported as ranges, not as residuals.
  const std::set<std::string> descriptive{"idempotency", "orthogonality", "witness_separation"};
  std::size_t passed = 0, pvm_branch = 0, extreme = 0;
  std::map<std::string, double> worst;
  double min_separation = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> first_failure;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& o = outcomes[i];
    if (o.passed) ++passed;
    else if (!first_failure) first_failure = i;
    if (o.branch == "pvm") ++pvm_branch;
    if (o.extreme) ++extreme;
    for (const auto& [k, v] : o.residuals) {
      if (k == "witness_separation") min_separation = std::min(min_separation, v);
      else if (!descriptive.contains(k)) worst[k] = std::max(worst[k], v);
    }
  }
  report.add("passed", passed);
  report.add("failed", trials - passed);
  report.add("branch_pvm", pvm_branch);
  report.add("branch_non_pvm", trials - pvm_branch);
  report.add("extreme", extreme);
  if (std::isfinite(min_separation)) report.add("min_witness_separation", min_separation);
  for (const auto& [k, v] : worst) report.residual("worst_" + k, v);

  int code = kOk;
  if (first_failure) {
    const std::size_t i = *first_failure;
    report.add("first_failure", i);
    report.add("failure", outcomes[i].failure);
    if (instances[i]) {
      io::write_json_file(dump, {{"trial", i}, {"seed", split_seed(seed, i)}, {"povm", io::to_json(*instances[i])}});
      report.add("dumped", dump);
    }
    code = kTheoremViolation;
  }
  report.add("status", code == kOk ? "ok" : "violation");
  report.print(out, err, as_json, start);
  return code;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput:
    case ErrorKind::NotPositive:
    case ErrorKind::EffectExceedsIdentity:
    case ErrorKind::NotNormalized:
    case ErrorKind::ZeroEffect:
    case ErrorKind::DuplicateLabel:
    case ErrorKind::NotProjective:
    case ErrorKind::NotState:
    case ErrorKind::InvalidKernel:
    case ErrorKind::NotDeterministic:
      return kInvalid;
    case ErrorKind::NotCommutative:
      return kNotCommutative;
    case ErrorKind::TheoremViolation:
      return kTheoremViolation;
    default:
      return kMalformed;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-dimensional POVM toolkit: validation, classification, extremality certificates, smearing"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input, output, pvm_path, kernel_path, form_path, witness = "kernel", kind = "povm", kernels = "mixed";
  std::string dump = "verify-theorem-failure.json";
  bool extremality = false, deterministic = false;
  Eigen::Index dim = 2, rank = 0;
  std::size_t outcomes = 2, trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  auto* validate = app.add_subcommand("validate", "check a POVM file against every POVM invariant");
  validate->add_option("input", input, "POVM JSON")->required();

  auto* classify_cmd = app.add_subcommand("classify", "PVM / commutativity / extremality classification");
  classify_cmd->add_option("input", input, "POVM JSON")->required();
  classify_cmd->add_flag("--extremality", extremality, "also decide extremality");

  auto* decompose = app.add_subcommand("decompose", "write a convex-decomposition certificate for a non-extreme POVM");
  decompose->add_option("input", input, "POVM JSON")->required();
  decompose->add_option("-o,--output", output, "certificate JSON")->required();
  decompose->add_option("--witness", witness, "kernel (any POVM) or proof1 (commutative POVMs)")
      ->check(CLI::IsMember({"kernel", "proof1"}));

  auto* diagonalize = app.add_subcommand("diagonalize", "write the PVM + Markov kernel form of a commutative POVM");
  diagonalize->add_option("input", input, "POVM JSON")->required();
  diagonalize->add_option("-o,--output", output, "smearing-form JSON")->required();

  auto* smear_cmd = app.add_subcommand("smear", "smear a PVM with a Markov kernel");
  smear_cmd->add_option("--pvm", pvm_path, "PVM JSON");
  smear_cmd->add_option("--kernel", kernel_path, "kernel JSON ([[real]] or {\"kernel\": ...})");
  smear_cmd->add_option("--form", form_path, "smearing-form JSON (alternative to --pvm/--kernel)");
  smear_cmd->add_option("-o,--output", output, "POVM JSON")->required();

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("kind", kind, "povm, pvm, commutative or state")
      ->check(CLI::IsMember({"povm", "pvm", "commutative", "state"}));
  gen->add_option("--dim", dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
  gen->add_option("--outcomes", outcomes, "number of outcomes")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "64-bit seed");
  gen->add_option("--rank", rank, "effect rank for kind=povm (0 = full)");
  gen->add_flag("--deterministic", deterministic, "0/1 kernel for kind=commutative");
  gen->add_option("-o,--output", output, "output JSON")->required();

  auto* verify = app.add_subcommand("verify-theorem", "check extreme <=> PVM on random commutative POVMs");
  verify->add_option("--trials", trials, "number of instances")->required();
  verify->add_option("--dim", dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
  verify->add_option("--outcomes", outcomes, "number of outcomes")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "64-bit master seed");
  verify->add_option("--kernels", kernels, "mixed, stochastic or deterministic");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--dump", dump, "where to write the first failing instance");

  for (auto* sub : {validate, classify_cmd, decompose, diagonalize, smear_cmd, gen, verify}) add_common(*sub, common);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kMalformed;
  }

  const auto start = std::chrono::steady_clock::now();
  const std::string command = app.get_subcommands().front()->get_name();
  Tolerances tol;
  try {
    tol = resolve_tolerances(common);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kMalformed;
  }

  Report report(command, tol);
  auto fail = [&](const Error& e) {
    report.add("status", "error");
    std::ostringstream msg;
    msg << to_string(e.kind());
    if (e.residual() != 0.0) msg << " residual=" << e.residual();
    report.add("error", msg.str());
    report.doc()["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}, {"residual", e.residual()}};
    report.print(out, err, common.json, start);
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  };

  try {
    if (command == "verify-theorem")
      return cmd_verify_theorem(trials, dim, outcomes, seed, kernels, threads, dump, tol, common.json, out, err);

    if (command == "validate") {
      const json doc = io::read_json_file(input);
      add_raw_residuals(report, doc);
      const Povm a = io::povm_from_json(doc, tol);
      add_instance(report, a);
      report.add("status", "ok");
    } else if (command == "classify") {
      const Povm a = io::povm_from_json(io::read_json_file(input), tol);
      add_instance(report, a);
      add_classification(report, extremality ? classify_extremality(a, tol) : classify(a, tol));
      report.add("status", "ok");
    } else if (command == "decompose") {
      const Povm a = io::povm_from_json(io::read_json_file(input), tol);
      add_instance(report, a);
      std::optional<DecompositionCertificate> cert;
      if (witness == "proof1") {
        const TheoremReport theorem = theorem_check(a, tol);
        report.add("branch", theorem.branch);
        if (theorem.pair) report.add("pair", std::to_string(theorem.pair->first) + "," + std::to_string(theorem.pair->second));
        cert = theorem.certificate;
      } else {
        auto verdict = is_extreme(a, tol);
        report.add("kernel_dimension", verdict.kernel_dimension);
        cert = std::move(verdict.certificate);
      }
      if (!cert) {
        report.add("extreme", true);
        report.add("status", "error");
        report.add("error", "ExtremeInput");
        report.print(out, err, common.json, start);
        err << "ExtremeInput: the POVM is extreme; no decomposition exists\n";
        return kExtremeInput;
      }
      io::write_json_file(output, io::to_json(*cert));
      add_certificate(report, *cert);
      report.doc()["certificate"] = io::to_json(*cert);
      report.add("output", output);
      report.add("status", "ok");
    } else if (command == "diagonalize") {
      const Povm a = io::povm_from_json(io::read_json_file(input), tol);
      add_instance(report, a);
      const SmearingForm form = simultaneous_diagonalize(a, tol);
      io::write_json_file(output, io::to_json(form));
      report.add("pvm_outcomes", form.pvm.size());
      report.add("deterministic", kernel_is_deterministic(form.kernel, tol).deterministic);
      report.residual("reconstruction_residual", form.reconstruction_residual);
      report.doc()["smearing"] = io::to_json(form);
      report.add("output", output);
      report.add("status", "ok");
    } else if (command == "smear") {
      std::optional<Pvm> e;
      std::optional<MarkovKernel> nu;
      if (!form_path.empty()) {
        SmearingForm form = io::smearing_form_from_json(io::read_json_file(form_path), tol);
        e.emplace(std::move(form.pvm));
        nu.emplace(std::move(form.kernel));
      } else if (!pvm_path.empty() && !kernel_path.empty()) {
        e.emplace(Pvm::from(io::povm_from_json(io::read_json_file(pvm_path), tol), tol));
        nu.emplace(io::kernel_from_json(io::read_json_file(kernel_path), tol));
      } else {
        err << "smear: give --form, or both --pvm and --kernel\n";
        return kMalformed;
      }
      const Povm a = smear(*e, *nu, tol);
      io::write_json_file(output, io::to_json(a));
      add_instance(report, a);
      report.add("commutator_norm", is_commutative(a, tol).max_commutator_norm);
      report.add("output", output);
      report.add("status", "ok");
    } else if (command == "gen") {
      json doc;
      if (kind == "povm") {
        doc = io::to_json(random_povm(dim, outcomes, seed, rank));
      } else if (kind == "pvm") {
        doc = io::to_json(random_pvm(dim, outcomes, seed).povm());
      } else if (kind == "commutative") {
        doc = io::to_json(random_commutative_povm(dim, outcomes, seed, deterministic));
      } else {
        doc = io::to_json(random_state(dim, seed));
      }
      io::write_json_file(output, doc);
      report.add("kind", kind);
      report.add("dim", dim);
      if (kind != "state") report.add("outcomes", outcomes);
      report.add("seed", seed);
      report.add("output", output);
      report.add("status", "ok");
    }
  } catch (const Error& e) {
    return fail(e);
  } catch (const json::exception& e) {
    return fail(Error(ErrorKind::MalformedInput, e.what()));
  }
  report.print(out, err, common.json, start);
  return kOk;
}

}  // namespace povm::cli
