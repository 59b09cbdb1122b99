#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "povm/json_io.hpp"

using namespace povm;
using io::json;

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

bool bit_identical(const Povm& a, const Povm& b) {
  if (a.dim() != b.dim() || a.size() != b.size() || a.outcomes() != b.outcomes()) return false;
  for (std::size_t n = 0; n < a.size(); ++n)
    if (!(a[n].array() == b[n].array()).all()) return false;
  return true;
}

Povm through_text(const Povm& a) { return io::povm_from_json(json::parse(io::to_json(a).dump())); }

}  // namespace

TEST_SUITE("json_io") {

TEST_CASE("POVM documents use [re, im] entries") {
  const json doc = io::to_json(fixtures::biased());
  CHECK(doc["dim"] == 2);
  CHECK(doc["outcomes"] == json({"a", "b"}));
  CHECK(doc["effects"][0][0][0] == json({0.7, 0.0}));
  CHECK(doc["effects"][0][1][1] == json({0.3, 0.0}));
}

TEST_CASE("outcomes default and plain real entries are accepted") {
  const json doc = json::parse(R"({"dim": 2, "effects": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]})");
  const Povm a = io::povm_from_json(doc);
  CHECK(a.outcomes() == std::vector<std::string>{"x1", "x2"});
  CHECK(is_pvm(a).is_pvm);
}

TEST_CASE("round trip is bit-identical for generator outputs") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(seed % 6);
    const std::size_t n = 1 + seed % static_cast<std::uint64_t>(dim);
    CHECK(bit_identical(through_text(random_povm(dim, 1 + seed % 5, seed)), random_povm(dim, 1 + seed % 5, seed)));
    CHECK(bit_identical(through_text(random_pvm(dim, n, seed).povm()), random_pvm(dim, n, seed).povm()));
    const bool deterministic = seed % 2 == 0;
    const std::size_t m = deterministic ? n : 2 + seed % 3;
    const Povm c = random_commutative_povm(dim, m, seed, deterministic);
    CHECK(bit_identical(through_text(c), c));

    const State rho = random_state(dim, seed);
    const State back = io::state_from_json(json::parse(io::to_json(rho).dump()));
    CHECK((back.matrix().array() == rho.matrix().array()).all());
  }
}

TEST_CASE("smearing forms round trip") {
  const SmearingForm form = simultaneous_diagonalize(fixtures::biased());
  const SmearingForm back = io::smearing_form_from_json(json::parse(io::to_json(form).dump()));
  CHECK(bit_identical(back.pvm.povm(), form.pvm.povm()));
  CHECK((back.kernel.matrix().array() == form.kernel.matrix().array()).all());
  CHECK(back.kernel.outcomes() == form.kernel.outcomes());
}

TEST_CASE("kernel documents") {
  const MarkovKernel bare = io::kernel_from_json(json::parse("[[0.7, 0.3], [0.3, 0.7]]"));
  CHECK(bare(1, 1) == 0.7);
  const MarkovKernel named = io::kernel_from_json(json::parse(R"({"kernel": [[1, 0]], "outcomes": ["u", "v"]})"));
  CHECK(named.outcomes() == std::vector<std::string>{"u", "v"});
  CHECK(kind_of([] { io::kernel_from_json(json::parse(R"({"kernel": [[0.5, 0.6]]})")); }) == ErrorKind::InvalidKernel);
}

TEST_CASE("malformed documents raise MalformedInput") {
  CHECK(kind_of([] { io::povm_from_json(json::parse(R"({"effects": []})")); }) == ErrorKind::MalformedInput);
  CHECK(kind_of([] { io::povm_from_json(json::parse(R"({"dim": 1, "effects": [[["a"]]]})")); }) == ErrorKind::MalformedInput);
  CHECK(kind_of([] { io::matrix_from_json(json::parse("[[[1, 2, 3]]]")); }) == ErrorKind::MalformedInput);
  CHECK(kind_of([] { io::matrix_from_json(json::parse("[[1, 0], [0]]")); }) == ErrorKind::MalformedInput);

  const auto path = std::filesystem::temp_directory_path() / "povm_truncated.json";
  std::ofstream(path) << R"({"dim": 2, "effects": [)";
  CHECK(kind_of([&] { io::read_json_file(path.string()); }) == ErrorKind::MalformedInput);
  std::filesystem::remove(path);
  CHECK(kind_of([] { io::read_json_file("/nonexistent/povm.json"); }) == ErrorKind::MalformedInput);
}

TEST_CASE("validation errors pass through unchanged") {
  const json doc = json::parse(R"({"dim": 2, "effects": [[[0.6, 0], [0, 0.6]], [[0.6, 0], [0, 0.6]]]})");
  CHECK(kind_of([&] { io::povm_from_json(doc); }) == ErrorKind::NotNormalized);
  const json bad_dim = json::parse(R"({"dim": 3, "effects": [[[1, 0], [0, 1]]]})");
  CHECK(kind_of([&] { io::povm_from_json(bad_dim); }) == ErrorKind::ShapeMismatch);
}

}  // TEST_SUITE
