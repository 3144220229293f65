#include "punn/integrals.hpp"

#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

#include <fstream>

using namespace punn;
using punn::test::data_path;

namespace {

const char* kToy = R"(&FCI NORB=1,NELEC=2,MS2=0,
  ORBSYM=1,
  ISYM=1,
&END
 -1.0  1 1 0 0
  0.5  1 1 1 1
  0.7  0 0 0 0
)";

nlohmann::json sidecar(const std::string& stem) {
  std::ifstream in(data_path(stem + ".json"));
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("toy file parses and gives the closed-form mean-field energy") {
  IntegralSet ints = parse_fcidump_text(kToy, "toy");
  CHECK(ints.n_orb == 1);
  CHECK(ints.n_elec == 2);
  CHECK(ints.ms2 == 0);
  CHECK(ints.e_nuc == doctest::Approx(0.7));
  CHECK(ints.one(0, 0) == doctest::Approx(-1.0));
  CHECK(ints.two(0, 0, 0, 0) == doctest::Approx(0.5));
  // 2 h_11 + (11|11) + e_nuc = -2 + 0.5 + 0.7
  CHECK(hf_reference_energy(ints) == doctest::Approx(-0.8));
}

TEST_CASE("Fortran D exponents and record order do not matter") {
  IntegralSet a = parse_fcidump_text(
      "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.5D-01 1 1 0 0\n 0.25 2 1 2 1\n 0.0 0 0 0 0\n");
  IntegralSet b = parse_fcidump_text(
      "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.25 2 1 2 1\n\n 0.15 1 1 0 0\n");
  CHECK(a.one(0, 0) == doctest::Approx(0.15));
  CHECK(a.h == b.h);
  CHECK(a.g == b.g);
  CHECK(a.e_nuc == b.e_nuc);
}

TEST_CASE("two-body entries spread over all eight symmetry images") {
  IntegralSet ints =
      parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.25 1 2 1 1\n");
  CHECK(ints.two(0, 1, 0, 0) == doctest::Approx(0.25));
  CHECK(ints.two(1, 0, 0, 0) == doctest::Approx(0.25));
  CHECK(ints.two(0, 0, 0, 1) == doctest::Approx(0.25));
  CHECK(ints.two(0, 0, 1, 0) == doctest::Approx(0.25));
  CHECK(ints.two(1, 1, 0, 0) == doctest::Approx(0.0));
  ints.validate();
}

TEST_CASE("parse errors carry the file name and line number") {
  CHECK_THROWS_WITH_AS(parse_fcidump_text("NORB=2\n", "f"),
                       doctest::Contains("f:1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 3 1 0 0\n", "f"),
      doctest::Contains("f:3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 1 0 0 9\n", "f"),
      doctest::Contains("f:3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n abc 1 1 0 0\n", "f"),
      doctest::Contains("f:3"), std::runtime_error);
  // one-sided index pattern (i, 0, k, l) is not a valid record
  CHECK_THROWS_WITH_AS(
      parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 0 1 1\n", "f"),
      doctest::Contains("f:3"), std::runtime_error);
  CHECK_THROWS_AS(parse_fcidump("/nonexistent/path.fcidump"), std::runtime_error);
}

TEST_CASE("fixtures parse and reproduce their sidecar mean-field energies") {
  for (const char* stem : {"h4_chain_1.0", "h6_chain_1.0", "h8_cube_2.5"}) {
    IntegralSet ints = parse_fcidump(data_path(std::string(stem) + ".fcidump"));
    nlohmann::json meta = sidecar(stem);
    CHECK(ints.n_orb == meta["n_orb"].get<int>());
    CHECK(ints.n_elec == meta["n_elec"].get<int>());
    CHECK(ints.ms2 == meta["ms2"].get<int>());
    CHECK(ints.e_nuc == doctest::Approx(meta["e_nuc"].get<double>()).epsilon(1e-12));
    CHECK(hf_reference_energy(ints) ==
          doctest::Approx(meta["scf_energy"].get<double>()).epsilon(1e-8));
    ints.validate();
  }
}

TEST_CASE("emit then parse is a bit-exact round trip") {
  IntegralSet a = parse_fcidump(data_path("h4_chain_1.0.fcidump"));
  IntegralSet b = parse_fcidump_text(emit_fcidump_text(a), "round-trip");
  CHECK(a.n_orb == b.n_orb);
  CHECK(a.n_elec == b.n_elec);
  CHECK(a.ms2 == b.ms2);
  CHECK(a.e_nuc == b.e_nuc);
  CHECK(a.h == b.h);
  CHECK(a.g == b.g);
}

TEST_CASE("validate rejects a broken symmetry") {
  IntegralSet ints = parse_fcidump_text(kToy, "toy");
  ints.h[0] = 1.0;  // fine, 1x1 stays symmetric
  ints.validate();
  IntegralSet two = parse_fcidump_text("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 1 2 0 0\n");
  two.h[1] = 0.25;  // break h_12 = h_21
  CHECK_THROWS_AS(two.validate(), std::runtime_error);
}

TEST_CASE("the mean-field reference needs a closed shell") {
  CHECK_THROWS_AS(
      hf_reference_energy(parse_fcidump_text("&FCI NORB=2,NELEC=3,MS2=1,\n&END\n 0.0 0 0 0 0\n")),
      std::runtime_error);
}
