#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <cstdint>

#include "nhmagic/pauli.hpp"
#include "oracles.hpp"

using nhmagic::cplx;
using nhmagic::PauliString;
using nhmagic::StateVector;

TEST_CASE("pauli_parse / pauli_render round trip") {
  for (const char* s : {"I", "X", "Y", "Z", "XIZY", "XXXXXXXX", "IZYXIZYXIZYX"}) {
    const PauliString p = nhmagic::pauli_parse(s);
    REQUIRE(nhmagic::pauli_render(p) == s);
    REQUIRE(p.length == static_cast<int>(std::string(s).size()));
  }
  REQUIRE_THROWS_AS(nhmagic::pauli_parse(""), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::pauli_parse("XQ"), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::pauli_parse("x"), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::pauli_parse(std::string(33, 'X')), std::invalid_argument);
  REQUIRE_THROWS_AS(PauliString(2, 0xFFu << 4), std::invalid_argument);  // bits beyond length
}

TEST_CASE("single-site convention pins: sz|0> = -|0>, sy = [[0,i],[-i,0]]") {
  StateVector zero = {cplx(1, 0), cplx(0, 0)};
  const StateVector z = nhmagic::apply_pauli(nhmagic::pauli_parse("Z"), zero);
  REQUIRE(std::abs(z[0] - cplx(-1, 0)) < 1e-15);
  REQUIRE(std::abs(z[1]) < 1e-15);
  const StateVector x = nhmagic::apply_pauli(nhmagic::pauli_parse("X"), zero);
  REQUIRE(std::abs(x[0]) < 1e-15);
  REQUIRE(std::abs(x[1] - cplx(1, 0)) < 1e-15);
  const StateVector y = nhmagic::apply_pauli(nhmagic::pauli_parse("Y"), zero);
  REQUIRE(std::abs(y[0]) < 1e-15);
  REQUIRE(std::abs(y[1] - cplx(0, -1)) < 1e-15);  // Y|0> = -i|1>
}

TEST_CASE("site 0 is the least-significant bit") {
  // "XI" acts with X on site 0: |00> (index 0) -> |01> (index 1).
  StateVector e0 = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
  const StateVector a = nhmagic::apply_pauli(nhmagic::pauli_parse("XI"), e0);
  REQUIRE(std::abs(a[1] - cplx(1, 0)) < 1e-15);
  const StateVector b = nhmagic::apply_pauli(nhmagic::pauli_parse("IX"), e0);
  REQUIRE(std::abs(b[2] - cplx(1, 0)) < 1e-15);
}

TEST_CASE("apply_pauli matches the dense Kronecker oracle") {
  for (int L = 1; L <= 4; ++L) {
    const StateVector psi = oracle::random_state(L, 991 + L);
    const std::uint64_t ncodes = std::uint64_t(1) << (2 * L);
    for (std::uint64_t code = 0; code < ncodes; ++code) {
      const PauliString P(L, code);
      const StateVector got = nhmagic::apply_pauli(P, psi);
      const StateVector want = oracle::apply_dense(oracle::pauli_dense(P, L), psi);
      double diff = 0;
      for (std::size_t i = 0; i < got.size(); ++i) diff = std::max(diff, std::abs(got[i] - want[i]));
      REQUIRE(diff < 1e-13);
    }
  }
}

TEST_CASE("apply_pauli with a site offset matches the embedded dense oracle") {
  const int L = 4;
  const StateVector psi = oracle::random_state(L, 1234);
  const PauliString P = nhmagic::pauli_parse("YX");
  for (int first = 0; first + P.length <= L; ++first) {
    const StateVector got = nhmagic::apply_pauli(P, psi, first);
    const StateVector want = oracle::apply_dense(oracle::pauli_dense(P, L, first), psi);
    double diff = 0;
    for (std::size_t i = 0; i < got.size(); ++i) diff = std::max(diff, std::abs(got[i] - want[i]));
    REQUIRE(diff < 1e-13);
  }
}

TEST_CASE("Pauli strings are involutions: P(P psi) = psi") {
  const int L = 5;
  const StateVector psi = oracle::random_state(L, 77);
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 50; ++rep) {
    const PauliString P(L, gen() & ((std::uint64_t(1) << (2 * L)) - 1));
    const StateVector twice = nhmagic::apply_pauli(P, nhmagic::apply_pauli(P, psi));
    double diff = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) diff = std::max(diff, std::abs(twice[i] - psi[i]));
    REQUIRE(diff < 1e-13);
  }
}

TEST_CASE("pauli_expectation matches the dense oracle and is real") {
  for (int L = 1; L <= 4; ++L) {
    const StateVector psi = oracle::random_state(L, 31 * L);
    const oracle::Vec v = oracle::to_vec(psi);
    const std::uint64_t ncodes = std::uint64_t(1) << (2 * L);
    for (std::uint64_t code = 0; code < ncodes; ++code) {
      const PauliString P(L, code);
      const double got = nhmagic::pauli_expectation(P, psi);
      const cplx want = v.adjoint() * oracle::pauli_dense(P, L) * v;
      REQUIRE(std::abs(want.imag()) < 1e-12);
      REQUIRE(std::abs(got - want.real()) < 1e-12);
    }
  }
}

TEST_CASE("Parseval identity: sum_P <P>^2 = 2^L for a normalized pure state") {
  for (int L = 1; L <= 3; ++L) {
    const StateVector psi = oracle::random_state(L, 4000 + L);
    double s = 0;
    const std::uint64_t ncodes = std::uint64_t(1) << (2 * L);
    for (std::uint64_t code = 0; code < ncodes; ++code) {
      const double c = nhmagic::pauli_expectation(PauliString(L, code), psi);
      s += c * c;
    }
    REQUIRE(std::abs(s - static_cast<double>(std::uint64_t(1) << L)) < 1e-10);
  }
}

TEST_CASE("argument validation") {
  const StateVector psi = oracle::random_state(2, 1);
  REQUIRE_THROWS_AS(nhmagic::pauli_expectation(nhmagic::pauli_parse("XXX"), psi),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::apply_pauli(nhmagic::pauli_parse("X"), psi, 2),
                    std::invalid_argument);
  StateVector bad(3, cplx(1, 0));  // not a power-of-two dimension
  REQUIRE_THROWS_AS(nhmagic::pauli_expectation(nhmagic::pauli_parse("X"), bad),
                    std::invalid_argument);
  StateVector zero4(4, cplx(0, 0));
  REQUIRE_THROWS_AS(nhmagic::normalize(zero4), std::invalid_argument);
}
