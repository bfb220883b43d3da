#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "nhmagic/model.hpp"
#include "oracles.hpp"

using nhmagic::cplx;
using nhmagic::IsingParams;
using nhmagic::XXParams;

namespace {
double max_abs_diff(const oracle::Mat& A, const oracle::Mat& B) {
  return (A - B).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("build_nhti matches the dense Kronecker oracle") {
  for (const IsingParams p : {IsingParams{1.0, 0.7, 0.3, 3}, IsingParams{1.3, 1.1, 0.9, 4},
                              IsingParams{0.8, 2.0, 0.0, 4}}) {
    const auto H = nhmagic::build_nhti(p);
    REQUIRE(H.dim == (std::int64_t(1) << p.L));
    REQUIRE(max_abs_diff(oracle::dense_of(H), oracle::nhti_dense(p)) < 1e-13);
  }
}

TEST_CASE("NHTI is real in the computational basis; gamma -> -gamma transposes it") {
  const IsingParams p{1.0, 1.2, 0.5, 4};
  const auto H = nhmagic::build_nhti(p);
  REQUIRE(H.is_real);
  const oracle::Mat D = oracle::dense_of(H);
  REQUIRE(D.imag().cwiseAbs().maxCoeff() == 0.0);
  IsingParams pm = p;
  pm.gamma = -p.gamma;
  const oracle::Mat Dm = oracle::dense_of(nhmagic::build_nhti(pm));
  REQUIRE(max_abs_diff(Dm, D.transpose()) < 1e-13);
  // gamma = 0 reduces to the Hermitian chain
  IsingParams p0 = p;
  p0.gamma = 0;
  const oracle::Mat D0 = oracle::dense_of(nhmagic::build_nhti(p0));
  REQUIRE(max_abs_diff(D0, D0.adjoint()) < 1e-13);
}

TEST_CASE("build_xx_spin matches the dense Kronecker oracle and is complex symmetric") {
  for (const XXParams p : {XXParams{1.0, 0.5, 0.3, 4}, XXParams{1.2, 0.0, 0.8, 4},
                           XXParams{0.9, 1.1, 0.0, 6}}) {
    const auto H = nhmagic::build_xx_spin(p);
    const oracle::Mat D = oracle::dense_of(H);
    REQUIRE(max_abs_diff(D, oracle::xx_dense(p)) < 1e-13);
    REQUIRE(max_abs_diff(D, D.transpose()) < 1e-13);  // complex symmetric
    REQUIRE(H.is_real == (p.delta == 0.0));
  }
}

TEST_CASE("XX chain conserves total magnetization") {
  const XXParams p{1.0, 0.6, 0.4, 4};
  const auto H = nhmagic::build_xx_spin(p);
  for (std::int64_t r = 0; r < H.dim; ++r)
    for (std::int64_t k = H.row_ptr[r]; k < H.row_ptr[r + 1]; ++k)
      REQUIRE(__builtin_popcountll(r) == __builtin_popcountll(H.col[k]));
}

TEST_CASE("SparseOperator::apply agrees with the dense matrix") {
  const auto H = nhmagic::build_nhti(IsingParams{1.0, 0.9, 0.4, 4});
  const auto psi = oracle::random_state(4, 42);
  const auto got = H.apply(psi);
  const auto want = oracle::apply_dense(oracle::dense_of(H), psi);
  for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(std::abs(got[i] - want[i]) < 1e-13);
  nhmagic::StateVector wrong(8);
  REQUIRE_THROWS_AS(H.apply(wrong), std::invalid_argument);
}

TEST_CASE("xx_band_energies: closed form, signs, and PT-broken momenta") {
  const XXParams p{1.0, 0.5, 0.3, 2};
  // k = 0: +-2 sqrt(J^2 + delta^2 + g^2 - delta^2) = +-2 sqrt(J^2 + g^2)
  const auto [ep0, em0] = nhmagic::xx_band_energies(0.0, p);
  REQUIRE(std::abs(ep0 - cplx(2 * std::sqrt(1.0 + 0.09), 0)) < 1e-13);
  REQUIRE(std::abs(em0 + ep0) < 1e-15);
  // k = pi/2 with delta > g: radicand g^2 - delta^2 < 0, pure-imaginary pair,
  // principal branch has Im > 0
  const auto [epi, emi] = nhmagic::xx_band_energies(std::acos(0.0), p);
  REQUIRE(std::abs(epi.real()) < 1e-13);
  REQUIRE(epi.imag() > 0);
  REQUIRE(std::abs(epi - cplx(0, 2 * std::sqrt(0.25 - 0.09))) < 1e-13);
  // generic k: match the formula directly
  const double k = 0.83;
  const auto [ep, em] = nhmagic::xx_band_energies(k, p);
  const double rad = (p.J * p.J + p.delta * p.delta) * std::cos(k) * std::cos(k) +
                     p.g * p.g - p.delta * p.delta;
  REQUIRE(std::abs(ep - 2.0 * std::sqrt(cplx(rad, 0))) < 1e-13);
}

TEST_CASE("ising_critical_gamma") {
  REQUIRE_THROWS_AS(nhmagic::ising_critical_gamma(0.0, 1.0), std::invalid_argument);
  REQUIRE_FALSE(nhmagic::ising_critical_gamma(0.5, 1.0).has_value());  // h < J: no real solution
  const auto gc = nhmagic::ising_critical_gamma(2.0, 1.0);
  REQUIRE(gc.has_value());
  REQUIRE(std::abs(*gc - std::sqrt(3.0) / 2) < 1e-14);
  // inverse of the effective-field relation: h sqrt(1 - gc^2) = J
  const double h = 1.7;
  const auto g2 = nhmagic::ising_critical_gamma(h, 1.0);
  REQUIRE(std::abs(nhmagic::effective_hermitian_field(h, *g2) - 1.0) < 1e-12);
}

TEST_CASE("effective_hermitian_field") {
  REQUIRE(std::abs(nhmagic::effective_hermitian_field(1.2, 0.5) - 1.2 * std::sqrt(0.75)) < 1e-14);
  REQUIRE(nhmagic::effective_hermitian_field(1.0, 1.0) == 0.0);
  REQUIRE_THROWS_AS(nhmagic::effective_hermitian_field(1.0, 1.0001), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(nhmagic::build_nhti(IsingParams{1.0, 1.0, 0.0, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::build_nhti(IsingParams{0.0, 1.0, 0.0, 4}), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::build_xx_spin(XXParams{1.0, 0.5, 0.3, 5}), std::invalid_argument);
  REQUIRE_THROWS_AS(nhmagic::build_xx_spin(XXParams{-1.0, 0.5, 0.3, 4}), std::invalid_argument);
}
