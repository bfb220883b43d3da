#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "nhmagic/kspace.hpp"
#include "nhmagic/model.hpp"
#include "oracles.hpp"

using nhmagic::cplx;
using nhmagic::XXParams;

namespace {
constexpr double kPi = std::numbers::pi;

double enumerated_sector_magic(cplx alpha, cplx beta) {
  // Direct 2-qubit enumeration over the embedded state (0, alpha, beta, 0).
  nhmagic::StateVector psi = {cplx(0, 0), alpha, beta, cplx(0, 0)};
  double s2 = 0, s4 = 0;
  for (std::uint64_t code = 0; code < 16; ++code) {
    const double c = nhmagic::pauli_expectation(nhmagic::PauliString(2, code), psi);
    s2 += c * c;
    s4 += c * c * c * c;
  }
  return -std::log2(s4 / s2);
}
}  // namespace

TEST_CASE("hk_matrix reproduces the two-band Bloch Hamiltonian") {
  XXParams p;
  p.J = 1.0;
  p.delta = 2.0;
  p.g = 2.0;
  const auto H = nhmagic::hk_matrix(kPi / 2, p);
  REQUIRE(std::abs(H(0, 0)) < 1e-14);
  REQUIRE(std::abs(H(1, 1)) < 1e-14);
  REQUIRE(std::abs(H(0, 1) - cplx(4.0 * p.g, 0)) < 1e-14);  // 2(g + delta) = 4g on the line
  REQUIRE(std::abs(H(1, 0)) < 1e-14);

  p.delta = 0.0;
  p.g = 0.0;
  const auto D = nhmagic::hk_matrix(0.3, p);
  REQUIRE(std::abs(D(0, 1)) < 1e-14);
  REQUIRE(std::abs(D(1, 0)) < 1e-14);
  REQUIRE(std::abs(D(0, 0) - cplx(2 * std::cos(0.3), 0)) < 1e-14);

  // Eigenvalues of hk match the band formula at a generic point.
  p.J = 1.3;
  p.delta = 0.7;
  p.g = 0.4;
  const double k = 1.1;
  const auto Hk = nhmagic::hk_matrix(k, p);
  const auto [em, ep] = nhmagic::xx_band_energies(k, p);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(Hk);
  std::vector<cplx> got{es.eigenvalues()(0), es.eigenvalues()(1)};
  std::vector<cplx> want{em, ep};
  auto by_re = [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(got.begin(), got.end(), by_re);
  std::sort(want.begin(), want.end(), by_re);
  REQUIRE(std::abs(got[0] - want[0]) < 1e-12);
  REQUIRE(std::abs(got[1] - want[1]) < 1e-12);
}

TEST_CASE("KGrid covers [0, pi) and hits pi/2 when L % 4 == 0") {
  REQUIRE_THROWS_AS(nhmagic::KGrid(1), std::invalid_argument);
  const nhmagic::KGrid grid(8);
  REQUIRE(grid.points.size() == 8);
  REQUIRE(grid.points.front() == 0.0);
  for (std::size_t i = 1; i < grid.points.size(); ++i)
    REQUIRE(grid.points[i] > grid.points[i - 1]);
  REQUIRE(grid.points.back() < kPi);
  bool has_half = false;
  for (double k : grid.points)
    if (std::abs(k - kPi / 2) < 1e-15) has_half = true;
  REQUIRE(has_half);
}

TEST_CASE("sector ground state: defective point, diagonal limit, PT-broken branch") {
  XXParams p;
  p.J = 1.0;
  p.delta = 2.0;
  p.g = 2.0;
  const auto ep = nhmagic::sector_ground_state(kPi / 2, p);
  REQUIRE(ep.defective);
  // Jordan-block kernel vector (1, 0) up to the fp residue of cos(pi/2)
  REQUIRE(std::abs(std::abs(ep.alpha) - 1.0) < 1e-14);
  REQUIRE(std::abs(ep.beta) < 1e-14);
  REQUIRE(std::abs(ep.energy) < 1e-12);

  p.delta = 0.0;
  p.g = 0.0;
  const auto diag = nhmagic::sector_ground_state(0.4, p);
  REQUIRE_FALSE(diag.defective);
  REQUIRE(std::abs(diag.energy - cplx(-2 * std::cos(0.4), 0)) < 1e-12);
  REQUIRE(std::abs(std::abs(diag.beta) - 1.0) < 1e-12);  // lower band is the (1,1) entry
  REQUIRE(std::abs(diag.alpha) < 1e-12);

  // Zero matrix at g = delta = 0, k = pi/2: degenerate but diagonalizable.
  const auto zero = nhmagic::sector_ground_state(kPi / 2, p);
  REQUIRE_FALSE(zero.defective);
  REQUIRE(std::abs(zero.energy) < 1e-14);

  // PT-broken sector: delta > g makes the pair complex; pick Im > 0.
  p.delta = 1.5;
  p.g = 0.2;
  const auto broken = nhmagic::sector_ground_state(kPi / 2 - 0.01, p);
  REQUIRE(broken.tie);
  REQUIRE(broken.energy.imag() > 0);
}

TEST_CASE("sector eigenvector is real up to a global phase on the PT line") {
  XXParams p;
  p.J = 1.0;
  p.delta = 2.0;
  p.g = 2.0;
  const auto s = nhmagic::sector_ground_state(1.0, p);
  REQUIRE_FALSE(s.defective);
  // Rotate so alpha is real and positive; beta must then be real too.
  const cplx phase = std::abs(s.alpha) > 0 ? std::conj(s.alpha) / std::abs(s.alpha) : cplx(1, 0);
  REQUIRE(std::abs(std::imag(s.beta * phase)) < 1e-12);
  // Residual of the eigen-equation.
  const auto H = nhmagic::hk_matrix(1.0, p);
  Eigen::Vector2cd v(s.alpha, s.beta);
  REQUIRE(((H * v) - s.energy * v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sector_magic agrees with enumeration and the closed form") {
  using nhmagic::SectorState;
  auto magic_of = [](cplx a, cplx b) {
    SectorState s;
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    s.alpha = a / n;
    s.beta = b / n;
    return nhmagic::sector_magic(s);
  };
  REQUIRE(std::abs(magic_of(cplx(1, 0), cplx(0, 0))) < 1e-12);
  const double r = 1 / std::sqrt(2.0);
  REQUIRE(std::abs(magic_of(cplx(r, 0), cplx(r, 0))) < 1e-12);
  const double c8 = std::cos(kPi / 8), s8 = std::sin(kPi / 8);
  REQUIRE(std::abs(magic_of(cplx(c8, 0), cplx(s8, 0)) - std::log2(4.0 / 3.0)) < 1e-12);

  // Random real amplitudes: closed form -log2((1 + d^4 + s^4)/2).
  for (const auto& [a, b] : {std::pair{0.91, 0.41}, {0.3, -0.95}, {-0.77, 0.63}}) {
    const double n = std::sqrt(a * a + b * b);
    const double ar = a / n, br = b / n;
    const double d = ar * ar - br * br, s = 2 * ar * br;
    const double closed = -std::log2((1 + d * d * d * d + s * s * s * s) / 2);
    REQUIRE(std::abs(magic_of(cplx(ar, 0), cplx(br, 0)) - closed) < 1e-12);
    REQUIRE(std::abs(enumerated_sector_magic(cplx(ar, 0), cplx(br, 0)) - closed) < 1e-12);
  }

  // Global phase and complex conjugation leave the value unchanged.
  const cplx a0(0.6, 0), b0(0.8, 0);
  const double base = magic_of(a0, b0);
  const cplx ph = std::polar(1.0, 1.234);
  REQUIRE(std::abs(magic_of(a0 * ph, b0 * ph) - base) < 1e-12);
  REQUIRE(std::abs(magic_of(std::conj(a0), std::conj(b0)) - base) < 1e-12);

  SectorState bad;
  bad.alpha = cplx(2, 0);
  bad.beta = cplx(0, 0);
  REQUIRE_THROWS_AS(nhmagic::sector_magic(bad), std::invalid_argument);
}

TEST_CASE("total magic density: free limit, saturation limit, grid convergence") {
  XXParams p;
  p.J = 1.0;
  p.delta = 0.0;
  p.g = 0.0;
  REQUIRE(std::abs(nhmagic::total_magic_density(p, 64)) < 1e-12);

  p.delta = 50.0;
  p.g = 50.0;
  const double sat = nhmagic::total_magic_density(p, 800);
  REQUIRE(std::abs(sat - nhmagic::exceptional_line_limit()) < 1e-3);

  p.delta = 0.5;
  p.g = 1.2;
  const double coarse = nhmagic::total_magic_density(p, 400);
  const double fine = nhmagic::total_magic_density(p, 800);
  REQUIRE(std::abs(coarse - fine) < 1e-3);
}

TEST_CASE("defectivity appears exactly on the exceptional line at k = pi/2") {
  XXParams p;
  p.J = 1.0;
  p.delta = 2.0;
  p.g = 2.0;
  int defective_count = 0;
  for (const auto k : nhmagic::KGrid(8).points) {
    const auto s = nhmagic::sector_ground_state(k, p);
    if (s.defective) {
      ++defective_count;
      REQUIRE(std::abs(k - kPi / 2) < 1e-15);
    }
  }
  REQUIRE(defective_count == 1);

  p.g = 2.2;  // off the line: nothing defective
  for (const auto k : nhmagic::KGrid(8).points)
    REQUIRE_FALSE(nhmagic::sector_ground_state(k, p).defective);
}

TEST_CASE("exceptional_line_limit matches quadrature of the closed-form integrand") {
  // Deep on the line the occupied sector is (cos t, sin t)-like with t = k, so the
  // density tends to -(1/pi) * Int_0^pi log2((1 + sin^4(2t) + cos^4(2t))/2)/2 ... the
  // compact check: average of -log2((1 + d^4 + s^4)/2) with d = cos(2k), s = sin(2k).
  auto integrand = [](double k) {
    const double d = std::cos(2 * k), s = std::sin(2 * k);
    return -std::log2((1 + d * d * d * d + s * s * s * s) / 2);
  };
  const double quad = oracle::trapezoid(integrand, 0.0, kPi, 1000000) / kPi;
  REQUIRE(std::abs(quad - nhmagic::exceptional_line_limit()) < 1e-9);
  REQUIRE(std::abs(nhmagic::exceptional_line_limit() - std::log2(112.0 - 64.0 * std::sqrt(3.0))) <
          1e-15);
}

TEST_CASE("momentum_resolved_magic tabulates one entry per grid point") {
  XXParams p;
  p.J = 1.0;
  p.delta = 2.0;
  p.g = 2.0;
  const auto table = nhmagic::momentum_resolved_magic(p, 12);
  REQUIRE(table.size() == 12);
  const nhmagic::KGrid grid(12);
  double mean = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    REQUIRE(table[i].first == grid.points[i]);
    mean += table[i].second;
  }
  mean /= static_cast<double>(table.size());
  REQUIRE(std::abs(mean - nhmagic::total_magic_density(p, 12)) < 1e-12);

  // Second zero of the sector magic below pi/2 on the g = delta line: bracket the
  // sign change of d = |alpha|^2 - |beta|^2 and bisect.
  auto dval = [&](double k) {
    const auto s = nhmagic::sector_ground_state(k, p);
    const cplx ph = std::conj(s.alpha) / std::abs(s.alpha);
    const double ar = std::real(s.alpha * ph), br = std::real(s.beta * ph);
    return ar * ar - br * br;
  };
  double lo = 0.1, hi = 1.5;
  REQUIRE(dval(lo) * dval(hi) < 0);
  for (int it = 0; it < 80; ++it) {
    const double mid = (lo + hi) / 2;
    if (dval(lo) * dval(mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  const double kstar = (lo + hi) / 2;
  REQUIRE(kstar < kPi / 2);
  const auto szero = nhmagic::sector_ground_state(kstar, p);
  REQUIRE(nhmagic::sector_magic(szero) < 1e-10);
}
