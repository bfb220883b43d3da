#pragma once
// Momentum-space treatment of the staggered XX chain. Each momentum k in
// [0, pi) carries an independent 2x2 non-Hermitian block
//   H_k = 2 [[ J cos k,  g + d sin k ],
//            [ g - d sin k, -J cos k ]]
// acting on {|01>_k, |10>_k}. The ground state is the tensor product over
// sectors of the minimal-Re(E) right eigenvector, so M2 is additive: the
// total density is the grid average of per-sector two-qubit magic. On the
// exceptional line g = d the k = pi/2 block becomes a Jordan block (defective)
// and the cell's magic vanishes; for g = d -> infinity the density saturates
// at log2(112 - 64*sqrt(3)) ~= 0.2001.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magic.hpp"
#include "model.hpp"
#include "pauli.hpp"

namespace nhmagic {

struct SectorState {
  double k = 0;
  cplx alpha{0, 0};  // amplitude of |01>_k
  cplx beta{0, 0};   // amplitude of |10>_k
  cplx energy{0, 0};
  bool defective = false;
  bool tie = false;  // Re(E) degenerate (pure-imaginary pair); Im>0 branch taken
};

struct KGrid {
  int L = 0;
  std::vector<double> points;  // k_n = pi*n/L, n = 0..L-1 (endpoint pi excluded)

  explicit KGrid(int L_) : L(L_) {
    if (L < 2) throw std::invalid_argument("KGrid: L >= 2 required");
    points.reserve(L);
    for (int n = 0; n < L; ++n) points.push_back(std::numbers::pi * n / L);
  }
};

inline Eigen::Matrix2cd hk_matrix(double k, const XXParams& p) {
  p.validate();
  Eigen::Matrix2cd H;
  H << cplx(2 * p.J * std::cos(k), 0), cplx(2 * (p.g + p.delta * std::sin(k)), 0),
      cplx(2 * (p.g - p.delta * std::sin(k)), 0), cplx(-2 * p.J * std::cos(k), 0);
  return H;
}

namespace detail {

/// Null vector of a (near-)singular 2x2 matrix: the row with the larger
/// magnitude defines the direction orthogonal to it. Returns (0,0) only for
/// the zero matrix.
inline Eigen::Vector2cd nullvec2(const Eigen::Matrix2cd& B) {
  const double r0 = std::abs(B(0, 0)) + std::abs(B(0, 1));
  const double r1 = std::abs(B(1, 0)) + std::abs(B(1, 1));
  Eigen::Vector2cd v;
  if (r0 >= r1)
    v << B(0, 1), -B(0, 0);
  else
    v << B(1, 1), -B(1, 0);
  return v;
}

}  // namespace detail

/// Right eigenvector of H_k with minimal Re(E). Pure-imaginary eigenvalue
/// pairs (PT-broken sectors) tie in Re and resolve to the Im(E) > 0 branch.
/// A vanishing discriminant marks an exceptional (defective) sector; the
/// unique eigenvector is returned with defective = true.
inline SectorState sector_ground_state(double k, const XXParams& p) {
  const Eigen::Matrix2cd H = hk_matrix(k, p);
  const cplx tr = H(0, 0) + H(1, 1);
  const cplx det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
  const cplx disc = tr * tr - 4.0 * det;
  const double hmax =
      std::max(std::max(std::abs(H(0, 0)), std::abs(H(0, 1))),
               std::max(std::abs(H(1, 0)), std::abs(H(1, 1))));
  const double scale2 = std::max(1.0, hmax * hmax);

  SectorState s;
  s.k = k;
  if (std::abs(disc) < 1e-12 * scale2) {
    const cplx E = 0.5 * tr;
    const Eigen::Matrix2cd B = H - E * Eigen::Matrix2cd::Identity();
    const double bmax = std::max(std::max(std::abs(B(0, 0)), std::abs(B(0, 1))),
                                 std::max(std::abs(B(1, 0)), std::abs(B(1, 1))));
    s.energy = E;
    if (bmax <= 1e-14 * std::max(1.0, hmax)) {
      // Degenerate but diagonalizable (e.g. H = 0 at g = delta = 0, k = pi/2):
      // not an exceptional point; any basis vector is an eigenvector.
      s.alpha = 1;
      s.beta = 0;
      return s;
    }
    s.defective = true;
    const Eigen::Vector2cd v = detail::nullvec2(B).normalized();
    s.alpha = v(0);
    s.beta = v(1);
    return s;
  }

  const auto [ep, em] = xx_band_energies(k, p);
  cplx E;
  const double re_gap = std::abs(ep.real() - em.real());
  if (re_gap <= 1e-12 * std::max(1.0, hmax)) {
    s.tie = true;
    E = (ep.imag() >= em.imag()) ? ep : em;  // Im > 0 branch
  } else {
    E = (ep.real() < em.real()) ? ep : em;
  }
  s.energy = E;
  const Eigen::Vector2cd v =
      detail::nullvec2(H - E * Eigen::Matrix2cd::Identity()).normalized();
  s.alpha = v(0);
  s.beta = v(1);
  return s;
}

/// Exact two-qubit SRE of alpha|01> + beta|10> by enumeration of the 16
/// two-qubit Pauli strings (delegates to `magic`).
inline double sector_magic(const SectorState& s) {
  StateVector psi(4, cplx(0, 0));
  psi[1] = s.alpha;  // |01>: site 0 occupied in the LSB convention
  psi[2] = s.beta;   // |10>
  const double n2 = norm2(psi);
  if (std::abs(n2 - 1.0) > 1e-12)
    throw std::invalid_argument("sector_magic: state not normalized");
  return sre2_pure(psi, 2, 1);
}

/// Per-momentum sector magic over the grid.
inline std::vector<std::pair<double, double>> momentum_resolved_magic(
    const XXParams& p, const KGrid& grid) {
  std::vector<std::pair<double, double>> table;
  table.reserve(grid.points.size());
  for (double k : grid.points)
    table.emplace_back(k, sector_magic(sector_ground_state(k, p)));
  return table;
}

/// Grid average of sector magic: M2 density of the momentum-space ground
/// state (M2 is additive over tensor-product sectors, one site pair per k).
inline double total_magic_density(const XXParams& p, const KGrid& grid) {
  double sum = 0;
  for (double k : grid.points) sum += sector_magic(sector_ground_state(k, p));
  return sum / static_cast<double>(grid.points.size());
}

/// Mesh-size conveniences for the two grid walkers above.
inline std::vector<std::pair<double, double>> momentum_resolved_magic(const XXParams& p, int L) {
  return momentum_resolved_magic(p, KGrid(L));
}
inline double total_magic_density(const XXParams& p, int L) {
  return total_magic_density(p, KGrid(L));
}

/// Closed-form saturation value of the magic density on the exceptional line
/// g = delta -> infinity: -(1/pi) Int_0^pi log2((1 + sin^4 k + cos^4 k)/2) dk
/// = log2(112 - 64*sqrt(3)).
inline double exceptional_line_limit() { return std::log2(112.0 - 64.0 * std::sqrt(3.0)); }

}  // namespace nhmagic
