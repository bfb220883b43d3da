#pragma once
// Metropolis-Hastings estimation of M2, sampling Pauli strings with weight
// proportional to c_P^2. The estimator uses the ratio identity
//   E_{Xi}[c_P^2] = sum_P c_P^4 / sum_P c_P^2,   Xi(P) ~ c_P^2,
// so M2 = -log2(mean of sampled c_P^2); Xi only needs to be known up to
// normalization.
//
// Proposal kernel: with probability (1 - pair_move_prob) replace the letter
// at one uniformly chosen site with one of the other three letters uniformly
// (single-site substitution); with probability pair_move_prob replace the
// letter pair on a uniformly chosen adjacent bond with one of the 15
// alternatives uniformly. Both moves are symmetric, so accepting with
// min(1, c'^2/c^2) satisfies detailed balance. The pair move is required for
// irreducibility: states with a real amplitude vector (the entire
// PT-symmetric regime of the Ising chain) have c_P = 0 identically for every
// string with an odd number of Y letters, and single-site moves alone can
// never cross between the resulting even-#Y classes.
//
// RNG: std::mt19937_64, one independent stream per chain derived from the
// master seed via splitmix64. All bounded draws use hand-rolled mappers so
// streams are bit-exact across standard libraries.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "eigensolver.hpp"  // detail::splitmix64
#include "magic.hpp"
#include "pauli.hpp"
#include "rdm.hpp"

namespace nhmagic {

struct SamplerConfig {
  int chains = 4;
  std::int64_t steps = 10000;       // total proposals per chain (burn-in included)
  std::int64_t burn_in = 1000;      // discarded prefix; default steps/10 via normalized()
  std::int64_t thin = 0;            // sampling stride; 0 = default 2 * region length
  std::uint64_t seed = 0x6d616769;  // master seed
  double pair_move_prob = 0.25;     // mixture weight of the adjacent-pair move

  SamplerConfig normalized(int region_len) const {
    SamplerConfig c = *this;
    if (c.thin <= 0) c.thin = 2 * region_len;
    if (c.burn_in < 0) c.burn_in = c.steps / 10;
    if (c.chains < 2) throw std::invalid_argument("SamplerConfig: chains >= 2 required");
    if (c.steps < 1) throw std::invalid_argument("SamplerConfig: steps >= 1 required");
    if (c.burn_in >= c.steps) throw std::invalid_argument("SamplerConfig: burn-in must be < steps");
    if (c.pair_move_prob < 0 || c.pair_move_prob > 1)
      throw std::invalid_argument("SamplerConfig: pair_move_prob in [0,1]");
    return c;
  }
};

struct MagicEstimate {
  double m2 = 0;
  double stderr_ = 0;
  std::vector<double> per_chain_means;
  double acceptance_rate = 0;
};

namespace detail {

/// Bit-portable uniform draws on top of a raw 64-bit generator.
struct ChainRng {
  std::mt19937_64 gen;

  explicit ChainRng(std::uint64_t master, std::uint64_t chain)
      : gen(splitmix64(master ^ splitmix64(chain + 1))) {}

  double uniform01() { return (gen() >> 11) * 0x1p-53; }  // [0, 1)

  std::uint64_t below(std::uint64_t n) {  // uniform in [0, n), multiply-shift
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen()) * n) >> 64);
  }
};

}  // namespace detail

/// One MH proposal/accept step. `weight` evaluates c_P^2 for the candidate;
/// `cur_w` caches c_P^2 of the current string and is updated on acceptance.
template <class WeightFn>
bool metropolis_step(PauliString& current, double& cur_w, WeightFn&& weight,
                     detail::ChainRng& rng, double pair_move_prob) {
  const int l = current.length;
  PauliString prop = current;
  if (l >= 2 && rng.uniform01() < pair_move_prob) {
    const int bond = static_cast<int>(rng.below(l - 1));
    const int ab = (prop.letter(bond) << 2) | prop.letter(bond + 1);
    int r = static_cast<int>(rng.below(15));
    if (r >= ab) ++r;  // skip the current pair
    prop.set_letter(bond, r >> 2);
    prop.set_letter(bond + 1, r & 3);
  } else {
    const int site = static_cast<int>(rng.below(l));
    const int d = 1 + static_cast<int>(rng.below(3));
    prop.set_letter(site, (prop.letter(site) + d) & 3);
  }
  const double w = weight(prop);
  bool accept;
  if (cur_w == 0.0) {
    accept = w > 0.0;  // zero-weight start: move to any supported string
  } else {
    accept = rng.uniform01() < std::min(1.0, w / cur_w);
  }
  if (accept) {
    current = prop;
    cur_w = w;
  }
  return accept;
}

/// MH estimate of the region's M2. For the full chain the weight is the
/// matrix-free pure-state expectation; for a proper subregion the reduced
/// density matrix is formed once and c_P = Tr(rho_A P).
inline MagicEstimate estimate_m2(const StateVector& psi, int first, int len,
                                 const SamplerConfig& cfg_in, int threads = 0) {
  const std::uint64_t dim = psi.size();
  int L = 0;
  while ((std::uint64_t(1) << L) < dim) ++L;
  if (len < 1 || first < 0 || first + len > L)
    throw std::invalid_argument("estimate_m2: region out of range");
  const SamplerConfig cfg = cfg_in.normalized(len);

  StateVector psin = psi;
  normalize(psin);
  const bool full = (len == L && first == 0);
  Eigen::MatrixXcd rhoA;
  if (!full) rhoA = reduced_density_matrix(psin, first, len).rho;

  auto weight = [&](const PauliString& P) -> double {
    double c;
    if (full) {
      c = pauli_expectation(P, psin, 0);
    } else {
      // Tr(rho P) = sum_a rho[a ^ xmask, a] * phase(a)
      const auto m = detail::make_masks(P, 0);
      const std::uint64_t dA = std::uint64_t(1) << len;
      cplx acc(0, 0);
      for (std::uint64_t a = 0; a < dA; ++a)
        acc += rhoA(a ^ m.xmask, a) * detail::pauli_phase(m, a);
      c = acc.real();
    }
    return c * c;
  };

  std::vector<double> chain_mean(cfg.chains, 0.0);
  std::vector<double> chain_acc(cfg.chains, 0.0);
  auto run_chain = [&](int ci) {
    detail::ChainRng rng(cfg.seed, static_cast<std::uint64_t>(ci));
    PauliString cur(len, 0);  // identity string: c = Tr rho = 1 always
    double cur_w = 1.0;
    std::int64_t accepted = 0, kept = 0;
    double sum = 0;
    for (std::int64_t t = 0; t < cfg.steps; ++t) {
      if (metropolis_step(cur, cur_w, weight, rng, cfg.pair_move_prob)) ++accepted;
      if (t >= cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) {
        sum += cur_w;
        ++kept;
      }
    }
    chain_mean[ci] = sum / static_cast<double>(kept);
    chain_acc[ci] = static_cast<double>(accepted) / static_cast<double>(cfg.steps);
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (nthreads == 1 || cfg.chains == 1) {
    for (int ci = 0; ci < cfg.chains; ++ci) run_chain(ci);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nt = std::min(nthreads, cfg.chains);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          const int ci = next.fetch_add(1);
          if (ci >= cfg.chains) return;
          run_chain(ci);
        }
      });
    for (auto& th : pool) th.join();
  }

  MagicEstimate est;
  est.per_chain_means = chain_mean;
  double mbar = 0;
  for (double m : chain_mean) mbar += m;
  mbar /= cfg.chains;
  double var = 0;
  for (double m : chain_mean) var += (m - mbar) * (m - mbar);
  var /= (cfg.chains - 1);
  const double se_mean = std::sqrt(var / cfg.chains);
  est.m2 = -std::log2(mbar) + 0.0;  // may be non-finite if the mean underflows; + 0.0 kills -0
  est.stderr_ = (mbar > 0) ? se_mean / (mbar * std::log(2.0)) : 0.0;
  double acc = 0;
  for (double a : chain_acc) acc += a;
  est.acceptance_rate = acc / cfg.chains;
  return est;
}

}  // namespace nhmagic
