#pragma once
// Exact stabilizer 2-Renyi entropy:
//   M2 = -log2( sum_P c_P^4 / sum_P c_P^2 ),  c_P = Tr(rho P).
// Purity-normalized, so it reduces to the standard pure-state stabilizer
// Renyi entropy (sum c^2 = 2^l for pure states) and vanishes exactly on
// stabilizer states.
//
// Two exact paths:
//  - pauli_coefficients(rho): all 4^l coefficients by an in-place per-site
//    mode transform on the dense rho, O(l 4^l); no Pauli matrix is formed.
//  - sre2_pure(psi): full-chain pure states without forming rho, splitting
//    the chain into A (low bits) and B (high bits): for each of the 4^|A|
//    strings on A, a single Gram-type matrix on B yields all c_{P_A x Q}
//    through the same mode transform.

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pauli.hpp"
#include "rdm.hpp"

namespace nhmagic {

/// All 4^l Pauli coefficients of a region, indexed by packed code
/// (letter of site j in bits [2j, 2j+1], site 0 least significant).
struct PauliSpectrum {
  int len = 0;
  std::vector<double> c;  // size 4^len
};

namespace detail {

/// In-place per-site mode transform turning rho (flattened row-major as
/// buf[r * 2^l + c]) into Tr(rho P) for every packed string P. After the
/// j-th pass, bit j+l of the index carries the high letter bit and bit j the
/// low letter bit of site j; a final repack produces the packed-code order.
inline void pauli_mode_transform(std::vector<cplx>& buf, int l) {
  const std::uint64_t n = buf.size();
  for (int j = 0; j < l; ++j) {
    const std::uint64_t ob = std::uint64_t(1) << j;        // column bit of site j
    const std::uint64_t ab = std::uint64_t(1) << (j + l);  // row bit of site j
    for (std::uint64_t base = 0; base < n; ++base) {
      if (base & (ob | ab)) continue;
      const cplx v00 = buf[base];
      const cplx v01 = buf[base | ob];
      const cplx v10 = buf[base | ab];
      const cplx v11 = buf[base | ab | ob];
      buf[base] = v00 + v11;                                  // I  -> (0,0)
      buf[base | ob] = v01 + v10;                             // X  -> (0,1)
      buf[base | ab] = cplx(0, 1) * (v10 - v01);              // Y  -> (1,0)
      buf[base | ab | ob] = v11 - v00;                        // Z  -> (1,1)
    }
  }
}

/// Letter code of site j after the transform: hi bit at j+l, lo bit at j.
/// (hi, lo) = (0,0) I, (0,1) X, (1,0) Y, (1,1) Z -- matching codes 0..3.
inline std::uint64_t repack_code(std::uint64_t idx, int l) {
  std::uint64_t code = 0;
  for (int j = 0; j < l; ++j) {
    const std::uint64_t hi = (idx >> (j + l)) & 1;
    const std::uint64_t lo = (idx >> j) & 1;
    code |= ((hi << 1) | lo) << (2 * j);
  }
  return code;
}

}  // namespace detail

/// All 4^l coefficients c_P = Tr(rho P) for a region of length l <= cap.
inline PauliSpectrum pauli_coefficients(const ReducedDensityMatrix& r, int cap = 8) {
  const int l = r.len;
  if (l > cap)
    throw std::invalid_argument("pauli_coefficients: region exceeds enumeration cap (use the sampler)");
  const std::uint64_t dA = std::uint64_t(1) << l;
  std::vector<cplx> buf(dA * dA);
  for (std::uint64_t a = 0; a < dA; ++a)
    for (std::uint64_t b = 0; b < dA; ++b) buf[a * dA + b] = r.rho(a, b);
  detail::pauli_mode_transform(buf, l);

  PauliSpectrum spec;
  spec.len = l;
  spec.c.assign(dA * dA, 0.0);
  double max_imag = 0;
  for (std::uint64_t idx = 0; idx < dA * dA; ++idx) {
    max_imag = std::max(max_imag, std::abs(buf[idx].imag()));
    spec.c[detail::repack_code(idx, l)] = buf[idx].real();
  }
  if (max_imag > 1e-8)
    throw std::runtime_error("pauli_coefficients: |Im c_P| > 1e-8 (numerics bug)");
  return spec;
}

/// M2 from a coefficient table (purity-normalized convention).
inline double sre2(const PauliSpectrum& spec) {
  double s2 = 0, s4 = 0;
  for (double c : spec.c) {
    const double c2 = c * c;
    s2 += c2;
    s4 += c2 * c2;
  }
  if (s2 <= 0) throw std::invalid_argument("sre2: empty spectrum");
  return -std::log2(s4 / s2) + 0.0;  // + 0.0: never return a negative zero
}

/// Convenience: exact M2 of a reduced density matrix.
inline double sre2(const ReducedDensityMatrix& r, int cap = 8) {
  return sre2(pauli_coefficients(r, cap));
}

/// Exact full-chain M2 of a pure state, without forming rho. The overall
/// scale of psi drops out (the value is that of the normalized state).
/// Cost ~ 4^{ceil(L/2)} matrix products on the 2^{floor(L/2)} complement;
/// practical through L = 14. Deterministic regardless of thread count.
inline double sre2_pure(const StateVector& psi, int cap = 12, int threads = 0) {
  const std::uint64_t dim = psi.size();
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("sre2_pure: dimension not a power of two");
  const double n2 = norm2(psi);
  if (!(n2 > 0)) throw std::invalid_argument("sre2_pure: zero state");
  int L = 0;
  while ((std::uint64_t(1) << L) < dim) ++L;
  if (L > cap) throw std::invalid_argument("sre2_pure: chain exceeds enumeration cap (use the sampler)");

  const int lA = (L + 1) / 2;       // low sites, enumerated
  const int lB = L - lA;            // high sites, handled by the mode transform
  const std::uint64_t dA = std::uint64_t(1) << lA;
  const std::uint64_t dB = std::uint64_t(1) << lB;
  const std::uint64_t nA = std::uint64_t(1) << (2 * lA);

  // Psi as a dB x dA matrix: row = high bits, column = low bits.
  Eigen::MatrixXcd Psi(dB, dA);
  for (std::uint64_t b = 0; b < dB; ++b)
    for (std::uint64_t a = 0; a < dA; ++a) Psi(b, a) = psi[(b << lA) | a];
  const Eigen::MatrixXcd PsiH = Psi.adjoint();

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(nthreads), nA));

  // Per-P_A partial sums, reduced sequentially afterwards for determinism.
  std::vector<double> part2(nA), part4(nA);
  std::vector<double> worker_max_imag(nthreads, 0.0);
  std::atomic<std::uint64_t> next{0};
  std::atomic<int> worker_id{0};
  auto worker = [&]() {
    const int wid = worker_id.fetch_add(1);
    Eigen::MatrixXcd Phi(dB, dA), G(dB, dB);
    std::vector<cplx> buf(dB * dB);
    for (;;) {
      const std::uint64_t code = next.fetch_add(1);
      if (code >= nA) return;
      const PauliString PA(lA, code);
      const auto m = detail::make_masks(PA, 0);
      // Phi = P_A applied to the column (low-bit) index of Psi.
      for (std::uint64_t a = 0; a < dA; ++a) {
        const cplx ph = detail::pauli_phase(m, a);
        Phi.col(a ^ m.xmask) = ph * Psi.col(a);
      }
      // G[b', b] = sum_a Phi(b', a) conj(Psi(b, a))  =>  c = Tr(G Q) for Q on B.
      G.noalias() = Phi * PsiH;
      for (std::uint64_t i = 0; i < dB * dB; ++i) buf[i] = G(i / dB, i % dB);
      detail::pauli_mode_transform(buf, lB);
      double s2 = 0, s4 = 0, mi = worker_max_imag[wid];
      for (const cplx& cv : buf) {
        const double c = cv.real();
        const double c2 = c * c;
        s2 += c2;
        s4 += c2 * c2;
        mi = std::max(mi, std::abs(cv.imag()));
      }
      worker_max_imag[wid] = mi;
      part2[code] = s2;
      part4[code] = s4;
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (double mi : worker_max_imag)
    if (mi > 1e-8 * std::max(1.0, n2))
      throw std::runtime_error("sre2_pure: |Im c_P| > 1e-8 (numerics bug)");

  double s2 = 0, s4 = 0;
  for (std::uint64_t i = 0; i < nA; ++i) {
    s2 += part2[i];
    s4 += part4[i];
  }
  // c_P scales as the squared norm, so dividing by n2^2 makes the overall
  // scale of psi drop out.
  return -std::log2(s4 / (s2 * n2 * n2)) + 0.0;  // + 0.0: never return -0
}

}  // namespace nhmagic
