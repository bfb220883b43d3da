#pragma once
// Pauli-string representation and matrix-free application to state vectors.
//
// Conventions (shared by every module):
//   - sigma^z = diag(-1, +1): sigma^z|0> = -|0>, sigma^z|1> = +|1>.
//   - sigma^x = [[0,1],[1,0]], sigma^y = [[0,i],[-i,0]] so that
//     sigma^x sigma^y = i sigma^z.
//   - Site 0 is the least significant bit of a basis index, and the least
//     significant two bits of a packed Pauli code.
//   - Letter codes: I=0, X=1, Y=2, Z=3.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhmagic {

using cplx = std::complex<double>;

/// A word over {I,X,Y,Z}, bit-packed two bits per site (site 0 = LSB pair).
struct PauliString {
  int length = 0;
  std::uint64_t code = 0;  // letter of site j = (code >> 2j) & 3

  PauliString() = default;
  PauliString(int len, std::uint64_t packed) : length(len), code(packed) {
    if (len < 1 || len > 32) throw std::invalid_argument("PauliString: length must be in [1,32]");
    if (len < 32 && (packed >> (2 * len)) != 0)
      throw std::invalid_argument("PauliString: code has bits beyond length");
  }

  int letter(int site) const { return static_cast<int>((code >> (2 * site)) & 3u); }

  void set_letter(int site, int p) {
    code = (code & ~(std::uint64_t(3) << (2 * site))) | (std::uint64_t(p & 3) << (2 * site));
  }

  bool operator==(const PauliString& o) const { return length == o.length && code == o.code; }
};

/// Parse a letter string such as "IXZ". Site 0 is the FIRST character.
inline PauliString pauli_parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("pauli_parse: empty input");
  if (text.size() > 32) throw std::invalid_argument("pauli_parse: more than 32 sites");
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < text.size(); ++j) {
    int p;
    switch (text[j]) {
      case 'I': p = 0; break;
      case 'X': p = 1; break;
      case 'Y': p = 2; break;
      case 'Z': p = 3; break;
      default: throw std::invalid_argument(std::string("pauli_parse: invalid character '") + text[j] + "'");
    }
    code |= std::uint64_t(p) << (2 * j);
  }
  return PauliString(static_cast<int>(text.size()), code);
}

/// Render back to letters; pauli_render(pauli_parse(t)) == t.
inline std::string pauli_render(const PauliString& P) {
  static const char* letters = "IXYZ";
  std::string out(P.length, 'I');
  for (int j = 0; j < P.length; ++j) out[j] = letters[P.letter(j)];
  return out;
}

using StateVector = std::vector<cplx>;

namespace detail {

/// Bit masks precomputed from a Pauli string placed at site offset `first`.
struct PauliMasks {
  std::uint64_t xmask = 0;   // sites with X or Y: flip these bits
  std::uint64_t zlike = 0;   // sites with Z or Y: contribute a sign
  int n_y = 0;               // number of Y letters (phase i^n_y)
  int n_zlike = 0;           // popcount(zlike)
};

inline PauliMasks make_masks(const PauliString& P, int first) {
  PauliMasks m;
  for (int j = 0; j < P.length; ++j) {
    const int p = P.letter(j);
    const std::uint64_t bit = std::uint64_t(1) << (first + j);
    if (p == 1 || p == 2) m.xmask |= bit;
    if (p == 2 || p == 3) { m.zlike |= bit; ++m.n_zlike; }
    if (p == 2) ++m.n_y;
  }
  return m;
}

/// Amplitude factor for basis state b:  P|b> = phase(b) |b ^ xmask>.
/// With sigma^z = diag(-1,+1), a z-like site contributes +1 when its bit is
/// set and -1 when clear; Y letters add a global i each.
inline cplx pauli_phase(const PauliMasks& m, std::uint64_t b) {
  static const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const int minus = m.n_zlike - static_cast<int>(__builtin_popcountll(b & m.zlike));
  cplx ph = ipow[m.n_y & 3];
  return (minus & 1) ? -ph : ph;
}

}  // namespace detail

/// P|psi> with P acting on the contiguous sites [first, first + P.length).
/// Matrix-free: bit flips for X/Y, signs for Z-like letters, i per Y.
/// Returns a fresh vector; the input is never mutated.
inline StateVector apply_pauli(const PauliString& P, const StateVector& psi, int first = 0) {
  const std::uint64_t dim = psi.size();
  if (dim == 0 || (dim & (dim - 1)) != 0) throw std::invalid_argument("apply_pauli: dimension not a power of two");
  int L = 0;
  while ((std::uint64_t(1) << L) < dim) ++L;
  if (first < 0 || first + P.length > L) throw std::invalid_argument("apply_pauli: sites out of range");

  const auto m = detail::make_masks(P, first);
  StateVector out(dim);
  for (std::uint64_t b = 0; b < dim; ++b) out[b ^ m.xmask] = detail::pauli_phase(m, b) * psi[b];
  return out;
}

/// <psi|P|psi> for normalized psi, evaluated without forming P or P|psi>.
/// The value is mathematically real for Hermitian P; the imaginary residue
/// is checked (> 1e-8 signals a numerics bug) and discarded.
inline double pauli_expectation(const PauliString& P, const StateVector& psi, int first = 0) {
  const std::uint64_t dim = psi.size();
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("pauli_expectation: dimension not a power of two");
  int L = 0;
  while ((std::uint64_t(1) << L) < dim) ++L;
  if (first < 0 || first + P.length > L)
    throw std::invalid_argument("pauli_expectation: sites out of range");

  const auto m = detail::make_masks(P, first);
  cplx acc(0, 0);
  for (std::uint64_t b = 0; b < dim; ++b)
    acc += std::conj(psi[b ^ m.xmask]) * detail::pauli_phase(m, b) * psi[b];
  if (std::abs(acc.imag()) > 1e-8)
    throw std::runtime_error("pauli_expectation: |Im <P>| > 1e-8 (numerics bug)");
  return acc.real();
}

inline double norm2(const StateVector& psi) {
  double s = 0;
  for (const cplx& a : psi) s += std::norm(a);
  return s;
}

inline void normalize(StateVector& psi) {
  const double n = std::sqrt(norm2(psi));
  if (n == 0) throw std::invalid_argument("normalize: zero vector");
  for (cplx& a : psi) a /= n;
}

}  // namespace nhmagic
