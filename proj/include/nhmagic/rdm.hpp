#pragma once
// Right-right reduced density matrix of a contiguous subregion:
//   rho_A = Tr_{A-complement}( |psi><psi| ) / <psi|psi>.
// Computed by a (left, A, right) index contraction over the state vector;
// |psi><psi| is never materialized at full dimension.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "pauli.hpp"

namespace nhmagic {

struct ReducedDensityMatrix {
  int first = 0;   // first site of region A
  int len = 0;     // |A|
  Eigen::MatrixXcd rho;  // 2^len x 2^len, Hermitian, unit trace
};

/// Partial trace over the complement of the contiguous region
/// [first, first+len). The input need not be normalized.
inline ReducedDensityMatrix reduced_density_matrix(const StateVector& psi, int first, int len) {
  const std::uint64_t dim = psi.size();
  if (dim == 0 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("reduced_density_matrix: dimension not a power of two");
  int L = 0;
  while ((std::uint64_t(1) << L) < dim) ++L;
  if (len < 1 || first < 0 || first + len > L)
    throw std::invalid_argument("reduced_density_matrix: region out of range");

  const double nrm = norm2(psi);
  if (nrm == 0) throw std::invalid_argument("reduced_density_matrix: zero state");

  const std::uint64_t dA = std::uint64_t(1) << len;
  const std::uint64_t dLeft = std::uint64_t(1) << first;          // sites below A
  const std::uint64_t dRight = std::uint64_t(1) << (L - first - len);  // sites above A

  ReducedDensityMatrix out{first, len, Eigen::MatrixXcd::Zero(dA, dA)};
  for (std::uint64_t hi = 0; hi < dRight; ++hi) {
    const std::uint64_t base_hi = hi << (first + len);
    for (std::uint64_t a = 0; a < dA; ++a) {
      const std::uint64_t base_a = base_hi | (a << first);
      for (std::uint64_t b = 0; b < dA; ++b) {
        const std::uint64_t base_b = base_hi | (b << first);
        cplx acc(0, 0);
        for (std::uint64_t lo = 0; lo < dLeft; ++lo)
          acc += psi[base_a | lo] * std::conj(psi[base_b | lo]);
        out.rho(a, b) += acc;
      }
    }
  }
  out.rho /= nrm;
  return out;
}

/// Tr rho^2, in (0, 1].
inline double purity(const ReducedDensityMatrix& r) {
  return (r.rho * r.rho).trace().real();
}

}  // namespace nhmagic
