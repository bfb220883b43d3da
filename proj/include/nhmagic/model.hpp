#pragma once
// Sparse Hamiltonians for the two non-Hermitian chains, plus closed-form
// auxiliary quantities (fermion bands, critical lines, effective field).
//
// NHTI:  H = -J sum_{j=1}^{L-1} sx_j sx_{j+1} + h sum_{j=1}^{L} (sz_j + i g sy_j)
//        (open boundary; a REAL matrix in the computational basis, since
//        i*sigma^y = [[0,1],[-1,0]]).
// XX:    H = sum_{j=1}^{L-1} [J + i (-1)^j delta] (sp_j sm_{j+1} + sm_j sp_{j+1})
//            + g sum_{j=1}^{L} (-1)^j sz_j
//        (open boundary; complex symmetric; conserves total sigma^z).
// Site indices are 0-based in code; the staggering uses the 1-based j = s+1,
// so site 0 / bond 0 carry the negative stagger sign.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pauli.hpp"

namespace nhmagic {

struct IsingParams {
  double J = 1.0;
  double h = 0.0;
  double gamma = 0.0;
  int L = 2;

  void validate() const {
    if (L < 2) throw std::invalid_argument("IsingParams: L >= 2 required");
    if (!(J > 0)) throw std::invalid_argument("IsingParams: J > 0 required");
  }
};

struct XXParams {
  double J = 1.0;
  double delta = 0.0;
  double g = 0.0;
  int L = 2;

  void validate() const {
    if (L < 2) throw std::invalid_argument("XXParams: L >= 2 required");
    if (L % 2 != 0) throw std::invalid_argument("XXParams: L must be even (staggering)");
    if (!(J > 0)) throw std::invalid_argument("XXParams: J > 0 required");
  }
};

/// Row-compressed sparse matrix with complex entries. Immutable once built.
struct SparseOperator {
  std::int64_t dim = 0;
  std::vector<std::int64_t> row_ptr;  // size dim+1
  std::vector<std::int64_t> col;
  std::vector<cplx> val;
  bool is_real = true;  // true when every stored entry has zero imaginary part

  /// y = H x
  void apply(const cplx* x, cplx* y) const {
    for (std::int64_t r = 0; r < dim; ++r) {
      cplx acc(0, 0);
      for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
      y[r] = acc;
    }
  }

  StateVector apply(const StateVector& x) const {
    if (static_cast<std::int64_t>(x.size()) != dim)
      throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
    StateVector y(dim);
    apply(x.data(), y.data());
    return y;
  }

  /// Largest entry magnitude (scale for residual/tolerance contracts).
  double max_abs() const {
    double m = 0;
    for (const cplx& v : val) m = std::max(m, std::abs(v));
    return m;
  }
};

namespace detail {

/// Triplet accumulator that merges duplicate (row, col) entries into CSR.
class SparseBuilder {
 public:
  explicit SparseBuilder(std::int64_t dim) : dim_(dim), rows_(dim) {}

  void add(std::int64_t r, std::int64_t c, cplx v) { rows_[r].emplace_back(c, v); }

  SparseOperator finish() {
    SparseOperator op;
    op.dim = dim_;
    op.row_ptr.assign(dim_ + 1, 0);
    bool real = true;
    for (std::int64_t r = 0; r < dim_; ++r) {
      auto& row = rows_[r];
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t w = 0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (w > 0 && row[w - 1].first == row[i].first) {
          if (&row[w - 1] != &row[i]) row[w - 1].second += row[i].second;
        } else {
          row[w] = row[i];
          ++w;
        }
      }
      row.resize(w);
      for (const auto& [c, v] : row) {
        if (std::abs(v) == 0.0) continue;
        op.col.push_back(c);
        op.val.push_back(v);
        if (v.imag() != 0.0) real = false;
      }
      op.row_ptr[r + 1] = static_cast<std::int64_t>(op.col.size());
    }
    op.is_real = real;
    return op;
  }

 private:
  std::int64_t dim_;
  std::vector<std::vector<std::pair<std::int64_t, cplx>>> rows_;
};

}  // namespace detail

/// -J sum sx sx + h sum (sz + i gamma sy), OBC. Real non-symmetric matrix.
inline SparseOperator build_nhti(const IsingParams& p) {
  p.validate();
  const std::int64_t dim = std::int64_t(1) << p.L;
  detail::SparseBuilder b(dim);
  for (std::int64_t s = 0; s < dim; ++s) {
    // coupling: -J sx_j sx_{j+1} flips adjacent bits
    for (int j = 0; j + 1 < p.L; ++j) {
      const std::int64_t t = s ^ (std::int64_t(3) << j);
      b.add(t, s, cplx(-p.J, 0));
    }
    double diag = 0;
    for (int j = 0; j < p.L; ++j) {
      const bool up = (s >> j) & 1;
      // h sz_j: sz = diag(-1,+1), so -h for bit 0, +h for bit 1
      diag += up ? p.h : -p.h;
      // i gamma h sy_j = gamma h [[0,1],[-1,0]]: |0> -> +|1>, |1> -> -|0>
      const std::int64_t t = s ^ (std::int64_t(1) << j);
      b.add(t, s, cplx(up ? -p.gamma * p.h : p.gamma * p.h, 0));
    }
    if (diag != 0) b.add(s, s, cplx(diag, 0));
  }
  return b.finish();
}

/// sum [J + i(-1)^j delta](sp sm + sm sp) + g sum (-1)^j sz, OBC.
/// Complex symmetric; commutes with total sigma^z.
inline SparseOperator build_xx_spin(const XXParams& p) {
  p.validate();
  const std::int64_t dim = std::int64_t(1) << p.L;
  detail::SparseBuilder b(dim);
  for (std::int64_t s = 0; s < dim; ++s) {
    for (int bond = 0; bond + 1 < p.L; ++bond) {
      const int j = bond + 1;  // 1-based stagger
      const cplx coef(p.J, (j % 2 == 0) ? p.delta : -p.delta);
      const bool n0 = (s >> bond) & 1;
      const bool n1 = (s >> (bond + 1)) & 1;
      if (n0 != n1) {  // hop the excitation across the bond
        const std::int64_t t = s ^ (std::int64_t(3) << bond);
        b.add(t, s, coef);
      }
    }
    double diag = 0;
    for (int site = 0; site < p.L; ++site) {
      const int j = site + 1;
      const double stag = (j % 2 == 0) ? p.g : -p.g;
      diag += ((s >> site) & 1) ? stag : -stag;
    }
    if (diag != 0) b.add(s, s, cplx(diag, 0));
  }
  return b.finish();
}

/// Two-band dispersion E_pm(k) = +/- 2 sqrt((J^2+delta^2) cos^2 k + g^2 - delta^2),
/// principal square root; complex when the radicand is negative.
inline std::pair<cplx, cplx> xx_band_energies(double k, const XXParams& p) {
  const double c = std::cos(k);
  const cplx radicand((p.J * p.J + p.delta * p.delta) * c * c + p.g * p.g - p.delta * p.delta, 0.0);
  const cplx root = 2.0 * std::sqrt(radicand);
  return {root, -root};
}

/// gamma_c1 = sqrt(1 - (J/h)^2) when |h| >= J, else no real solution.
inline std::optional<double> ising_critical_gamma(double h, double J) {
  if (h == 0) throw std::invalid_argument("ising_critical_gamma: h = 0 rejected");
  const double r = J / h;
  if (r * r > 1.0) return std::nullopt;
  return std::sqrt(1.0 - r * r);
}

/// Effective Hermitian transverse field h sqrt(1 - gamma^2), |gamma| <= 1.
inline double effective_hermitian_field(double h, double gamma) {
  if (std::abs(gamma) > 1.0)
    throw std::invalid_argument("effective_hermitian_field: |gamma| > 1 outside PT-symmetric regime");
  return h * std::sqrt(1.0 - gamma * gamma);
}

}  // namespace nhmagic
