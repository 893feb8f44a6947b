#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace laminar {

using BigInt = boost::multiprecision::cpp_int;

struct IntMatrix {
  std::size_t cols = 0;
  std::vector<std::vector<BigInt>> rows;

  std::size_t row_count() const { return rows.size(); }
};

struct InvariantFactors {
  std::vector<BigInt> factors;  // nonzero Smith diagonal, each dividing the next
  std::size_t free_rank = 0;
};

namespace detail {

inline void swap_cols(std::vector<std::vector<BigInt>>& a, std::size_t i, std::size_t j) {
  for (auto& r : a) std::swap(r[i], r[j]);
}

}  // namespace detail

inline InvariantFactors invariant_factors(const IntMatrix& mat) {
  auto a = mat.rows;
  const std::size_t m = a.size(), n = mat.cols;
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == m) goto done;
      std::swap(a[t], a[pi]);
      detail::swap_cols(a, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        BigInt f = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= f * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        BigInt f = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= f * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // pivot must divide the rest of the block
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      for (std::size_t j = t; j < n; ++j) a[t][j] += a[bad][j];
    }
  }
done:
  InvariantFactors out;
  for (std::size_t i = 0; i < std::min(m, n); ++i)
    if (a[i][i] != 0) out.factors.push_back(abs(a[i][i]));
  std::sort(out.factors.begin(), out.factors.end());
  out.free_rank = n - out.factors.size();
  return out;
}

// Integer row lattice in echelon form; membership is then a single sweep.
class RowLattice {
 public:
  explicit RowLattice(const IntMatrix& mat) : cols_(mat.cols) {
    auto a = mat.rows;
    std::size_t r0 = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      // gcd-combine rows r0.. so that only row r0 is nonzero in column c
      for (std::size_t i = r0 + 1; i < a.size(); ++i) {
        while (a[i][c] != 0) {
          BigInt q = a[r0][c] / a[i][c];
          for (std::size_t j = c; j < cols_; ++j) a[r0][j] -= q * a[i][j];
          std::swap(a[r0], a[i]);
        }
      }
      if (r0 < a.size() && a[r0][c] != 0) {
        pivots_.push_back({c, a[r0]});
        ++r0;
      }
    }
  }

  bool contains(std::vector<BigInt> v) const {
    std::size_t next = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (next < pivots_.size() && pivots_[next].first == c) {
        const auto& row = pivots_[next].second;
        if (v[c] % row[c] != 0) return false;
        BigInt q = v[c] / row[c];
        for (std::size_t j = c; j < cols_; ++j) v[j] -= q * row[j];
        ++next;
      } else if (v[c] != 0) {
        return false;
      }
    }
    return true;
  }

 private:
  std::size_t cols_;
  std::vector<std::pair<std::size_t, std::vector<BigInt>>> pivots_;
};

// Is v an integer combination of the rows of mat?
inline bool in_row_lattice(const IntMatrix& mat, std::vector<BigInt> v) {
  return RowLattice(mat).contains(std::move(v));
}

inline std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace laminar
