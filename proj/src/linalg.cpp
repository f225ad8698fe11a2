#include "stabfin/linalg.hpp"

#include "stabfin/integer.hpp"

namespace stabfin::linalg {

std::vector<std::size_t> rref_mod_p(Mat& m, std::int64_t p) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    const std::int64_t inv = inverse_mod(m[r][c], p);
    for (auto& v : m[r]) v = mul_mod(v, inv, p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const std::int64_t f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) {
        if (m[r][j] != 0) m[i][j] = mod_floor(m[i][j] - mul_mod(f, m[r][j], p), p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank_mod_p(Mat m, std::int64_t p) { return rref_mod_p(m, p).size(); }

std::optional<std::vector<Row>> solve_mod_p(const Mat& a, const std::vector<Row>& rhs_columns, std::int64_t p) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  const std::size_t k = rhs_columns.size();
  Mat aug(a.size(), Row(n + k, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = mod_floor(a[i][j], p);
    for (std::size_t c = 0; c < k; ++c) aug[i][n + c] = mod_floor(rhs_columns[c][i], p);
  }
  auto pivots = rref_mod_p(aug, p);
  std::vector<Row> solutions(k, Row(n, 0));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= n) return std::nullopt;
    for (std::size_t c = 0; c < k; ++c) solutions[c][pivots[r]] = aug[r][n + c];
  }
  return solutions;
}

Mat nullspace_mod_p(const Mat& a, std::size_t columns, std::int64_t p) {
  Mat m = a;
  for (auto& row : m) {
    row.resize(columns, 0);
    for (auto& v : row) v = mod_floor(v, p);
  }
  auto pivots = rref_mod_p(m, p);
  std::vector<bool> is_pivot(columns, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat basis;
  for (std::size_t f = 0; f < columns; ++f) {
    if (is_pivot[f]) continue;
    Row v(columns, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = mod_floor(-m[r][f], p);
    basis.push_back(v);
  }
  return basis;
}

int subgroup_log_order(Mat rows, std::int64_t p, int e) {
  const std::int64_t q = ipow(p, static_cast<unsigned>(e));
  for (auto& row : rows) {
    for (auto& v : row) v = mod_floor(v, q);
  }
  auto valuation = [p, e](std::int64_t v) {
    int k = 0;
    while (v != 0 && v % p == 0 && k < e) {
      v /= p;
      ++k;
    }
    return v == 0 ? e : k;
  };
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  std::vector<bool> row_used(rows.size(), false), col_used(cols, false);
  int log_order = 0;
  for (;;) {
    int best = e;
    std::size_t br = 0, bc = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        int v = valuation(rows[i][j]);
        if (v < best) {
          best = v;
          br = i;
          bc = j;
        }
      }
    }
    if (best == e) break;
    // Normalise the pivot to p^best, then clear the column in every other live row.
    const std::int64_t pk = ipow(p, static_cast<unsigned>(best));
    const std::int64_t unit_inv = inverse_mod((rows[br][bc] / pk) % q, q);
    for (auto& v : rows[br]) v = mul_mod(v, unit_inv, q);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == br || row_used[i] || rows[i][bc] == 0) continue;
      const std::int64_t f = rows[i][bc] / pk;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = mod_floor(rows[i][j] - mul_mod(f, rows[br][j], q), q);
    }
    row_used[br] = true;
    col_used[bc] = true;
    log_order += e - best;
  }
  return log_order;
}

}  // namespace stabfin::linalg
