#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace stabfin::linalg {

using Row = std::vector<std::int64_t>;
using Mat = std::vector<Row>;

// Row-reduces `m` in place over F_p to reduced echelon form; returns pivot columns.
std::vector<std::size_t> rref_mod_p(Mat& m, std::int64_t p);

std::size_t rank_mod_p(Mat m, std::int64_t p);

// Solves A X = B over F_p (B given column by column). Free unknowns are set to 0.
// Returns nullopt when some column is inconsistent.
std::optional<std::vector<Row>> solve_mod_p(const Mat& a, const std::vector<Row>& rhs_columns, std::int64_t p);

// Basis of { x : A x = 0 } over F_p.
Mat nullspace_mod_p(const Mat& a, std::size_t columns, std::int64_t p);

// log_p of the order of the subgroup of (Z/p^e)^n generated by the rows, via
// diagonalisation over the local ring Z/p^e.
int subgroup_log_order(Mat rows, std::int64_t p, int e);

}  // namespace stabfin::linalg
