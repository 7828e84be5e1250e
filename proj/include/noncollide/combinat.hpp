#pragma once

// Partitions, semistandard Young tableaux, and the bijection between vicious
// walks started from (0, 2, ..., 2(N-1)) and SSYT.

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace noncollide {

/// Weakly decreasing sequence of positive row lengths. Trailing zeros are
/// stripped on construction, so equal diagrams always compare equal.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const noexcept { return parts_; }
  /// Number of nonzero rows.
  std::size_t length() const noexcept { return parts_.size(); }
  bool empty() const noexcept { return parts_.empty(); }
  /// Total number of boxes.
  int size() const noexcept;
  /// Row i (0-based); zero past the last row.
  int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }
  /// Rows zero-padded to `slots` entries. `slots` must be >= length().
  std::vector<int> padded(std::size_t slots) const;

  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
};

Partition conjugate(const Partition& p);

/// Column-strict, row-weak filling of a Young diagram with letters 1..max_entry.
class SSYT {
 public:
  SSYT(Partition shape, std::vector<std::vector<int>> rows, int max_entry);

  const Partition& shape() const noexcept { return shape_; }
  const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
  int max_entry() const noexcept { return max_entry_; }
  /// 1-indexed entry T(i, j) as in the usual tableau notation.
  int at(std::size_t i, std::size_t j) const { return rows_.at(i - 1).at(j - 1); }
  /// Entries of column j (0-based), top to bottom.
  std::vector<int> column(std::size_t j) const;

  friend bool operator==(const SSYT&, const SSYT&) = default;

 private:
  Partition shape_;
  std::vector<std::vector<int>> rows_;
  int max_entry_;
};

/// N walkers, T unit steps each, stored as increments.
class WalkRecord {
 public:
  WalkRecord(std::vector<long> start, std::vector<std::vector<int>> steps, int horizon);

  const std::vector<long>& start() const noexcept { return start_; }
  const std::vector<std::vector<int>>& steps() const noexcept { return steps_; }
  int horizon() const noexcept { return horizon_; }
  std::size_t walkers() const noexcept { return start_.size(); }

  /// Positions of all walkers after t steps.
  std::vector<long> positions(int t) const;
  std::vector<long> endpoint() const { return positions(horizon_); }
  /// True when S_1(t) < ... < S_N(t) for every t = 0..T.
  bool nonintersecting() const;

  friend bool operator==(const WalkRecord&, const WalkRecord&) = default;

 private:
  std::vector<long> start_;
  std::vector<std::vector<int>> steps_;
  int horizon_;
};

/// (0, 2, ..., 2(N-1)).
std::vector<long> canonical_start(std::size_t walkers);

SSYT walk_to_tableau(const WalkRecord& walk);
WalkRecord tableau_to_walk(const SSYT& tableau, std::size_t walkers, int horizon);

/// Every SSYT of the given shape with entries in 1..max_entry, in
/// lexicographic order of the column-major reading word.
std::vector<SSYT> enumerate_ssyt(const Partition& shape, int max_entry);

/// Same count as enumerate_ssyt(...).size() without materializing tableaux.
std::size_t count_ssyt(const Partition& shape, int max_entry);

/// Multiplicity of each letter 1..horizon (component k-1 holds letter k).
std::vector<int> monomial_exponents(const SSYT& tableau, int horizon);

/// Shape lambda whose conjugate is L_i = (T + 2(i-1) - y_i) / 2.
Partition endpoints_to_partition(std::span<const long> endpoint, int horizon);

}  // namespace noncollide
