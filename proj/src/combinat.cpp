#include "noncollide/combinat.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "combinat";

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) fail(ErrorKind::InvalidArgument, "partition parts must be nonnegative");
    if (i > 0 && parts_[i] > parts_[i - 1]) fail(ErrorKind::InvalidArgument, "partition parts must be weakly decreasing");
  }
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

int Partition::size() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::vector<int> Partition::padded(std::size_t slots) const {
  if (slots < parts_.size()) fail(ErrorKind::InvalidArgument, "cannot pad a partition to fewer slots than its length");
  std::vector<int> out(parts_);
  out.resize(slots, 0);
  return out;
}

Partition conjugate(const Partition& p) {
  if (p.empty()) return {};
  std::vector<int> cols(static_cast<std::size_t>(p[0]), 0);
  for (int row : p.parts())
    for (int j = 0; j < row; ++j) ++cols[static_cast<std::size_t>(j)];
  return Partition(std::move(cols));
}

SSYT::SSYT(Partition shape, std::vector<std::vector<int>> rows, int max_entry)
    : shape_(std::move(shape)), rows_(std::move(rows)), max_entry_(max_entry) {
  if (max_entry_ < 0) fail(ErrorKind::InvalidArgument, "max_entry must be nonnegative");
  if (rows_.size() != shape_.length()) fail(ErrorKind::InvalidArgument, "row count does not match shape");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (static_cast<int>(rows_[i].size()) != shape_[i]) fail(ErrorKind::InvalidArgument, "row length does not match shape");
    for (std::size_t j = 0; j < rows_[i].size(); ++j) {
      const int v = rows_[i][j];
      if (v < 1 || v > max_entry_) fail(ErrorKind::InvalidArgument, "entry outside 1..max_entry");
      if (j > 0 && rows_[i][j - 1] > v) fail(ErrorKind::InvalidArgument, "rows must be weakly increasing");
      if (i > 0 && rows_[i - 1][j] >= v) fail(ErrorKind::InvalidArgument, "columns must be strictly increasing");
    }
  }
}

std::vector<int> SSYT::column(std::size_t j) const {
  std::vector<int> out;
  for (const auto& row : rows_) {
    if (j < row.size()) out.push_back(row[j]);
  }
  return out;
}

WalkRecord::WalkRecord(std::vector<long> start, std::vector<std::vector<int>> steps, int horizon)
    : start_(std::move(start)), steps_(std::move(steps)), horizon_(horizon) {
  if (horizon_ < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  if (steps_.size() != start_.size()) fail(ErrorKind::InvalidArgument, "one step row per walker required");
  for (std::size_t i = 0; i < start_.size(); ++i) {
    if (start_[i] % 2 != 0) fail(ErrorKind::Parity, "starting positions must be even");
    if (i > 0 && start_[i - 1] >= start_[i]) fail(ErrorKind::InvalidArgument, "starting positions must be strictly increasing");
    if (static_cast<int>(steps_[i].size()) != horizon_) fail(ErrorKind::InvalidArgument, "each walker needs exactly `horizon` steps");
    for (int s : steps_[i])
      if (s != 1 && s != -1) fail(ErrorKind::InvalidArgument, "steps must be +1 or -1");
  }
}

std::vector<long> WalkRecord::positions(int t) const {
  if (t < 0 || t > horizon_) fail(ErrorKind::InvalidArgument, "time outside 0..horizon");
  std::vector<long> pos(start_);
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (int u = 0; u < t; ++u) pos[i] += steps_[i][static_cast<std::size_t>(u)];
  return pos;
}

bool WalkRecord::nonintersecting() const {
  std::vector<long> pos(start_);
  for (int t = 0;; ++t) {
    for (std::size_t i = 1; i < pos.size(); ++i)
      if (pos[i - 1] >= pos[i]) return false;
    if (t == horizon_) return true;
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] += steps_[i][static_cast<std::size_t>(t)];
  }
}

std::vector<long> canonical_start(std::size_t walkers) {
  std::vector<long> x(walkers);
  for (std::size_t i = 0; i < walkers; ++i) x[i] = 2 * static_cast<long>(i);
  return x;
}

SSYT walk_to_tableau(const WalkRecord& walk) {
  if (walk.start() != canonical_start(walk.walkers()))
    fail(ErrorKind::InvalidArgument, "bijection requires the start (0, 2, ..., 2(N-1))");
  if (!walk.nonintersecting()) fail(ErrorKind::InvalidArgument, "walk is not nonintersecting");

  // Column j holds the times of walker j's leftward steps.
  std::vector<std::vector<int>> columns(walk.walkers());
  std::vector<int> lengths(walk.walkers());
  for (std::size_t j = 0; j < walk.walkers(); ++j) {
    for (int t = 0; t < walk.horizon(); ++t)
      if (walk.steps()[j][static_cast<std::size_t>(t)] == -1) columns[j].push_back(t + 1);
    lengths[j] = static_cast<int>(columns[j].size());
  }
  const Partition shape = conjugate(Partition(lengths));
  std::vector<std::vector<int>> rows(shape.length());
  for (std::size_t i = 0; i < shape.length(); ++i)
    for (int j = 0; j < shape[i]; ++j) rows[i].push_back(columns[static_cast<std::size_t>(j)][i]);
  return SSYT(shape, std::move(rows), walk.horizon());
}

WalkRecord tableau_to_walk(const SSYT& tableau, std::size_t walkers, int horizon) {
  if (tableau.max_entry() > horizon) fail(ErrorKind::NotRealizable, "tableau letters exceed the time horizon");
  const Partition lengths = conjugate(tableau.shape());
  if (lengths.length() > walkers) fail(ErrorKind::NotRealizable, "tableau has more columns than walkers");

  std::vector<std::vector<int>> steps(walkers, std::vector<int>(static_cast<std::size_t>(horizon), 1));
  for (std::size_t j = 0; j < lengths.length(); ++j)
    for (int t : tableau.column(j)) steps[j][static_cast<std::size_t>(t - 1)] = -1;

  WalkRecord walk(canonical_start(walkers), std::move(steps), horizon);
  if (!walk.nonintersecting()) fail(ErrorKind::NotRealizable, "filling does not correspond to a nonintersecting walk");
  return walk;
}

namespace {

// Column-by-column backtracking. `visit` receives the filled grid.
template <typename Visit>
void fill_ssyt(const Partition& shape, int max_entry, Visit&& visit) {
  if (static_cast<int>(shape.length()) > max_entry) return;
  const Partition cols = conjugate(shape);
  std::vector<std::vector<int>> grid(shape.length());
  for (std::size_t i = 0; i < shape.length(); ++i) grid[i].assign(static_cast<std::size_t>(shape[i]), 0);

  const std::size_t ncols = cols.length();
  std::function<void(std::size_t, std::size_t)> place = [&](std::size_t col, std::size_t row) {
    if (col == ncols) {
      visit(grid);
      return;
    }
    const auto height = static_cast<std::size_t>(cols[col]);
    if (row == height) {
      place(col + 1, 0);
      return;
    }
    int lo = 1;
    if (row > 0) lo = grid[row - 1][col] + 1;
    if (col > 0) lo = std::max(lo, grid[row][col - 1]);
    // Leave room for the strictly increasing entries below.
    const int hi = max_entry - static_cast<int>(height - 1 - row);
    for (int v = lo; v <= hi; ++v) {
      grid[row][col] = v;
      place(col, row + 1);
    }
  };
  place(0, 0);
}

}  // namespace

std::vector<SSYT> enumerate_ssyt(const Partition& shape, int max_entry) {
  if (max_entry < 0) fail(ErrorKind::InvalidArgument, "max_entry must be nonnegative");
  std::vector<SSYT> out;
  fill_ssyt(shape, max_entry, [&](const std::vector<std::vector<int>>& grid) { out.emplace_back(shape, grid, max_entry); });
  return out;
}

std::size_t count_ssyt(const Partition& shape, int max_entry) {
  if (max_entry < 0) fail(ErrorKind::InvalidArgument, "max_entry must be nonnegative");
  std::size_t n = 0;
  fill_ssyt(shape, max_entry, [&](const std::vector<std::vector<int>>&) { ++n; });
  return n;
}

std::vector<int> monomial_exponents(const SSYT& tableau, int horizon) {
  if (tableau.max_entry() > horizon) fail(ErrorKind::InvalidArgument, "tableau alphabet exceeds the number of variables");
  std::vector<int> exps(static_cast<std::size_t>(horizon), 0);
  for (const auto& row : tableau.rows())
    for (int v : row) ++exps[static_cast<std::size_t>(v - 1)];
  return exps;
}

Partition endpoints_to_partition(std::span<const long> endpoint, int horizon) {
  if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
  std::vector<int> lengths;
  lengths.reserve(endpoint.size());
  for (std::size_t i = 0; i < endpoint.size(); ++i) {
    const long twice = horizon + 2 * static_cast<long>(i) - endpoint[i];
    if (twice % 2 != 0) fail(ErrorKind::Parity, "endpoint " + std::to_string(endpoint[i]) + " has the wrong parity for T = " + std::to_string(horizon));
    const long l = twice / 2;
    if (l < 0 || l > horizon) fail(ErrorKind::Unreachable, "endpoint " + std::to_string(endpoint[i]) + " is not reachable in T steps");
    if (!lengths.empty() && l > lengths.back()) fail(ErrorKind::Unreachable, "endpoint is not reachable by a nonintersecting walk");
    lengths.push_back(static_cast<int>(l));
  }
  return conjugate(Partition(lengths));
}

}  // namespace noncollide
