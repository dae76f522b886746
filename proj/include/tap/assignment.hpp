#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace tap {

/// Candidate span [start, end) without a role.
struct SpanRange {
  std::size_t start = 0;
  std::size_t end = 0;

  bool overlaps(const SpanRange& o) const { return start < o.end && o.start < end; }
  auto operator<=>(const SpanRange&) const = default;
};

/// Index of the unordered pair (i, j), i != j, among n candidates.
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) {
    const auto t = i;
    i = j;
    j = t;
  }
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Role-or-NONE per candidate span and label-or-NONE per unordered pair.
///
/// Role options are inventory ids 0..role_count-1 with `none_role()` ==
/// role_count. Label options are EdgeLabel values 0..2 with kNoneLabel == 3.
/// kUndecided marks a free variable in a partial assignment.
struct Assignment {
  static constexpr int kUndecided = -1;
  static constexpr int kNoneLabel = 3;

  std::size_t role_count = 0;
  std::vector<int> role_of;
  std::vector<int> label_of;

  Assignment() = default;
  /// Every variable undecided.
  Assignment(std::size_t spans, std::size_t roles)
      : role_count(roles), role_of(spans, kUndecided), label_of(pair_count(spans), kUndecided) {}

  /// Every span and pair NONE.
  static Assignment empty(std::size_t spans, std::size_t roles) {
    Assignment a(spans, roles);
    std::fill(a.role_of.begin(), a.role_of.end(), static_cast<int>(roles));
    std::fill(a.label_of.begin(), a.label_of.end(), kNoneLabel);
    return a;
  }

  int none_role() const { return static_cast<int>(role_count); }
  std::size_t span_count() const { return role_of.size(); }
  int label(std::size_t i, std::size_t j) const { return label_of[pair_index(i, j, role_of.size())]; }
  void set_label(std::size_t i, std::size_t j, int l) { label_of[pair_index(i, j, role_of.size())] = l; }

  bool complete() const {
    for (int r : role_of)
      if (r == kUndecided) return false;
    for (int l : label_of)
      if (l == kUndecided) return false;
    return true;
  }

  bool operator==(const Assignment&) const = default;
};

}  // namespace tap
