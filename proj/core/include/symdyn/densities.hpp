#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace symdyn {

// Finite piece of a set of positive integers: the elements of S in [1, N].
class VisitSet {
 public:
  VisitSet(std::uint64_t horizon, std::vector<std::uint64_t> elements);

  std::uint64_t horizon() const noexcept { return horizon_; }
  const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }

 private:
  std::uint64_t horizon_;
  std::vector<std::uint64_t> elements_;
};

struct DensityReport {
  double d_upper = 0;
  double d_lower = 0;
  double banach_upper = 0;
  double banach_lower = 0;
  std::uint64_t window_length = 0;
  std::optional<std::uint64_t> syndetic_gap;
  // Set when a Banach estimate had to be moved to keep
  // banach_lower <= d_lower <= d_upper <= banach_upper.
  bool clamped = false;
};

std::uint64_t default_window(std::uint64_t horizon);

// Upper/lower density as max/min of |S ∩ [1,n]|/n over n in [N/2, N];
// Banach densities as max/min over all windows of length w inside [1, N].
DensityReport density_report(const VisitSet& s, std::uint64_t window);

// Smallest G such that every length-G interval of [1, N] meets S.
std::optional<std::uint64_t> syndetic_gap(const VisitSet& s);

}  // namespace symdyn
