#include "symdyn/densities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "densities";
}

VisitSet::VisitSet(std::uint64_t horizon, std::vector<std::uint64_t> elements)
    : horizon_(horizon), elements_(std::move(elements)) {
  if (horizon_ == 0) fail(ErrorCode::parameter, kModule, "horizon must be >= 1");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1 || elements_[i] > horizon_) {
      fail(ErrorCode::range, kModule, "element " + std::to_string(elements_[i]) + " outside [1, N]");
    }
    if (i > 0 && elements_[i] <= elements_[i - 1]) {
      fail(ErrorCode::parameter, kModule, "elements must be strictly increasing");
    }
  }
}

std::uint64_t default_window(std::uint64_t horizon) {
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(horizon))));
}

DensityReport density_report(const VisitSet& s, std::uint64_t window) {
  const std::uint64_t n_max = s.horizon();
  if (window < 1 || window > n_max / 4) {
    fail(ErrorCode::parameter, kModule,
         "window length " + std::to_string(window) + " outside [1, N/4] for N = " + std::to_string(n_max));
  }
  const auto& el = s.elements();
  DensityReport rep;
  rep.window_length = window;

  // Prefix ratios on the tail half.
  const std::uint64_t n_min = (n_max + 1) / 2;
  std::size_t idx = 0;
  double hi = 0.0, lo = 1.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    while (idx < el.size() && el[idx] <= n) ++idx;
    if (n < n_min) continue;
    const double r = static_cast<double>(idx) / static_cast<double>(n);
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  rep.d_upper = hi;
  rep.d_lower = lo;

  // Sliding windows [a, a+w-1].
  std::size_t first = 0, past = 0;
  std::uint64_t best = 0, worst = window;
  for (std::uint64_t a = 1; a + window - 1 <= n_max; ++a) {
    while (first < el.size() && el[first] < a) ++first;
    while (past < el.size() && el[past] <= a + window - 1) ++past;
    const std::uint64_t c = past - first;
    best = std::max(best, c);
    worst = std::min(worst, c);
  }
  rep.banach_upper = static_cast<double>(best) / static_cast<double>(window);
  rep.banach_lower = static_cast<double>(worst) / static_cast<double>(window);

  if (rep.banach_lower > rep.d_lower) {
    rep.banach_lower = rep.d_lower;
    rep.clamped = true;
  }
  if (rep.banach_upper < rep.d_upper) {
    rep.banach_upper = rep.d_upper;
    rep.clamped = true;
  }
  rep.syndetic_gap = syndetic_gap(s);
  return rep;
}

std::optional<std::uint64_t> syndetic_gap(const VisitSet& s) {
  const auto& el = s.elements();
  if (el.empty()) return std::nullopt;
  std::uint64_t gap = std::max(el.front(), s.horizon() - el.back() + 1);
  for (std::size_t i = 1; i < el.size(); ++i) gap = std::max(gap, el[i] - el[i - 1]);
  return gap;
}

}  // namespace symdyn
