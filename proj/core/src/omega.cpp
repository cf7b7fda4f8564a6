#include "symdyn/omega.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "omega";

// Index of every depth-t window x[n, n+t) for n in [0, count).
std::vector<std::uint32_t> window_indices(const std::vector<Symbol>& x, std::size_t k, std::size_t t,
                                          std::size_t count) {
  std::vector<std::uint32_t> out(count);
  std::size_t cells = 1;
  for (std::size_t i = 0; i < t; ++i) cells *= k;
  const std::size_t top = cells / k;
  std::size_t idx = 0;
  for (std::size_t i = 0; i + 1 < t; ++i) idx = idx * k + x[i];
  for (std::size_t n = 0; n < count; ++n) {
    idx = (idx % top) * k + x[n + t - 1];
    out[n] = static_cast<std::uint32_t>(idx);
  }
  return out;
}

std::size_t cell_count(std::size_t k, std::size_t t) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < t; ++i) {
    if (cells > (std::size_t{1} << 24) / k) fail(ErrorCode::depth, kModule, "too many depth-t blocks");
    cells *= k;
  }
  return cells;
}

Word cell_word(std::size_t cell, std::size_t k, std::size_t t) {
  std::vector<Symbol> s(t);
  for (std::size_t i = t; i-- > 0;) {
    s[i] = static_cast<Symbol>(cell % k);
    cell /= k;
  }
  return Word(std::move(s));
}

void check_symbols(const std::vector<Symbol>& x, std::size_t k) {
  for (Symbol s : x) {
    if (s >= k) fail(ErrorCode::internal, kModule, "stream emitted a symbol outside its alphabet");
  }
}

}  // namespace

VisitSet visit_set(const SymbolStream& x, const Word& block, std::uint64_t horizon) {
  if (block.empty()) fail(ErrorCode::parameter, kModule, "empty block");
  if (horizon < block.size()) fail(ErrorCode::parameter, kModule, "horizon shorter than the block");
  const auto prefix = x.prefix(horizon + block.size());
  std::vector<std::uint64_t> visits;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    if (std::equal(block.begin(), block.end(), prefix.begin() + static_cast<std::ptrdiff_t>(n))) visits.push_back(n);
  }
  return VisitSet(horizon, std::move(visits));
}

OmegaProfile omega_profile(const SymbolStream& x, std::size_t depth, std::uint64_t horizon, std::uint64_t window,
                           double threshold, unsigned threads) {
  if (depth == 0) fail(ErrorCode::depth, kModule, "depth must be >= 1");
  if (!(threshold >= 0.0)) fail(ErrorCode::parameter, kModule, "threshold must be non-negative");
  const std::size_t k = x.alphabet_size();
  const std::size_t cells = cell_count(k, depth);
  const auto prefix = x.prefix(horizon + depth);
  check_symbols(prefix, k);
  // idx[n] is the block at place n, n in [0, N].
  const auto idx = window_indices(prefix, k, depth, horizon + 1);

  std::vector<std::vector<std::uint64_t>> visits(cells);
  std::vector<char> tail_seen(cells, 0);
  const std::uint64_t tail_start = (horizon + 1) / 2;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    visits[idx[n]].push_back(n);
    if (n >= tail_start) tail_seen[idx[n]] = 1;
  }

  OmegaProfile p;
  p.depth = depth;
  p.horizon = horizon;
  p.window = window;
  p.threshold = threshold;
  p.reports.resize(cells);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) p.reports[c] = density_report(VisitSet(horizon, visits[c]), window);
  };
  // Validate the window once before spawning workers.
  if (window < 1 || window > horizon / 4) {
    fail(ErrorCode::parameter, kModule,
         "window length " + std::to_string(window) + " outside [1, N/4] for N = " + std::to_string(horizon));
  }
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells)));
  if (workers == 1) {
    work(0, cells);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cells + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, std::min(cells, w * chunk), std::min(cells, (w + 1) * chunk));
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t c = 0; c < cells; ++c) {
    const auto& r = p.reports[c];
    Word w = cell_word(c, k, depth);
    p.blocks.push_back(w);
    p.clamped = p.clamped || r.clamped;
    if (r.banach_lower > threshold) p.banach_lower.push_back(w);
    if (r.d_lower > threshold) p.d_lower.push_back(w);
    if (r.d_upper > threshold) p.d_upper.push_back(w);
    const bool up = r.banach_upper > threshold;
    if (up) p.banach_upper.push_back(w);
    if (up || tail_seen[c]) p.limit.push_back(std::move(w));
  }
  return p;
}

int case_index(bool s1, bool s2, bool s3, bool s4) {
  // Listing order of the sixteen cases, keyed by (s1, s2, s3, s4).
  static constexpr int table[16] = {
      // s1 s2 s3 s4 as bits 3..0
      1,  2,  15, 16,  // 0 0 x x
      7,  8,  11, 12,  // 0 1 x x
      3,  4,  5,  6,   // 1 0 x x
      9,  10, 13, 14,  // 1 1 x x
  };
  return table[(s1 << 3) | (s2 << 2) | (s3 << 1) | static_cast<int>(s4)];
}

std::string CaseLabel::name() const { return index == 0 ? "empty-B-low" : "case " + std::to_string(index); }

CaseLabel classify_case(const OmegaProfile& p) {
  CaseLabel label;
  // Nested by construction, so strictness is a size comparison.
  label.strict[0] = p.banach_lower.size() < p.d_lower.size();
  label.strict[1] = p.d_lower.size() < p.d_upper.size();
  label.strict[2] = p.d_upper.size() < p.banach_upper.size();
  label.strict[3] = p.banach_upper.size() < p.limit.size();
  if (p.banach_lower.empty()) return label;
  label.index = case_index(label.strict[0], label.strict[1], label.strict[2], label.strict[3]);
  return label;
}

RecurrenceReport recurrence_tests(const SymbolStream& x, std::size_t depth, std::uint64_t horizon) {
  if (depth == 0) fail(ErrorCode::depth, kModule, "depth must be >= 1");
  if (horizon < 2) fail(ErrorCode::parameter, kModule, "horizon must be >= 2");
  const std::size_t k = x.alphabet_size();
  const std::size_t cells = cell_count(k, depth);
  const auto prefix = x.prefix(horizon + depth);
  check_symbols(prefix, k);
  const auto idx = window_indices(prefix, k, depth, horizon + 1);

  std::vector<std::vector<std::uint64_t>> visits(cells);
  std::vector<char> seen(cells, 0);
  for (std::uint64_t n = 0; n < horizon; ++n) seen[idx[n]] = 1;
  for (std::uint64_t n = 1; n <= horizon; ++n) visits[idx[n]].push_back(n);

  RecurrenceReport rep;
  rep.recurrent = !visits[idx[0]].empty();
  rep.almost_periodic = true;
  const std::uint64_t half = horizon / 2;
  std::uint64_t worst = 0;
  bool all_return = true;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!seen[c]) continue;
    const auto full = syndetic_gap(VisitSet(horizon, visits[c]));
    std::vector<std::uint64_t> early;
    for (auto v : visits[c]) {
      if (v <= half) early.push_back(v);
    }
    const auto head = syndetic_gap(VisitSet(half, std::move(early)));
    if (!full) {
      all_return = false;
      rep.almost_periodic = false;
      continue;
    }
    worst = std::max(worst, *full);
    if (!head || *full > *head) rep.almost_periodic = false;
  }
  if (all_return) rep.gap = worst;
  return rep;
}

// ---------------------------------------------------------------- Observable

Observable::Observable(std::size_t alphabet_size, std::size_t depth, std::vector<double> values)
    : k_(alphabet_size), t_(depth), values_(std::move(values)) {
  if (values_.size() != cell_count(k_, t_)) fail(ErrorCode::parameter, kModule, "observable table has the wrong size");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::parameter, kModule, "observable values must be finite");
  }
}

Observable Observable::indicator(std::size_t alphabet_size, const Word& block) {
  std::vector<double> values(cell_count(alphabet_size, block.size()), 0.0);
  std::size_t idx = 0;
  for (Symbol s : block) {
    if (s >= alphabet_size) fail(ErrorCode::parameter, kModule, "indicator block outside the alphabet");
    idx = idx * alphabet_size + s;
  }
  values[idx] = 1.0;
  return Observable(alphabet_size, block.size(), std::move(values));
}

double Observable::integral(const CylinderDistribution& mu) const {
  if (mu.alphabet_size() != k_) fail(ErrorCode::parameter, kModule, "alphabet mismatch");
  const auto m = mu.marginal(t_);
  double s = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * m[i];
  return s;
}

double Observable::integral(const MarkovMeasure& mu) const { return integral(markov_cylinders(mu, t_)); }

BirkhoffTrace birkhoff_trace(const SymbolStream& x, const Observable& phi,
                             const std::vector<std::uint64_t>& checkpoints) {
  if (checkpoints.empty()) fail(ErrorCode::parameter, kModule, "no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      fail(ErrorCode::parameter, kModule, "checkpoints must be positive and increasing");
    }
  }
  if (phi.alphabet_size() != x.alphabet_size()) fail(ErrorCode::parameter, kModule, "observable alphabet mismatch");
  const std::uint64_t n_max = checkpoints.back();
  const std::size_t t = phi.depth();
  const auto prefix = x.prefix(n_max + t - 1);
  check_symbols(prefix, x.alphabet_size());
  const auto idx = window_indices(prefix, x.alphabet_size(), t, n_max);

  BirkhoffTrace trace;
  trace.checkpoints = checkpoints;
  long double sum = 0;
  std::size_t next = 0;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    sum += phi.value(idx[n]);
    if (n + 1 == checkpoints[next]) {
      trace.averages.push_back(static_cast<double>(sum / static_cast<long double>(n + 1)));
      ++next;
    }
  }
  const std::size_t from = trace.averages.size() / 2;
  const auto [lo, hi] = std::minmax_element(trace.averages.begin() + static_cast<std::ptrdiff_t>(from), trace.averages.end());
  trace.oscillation = *hi - *lo;
  return trace;
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t horizon, std::size_t count) {
  if (horizon == 0 || count == 0) fail(ErrorCode::parameter, kModule, "checkpoint horizon and count must be positive");
  std::vector<std::uint64_t> out;
  const double lh = std::log(static_cast<double>(horizon));
  for (std::size_t i = 1; i <= count; ++i) {
    auto n = static_cast<std::uint64_t>(std::llround(std::exp(lh * static_cast<double>(i) / static_cast<double>(count))));
    n = std::clamp<std::uint64_t>(n, 1, horizon);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

MeasureSet window_measures(const SymbolStream& x, std::size_t depth, std::uint64_t window, std::uint64_t stride,
                           std::uint64_t horizon) {
  if (window < depth) fail(ErrorCode::parameter, kModule, "window must be at least the depth");
  if (stride == 0) fail(ErrorCode::parameter, kModule, "stride must be positive");
  if (window > horizon) fail(ErrorCode::parameter, kModule, "window longer than the horizon");
  const auto prefix = x.prefix(horizon + depth - 1);
  std::vector<CylinderDistribution> members;
  for (std::uint64_t s = 0; s + window <= horizon; s += stride) {
    members.push_back(empirical_distribution(SymbolSpan(prefix).subspan(s, window + depth - 1), x.alphabet_size(),
                                             window, depth));
  }
  return MeasureSet(std::move(members));
}

}  // namespace symdyn
