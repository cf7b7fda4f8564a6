#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/densities.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/stream.hpp"

namespace symdyn {

// N(x, [P]) ∩ [1, N]: the n with x_n ... x_{n+|P|-1} = P.
VisitSet visit_set(const SymbolStream& x, const Word& block, std::uint64_t horizon);

struct OmegaProfile {
  std::size_t depth = 0;
  std::uint64_t horizon = 0;
  std::uint64_t window = 0;
  double threshold = 0;
  // Nested: banach_lower ⊆ d_lower ⊆ d_upper ⊆ banach_upper ⊆ limit.
  std::vector<Word> banach_lower;
  std::vector<Word> d_lower;
  std::vector<Word> d_upper;
  std::vector<Word> banach_upper;
  std::vector<Word> limit;
  // One report per depth-t block, lexicographic.
  std::vector<Word> blocks;
  std::vector<DensityReport> reports;
  bool clamped = false;
};

constexpr double kDefaultThreshold = 1e-3;

// A block enters a statistical set when the matching density estimate exceeds
// `threshold`. The limit set holds blocks seen at places n >= N/2, together
// with everything in the Banach upper set.
OmegaProfile omega_profile(const SymbolStream& x, std::size_t depth, std::uint64_t horizon,
                           std::uint64_t window, double threshold = kDefaultThreshold, unsigned threads = 1);

struct CaseLabel {
  // 1..16, or 0 when the Banach-lower set is empty.
  int index = 0;
  bool strict[4] = {false, false, false, false};
  std::string name() const;
};

CaseLabel classify_case(const OmegaProfile& profile);
int case_index(bool s1, bool s2, bool s3, bool s4);

struct RecurrenceReport {
  bool recurrent = false;
  bool almost_periodic = false;
  // Largest return gap among the depth-t blocks seen in x[0, N).
  std::optional<std::uint64_t> gap;
};

// Recurrent: the first depth-t block comes back at some n in [1, N].
// Almost periodic: every depth-t block of x[0, N) returns syndetically, and
// no block's worst gap over [1, N] exceeds its worst gap over [1, N/2].
RecurrenceReport recurrence_tests(const SymbolStream& x, std::size_t depth, std::uint64_t horizon);

// Locally constant function given by its values on depth-t cylinders.
class Observable {
 public:
  Observable(std::size_t alphabet_size, std::size_t depth, std::vector<double> values);
  static Observable indicator(std::size_t alphabet_size, const Word& block);

  std::size_t alphabet_size() const noexcept { return k_; }
  std::size_t depth() const noexcept { return t_; }
  double value(std::size_t cell) const { return values_[cell]; }
  double integral(const CylinderDistribution& mu) const;
  double integral(const MarkovMeasure& mu) const;

 private:
  std::size_t k_;
  std::size_t t_;
  std::vector<double> values_;
};

struct BirkhoffTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> averages;
  // max - min over the later half of the checkpoints.
  double oscillation = 0;
};

BirkhoffTrace birkhoff_trace(const SymbolStream& x, const Observable& phi,
                             const std::vector<std::uint64_t>& checkpoints);
// `count` log-spaced checkpoints ending at `horizon`.
std::vector<std::uint64_t> log_checkpoints(std::uint64_t horizon, std::size_t count);

// Empirical laws of x over the windows starting at 0, stride, 2·stride, ...
// each built from w depth-t windows, with every window inside x[0, N+t-1).
MeasureSet window_measures(const SymbolStream& x, std::size_t depth, std::uint64_t window, std::uint64_t stride,
                           std::uint64_t horizon);

}  // namespace symdyn
