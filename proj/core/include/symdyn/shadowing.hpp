#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/stream.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

// Points of a pseudo-orbit, each known through its first m symbols. The jump
// d(σ x_n, x_{n+1}) < 2^{-m} is read as: x_{n+1} starts with x_n[1, m).
class PseudoOrbit {
 public:
  PseudoOrbit(const Subshift& shift, std::size_t depth, std::vector<Word> points);

  const Subshift& shift() const noexcept { return *shift_; }
  std::size_t depth() const noexcept { return depth_; }
  const std::vector<Word>& points() const noexcept { return points_; }
  double delta() const;

 private:
  const Subshift* shift_;
  std::size_t depth_;
  std::vector<Word> points_;
};

// Parsed `porbit v1` text: depth plus one word per line.
struct PseudoOrbitText {
  std::size_t depth = 0;
  std::vector<Word> points;
};
PseudoOrbitText parse_porbit(std::istream& in);
PseudoOrbitText load_porbit(const std::string& path);
std::string to_porbit_text(std::size_t depth, const std::vector<Word>& points);

struct PseudoOrbitCheck {
  bool valid = true;
  // First index whose word is inadmissible or does not continue its predecessor.
  std::optional<std::size_t> first_bad;
};

PseudoOrbitCheck verify_pseudo_orbit(const PseudoOrbit& po);

struct Shadow {
  SymbolStream point;
  // 2^{-(m-1)}
  double epsilon = 0;
  // y_0 ... y_{n+m-2}: the part of y fixed by the pseudo-orbit.
  Word determined;
};

Shadow shadow(const PseudoOrbit& po);

// σ^n y agrees with x_n on m-1 symbols for every n, and y is admissible.
bool shadows(const PseudoOrbit& po, SymbolSpan y);

}  // namespace symdyn
