#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>

#include "symdyn/measures.hpp"
#include "symdyn/parry.hpp"
#include "symdyn/random.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

// A stationary source that can be sampled: a symbol-level Markov chain or the
// Parry measure of an SFT (a chain on its follower-graph contexts).
class Source {
 public:
  Source(MarkovMeasure chain);
  Source(std::shared_ptr<const ParryMeasure> parry);

  std::size_t alphabet_size() const;
  CylinderDistribution cylinders(std::size_t depth) const;
  // Upper bound on the entropy: H(X_t | X_1..X_{t-1}) from depth-t cylinders.
  double conditional_entropy(std::size_t depth) const;
  Word sample(std::size_t n, Rng& rng) const;

 private:
  std::variant<MarkovMeasure, std::shared_ptr<const ParryMeasure>> impl_;
};

// max over P with |P| <= t of |μ_Q(P) - ν(P)|; ν must have depth >= t.
double typicality_deviation(SymbolSpan word, const CylinderDistribution& nu, std::size_t t);

struct TypicalWord {
  Word word;
  double deviation = 0.0;
  std::size_t attempts = 0;
};

// Samples ν until a word of length n lands within δ of ν on every block of
// length at most t (and is S-admissible when S is given). Throws
// typicality_failure with the best deviation seen once `budget` draws are spent.
TypicalWord typical_word(const Source& nu, std::size_t n, std::size_t t, double delta,
                         const Subshift* shift, std::uint64_t seed, std::size_t budget = 20000);

}  // namespace symdyn
