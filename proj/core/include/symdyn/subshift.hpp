#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

// Sorted, duplicate-free set of words sharing one fixed length, stored flat.
class BlockSet {
 public:
  class Builder {
   public:
    explicit Builder(std::size_t length) : length_(length) {}
    void add(SymbolSpan block);
    void add(const Word& block) { add(block.span()); }
    std::size_t pending() const noexcept { return data_.size() / (length_ ? length_ : 1); }
    // Sorts and drops repeats. `duplicates` receives the number dropped.
    BlockSet finish(std::size_t* duplicates = nullptr) &&;

   private:
    std::size_t length_;
    std::size_t count_ = 0;
    std::vector<Symbol> data_;
  };

  BlockSet() = default;
  static BlockSet from_words(std::size_t length, const std::vector<Word>& words,
                             std::size_t* duplicates = nullptr);

  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  SymbolSpan operator[](std::size_t i) const {
    return SymbolSpan(data_).subspan(i * length_, length_);
  }
  Word word(std::size_t i) const { return Word((*this)[i]); }
  std::vector<Word> words() const;

  bool contains(SymbolSpan block) const { return index_of(block).has_value(); }
  std::optional<std::size_t> index_of(SymbolSpan block) const;
  // Index range [first, last) of blocks starting with `prefix`.
  std::pair<std::size_t, std::size_t> prefix_range(SymbolSpan prefix) const;
  Symbol max_symbol() const;

  friend bool operator==(const BlockSet&, const BlockSet&) = default;

 private:
  std::size_t length_ = 0;
  std::size_t count_ = 0;
  std::vector<Symbol> data_;
};

// A subshift of finite type presented by a defining system of blocks of length
// exactly `order`: a word of length >= order is admissible iff every length-order
// window lies in the system. Words shorter than the order are admissible iff they
// occur as a sub-window of some defining block.
class Subshift {
 public:
  Subshift(std::size_t alphabet_size, std::size_t order, const std::vector<Word>& defining_blocks);
  Subshift(std::size_t alphabet_size, BlockSet defining_blocks);

  static Subshift full_shift(std::size_t alphabet_size);
  // Order 2, allowed {00, 01, 10}.
  static Subshift golden_mean();

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t order() const noexcept { return blocks_.length(); }
  const BlockSet& blocks() const noexcept { return blocks_; }

  bool allows(SymbolSpan window) const { return blocks_.contains(window); }
  bool admissible(SymbolSpan word) const;
  bool admissible(const Word& word) const { return admissible(word.span()); }
  // Start index of the first disallowed window, or nullopt when admissible.
  std::optional<std::size_t> first_violation(SymbolSpan word) const;

  friend bool operator==(const Subshift&, const Subshift&) = default;

 private:
  void validate() const;

  std::size_t alphabet_size_ = 0;
  BlockSet blocks_;
};

// Bl_r(S): the admissible words of length r, sorted.
std::vector<Word> enumerate_blocks(const Subshift& shift, std::size_t r, unsigned threads = 1);

// θ_r(S) = |Bl_r(S)|, computed by path counting. Exact while below 2^64.
long double count_blocks(const Subshift& shift, std::size_t r);

struct EntropyEstimate {
  std::size_t depth = 0;
  long double theta = 0;
  // log θ_r / r in nats. log θ_r is subadditive, so this is an upper bound on
  // h(S) that decreases to it as r grows.
  double estimate = 0.0;
};

EntropyEstimate entropy_estimate(const Subshift& shift, std::size_t r);

// log of the Perron root of the essential follower graph: h(S) itself.
double spectral_entropy(const Subshift& shift);

struct TransitionReport {
  bool transitive = false;
  bool mixing = false;
  std::optional<std::size_t> transition_length;
  // Set when mixing could not be settled below the search cap.
  bool undecided_at_cap = false;
  std::size_t essential_vertices = 0;
  std::size_t period = 0;
};

// `cap` bounds the path-length search; 0 selects 4·v^2.
TransitionReport analyze_transitions(const Subshift& shift, std::size_t cap = 0);

// Lexicographically least U with |U| = length and P·U·Q admissible.
Word transition_word(const Subshift& shift, const Word& prefix, const Word& suffix,
                     std::size_t length);

// (S, σ^n) recoded over the alphabet Bl_n(S) (symbol i = i-th block in
// lexicographic order). The returned order is 1 + ceil((N-1)/n) so every
// window of S falls inside one recoded block.
struct PowerRecoding {
  Subshift shift;
  std::vector<Word> symbols;
};
PowerRecoding power_recode(const Subshift& shift, std::size_t n);

}  // namespace symdyn
