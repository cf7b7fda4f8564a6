#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

using Symbol = std::uint16_t;
using SymbolSpan = std::span<const Symbol>;

// A finite block over {0, ..., k-1}. Juxtaposition is operator+.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  explicit Word(SymbolSpan symbols) : symbols_(symbols.begin(), symbols.end()) {}

  // Parses contiguous base-10 digits ("0110"). Throws parse error on anything else.
  static Word from_digits(std::string_view digits);
  static Word repeat(Symbol s, std::size_t n) { return Word(std::vector<Symbol>(n, s)); }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol max_symbol() const;

  SymbolSpan span() const noexcept { return symbols_; }
  SymbolSpan sub(std::size_t pos, std::size_t len) const { return span().subspan(pos, len); }
  Word slice(std::size_t pos, std::size_t len) const { return Word(sub(pos, len)); }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  void push_back(Symbol s) { symbols_.push_back(s); }
  Word& operator+=(const Word& other);
  Word& operator+=(SymbolSpan other);
  friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }

  // P ≺ Q: occurrence as a contiguous subblock.
  bool contains(SymbolSpan pattern) const;
  bool contains(const Word& pattern) const { return contains(pattern.span()); }
  std::size_t count_occurrences(SymbolSpan pattern) const;
  std::size_t count_occurrences(const Word& pattern) const { return count_occurrences(pattern.span()); }

  // Digits when every symbol < 10, otherwise dot-separated integers.
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.symbols_ <=> b.symbols_;
  }

 private:
  std::vector<Symbol> symbols_;
};

std::size_t count_occurrences(SymbolSpan text, SymbolSpan pattern);
bool spans_equal(SymbolSpan a, SymbolSpan b);
int compare_spans(SymbolSpan a, SymbolSpan b);

// All k^len words of the given length in lexicographic order.
std::vector<Word> all_words(std::size_t alphabet_size, std::size_t len);

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
  std::size_t operator()(SymbolSpan w) const noexcept;
};

}  // namespace symdyn
