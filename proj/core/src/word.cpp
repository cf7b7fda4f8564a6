#include "symdyn/word.hpp"

#include <algorithm>

#include "symdyn/error.hpp"

namespace symdyn {

Word Word::from_digits(std::string_view digits) {
  std::vector<Symbol> out;
  out.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') {
      fail(ErrorCode::parse, "word", "expected base-10 digits, got '" + std::string(digits) + "'");
    }
    out.push_back(static_cast<Symbol>(c - '0'));
  }
  return Word(std::move(out));
}

Symbol Word::max_symbol() const {
  return symbols_.empty() ? 0 : *std::max_element(symbols_.begin(), symbols_.end());
}

Word& Word::operator+=(const Word& other) { return *this += other.span(); }

Word& Word::operator+=(SymbolSpan other) {
  symbols_.insert(symbols_.end(), other.begin(), other.end());
  return *this;
}

bool Word::contains(SymbolSpan pattern) const {
  if (pattern.empty()) return true;
  return std::search(symbols_.begin(), symbols_.end(), pattern.begin(), pattern.end()) !=
         symbols_.end();
}

std::size_t Word::count_occurrences(SymbolSpan pattern) const {
  return symdyn::count_occurrences(span(), pattern);
}

std::string Word::to_string() const {
  std::string out;
  const bool digits = max_symbol() < 10;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (digits) {
      out.push_back(static_cast<char>('0' + symbols_[i]));
    } else {
      if (i) out.push_back('.');
      out += std::to_string(symbols_[i]);
    }
  }
  return out;
}

std::size_t count_occurrences(SymbolSpan text, SymbolSpan pattern) {
  if (pattern.empty() || pattern.size() > text.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
    if (std::equal(pattern.begin(), pattern.end(), text.begin() + i)) ++n;
  }
  return n;
}

bool spans_equal(SymbolSpan a, SymbolSpan b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

int compare_spans(SymbolSpan a, SymbolSpan b) {
  auto r = std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  return r < 0 ? -1 : (r > 0 ? 1 : 0);
}

std::vector<Word> all_words(std::size_t alphabet_size, std::size_t len) {
  std::vector<Word> out;
  std::vector<Symbol> cur(len, 0);
  while (true) {
    out.emplace_back(cur);
    std::size_t i = len;
    while (i > 0) {
      --i;
      if (++cur[i] < alphabet_size) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (len == 0) return out;
  }
}

std::size_t WordHash::operator()(const Word& w) const noexcept { return (*this)(w.span()); }

std::size_t WordHash::operator()(SymbolSpan w) const noexcept {
  // FNV-1a over the symbol values.
  std::uint64_t h = 1469598103934665603ull;
  for (Symbol s : w) {
    h ^= s;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

}  // namespace symdyn
