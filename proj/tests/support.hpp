#pragma once

// Conversions between library words and the plain sequences used by the oracles.

#include <string>
#include <vector>

#include "oracles.hpp"
#include "symdyn/subshift.hpp"
#include "symdyn/word.hpp"

inline oracle::Seq to_seq(const symdyn::Word& w) { return oracle::Seq(w.begin(), w.end()); }

inline symdyn::Word to_word(const oracle::Seq& s) {
  symdyn::Word w;
  for (int v : s) w.push_back(static_cast<symdyn::Symbol>(v));
  return w;
}

inline std::vector<oracle::Seq> to_seqs(const std::vector<symdyn::Word>& ws) {
  std::vector<oracle::Seq> out;
  for (const auto& w : ws) out.push_back(to_seq(w));
  return out;
}

inline oracle::Shift to_oracle(const symdyn::Subshift& s) {
  oracle::Shift o{static_cast<int>(s.alphabet_size()), static_cast<int>(s.order()), {}};
  for (const auto& w : s.blocks().words()) o.allowed.insert(to_seq(w));
  return o;
}

inline std::string fixture(const std::string& name) { return std::string(SYMDYN_FIXTURES) + "/" + name; }
