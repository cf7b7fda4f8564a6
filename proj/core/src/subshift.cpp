#include "symdyn/subshift.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "symdyn/error.hpp"
#include "symdyn/follower_graph.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "subshift";

bool span_less(SymbolSpan a, SymbolSpan b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------- BlockSet

void BlockSet::Builder::add(SymbolSpan block) {
  if (block.size() != length_) {
    fail(ErrorCode::malformed_subshift, kModule,
         "block of length " + std::to_string(block.size()) + " in a system of length " +
             std::to_string(length_));
  }
  data_.insert(data_.end(), block.begin(), block.end());
  ++count_;
}

BlockSet BlockSet::Builder::finish(std::size_t* duplicates) && {
  BlockSet out;
  out.length_ = length_;
  const std::size_t len = length_;
  auto at = [&](std::size_t i) { return SymbolSpan(data_).subspan(i * len, len); };
  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return span_less(at(a), at(b)); });
  out.data_.reserve(count_ * len);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (kept > 0 && spans_equal(at(order[i]), out[kept - 1])) continue;
    auto s = at(order[i]);
    out.data_.insert(out.data_.end(), s.begin(), s.end());
    ++kept;
    out.count_ = kept;
  }
  out.count_ = kept;
  if (duplicates) *duplicates = count_ - kept;
  data_.clear();
  count_ = 0;
  return out;
}

BlockSet BlockSet::from_words(std::size_t length, const std::vector<Word>& words,
                              std::size_t* duplicates) {
  Builder b(length);
  for (const auto& w : words) b.add(w);
  return std::move(b).finish(duplicates);
}

std::vector<Word> BlockSet::words() const {
  std::vector<Word> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) out.emplace_back((*this)[i]);
  return out;
}

std::optional<std::size_t> BlockSet::index_of(SymbolSpan block) const {
  if (block.size() != length_ || count_ == 0) return std::nullopt;
  std::size_t lo = 0, hi = count_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const int c = compare_spans((*this)[mid], block);
    if (c == 0) return mid;
    if (c < 0) lo = mid + 1;
    else hi = mid;
  }
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> BlockSet::prefix_range(SymbolSpan prefix) const {
  auto head = [&](std::size_t i) { return (*this)[i].first(prefix.size()); };
  std::size_t lo = 0, hi = count_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (compare_spans(head(mid), prefix) < 0) lo = mid + 1;
    else hi = mid;
  }
  std::size_t first = lo;
  hi = count_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (compare_spans(head(mid), prefix) <= 0) lo = mid + 1;
    else hi = mid;
  }
  return {first, lo};
}

Symbol BlockSet::max_symbol() const {
  return data_.empty() ? 0 : *std::max_element(data_.begin(), data_.end());
}

// ---------------------------------------------------------------- Subshift

Subshift::Subshift(std::size_t alphabet_size, std::size_t order,
                   const std::vector<Word>& defining_blocks)
    : alphabet_size_(alphabet_size) {
  if (order == 0) fail(ErrorCode::malformed_subshift, kModule, "order must be at least 1");
  for (const auto& w : defining_blocks) {
    if (w.size() != order) {
      fail(ErrorCode::malformed_subshift, kModule,
           "block '" + w.to_string() + "' has length " + std::to_string(w.size()) +
               ", expected " + std::to_string(order));
    }
  }
  std::size_t dups = 0;
  blocks_ = BlockSet::from_words(order, defining_blocks, &dups);
  if (dups > 0) fail(ErrorCode::malformed_subshift, kModule, "duplicate defining block");
  validate();
}

Subshift::Subshift(std::size_t alphabet_size, BlockSet defining_blocks)
    : alphabet_size_(alphabet_size), blocks_(std::move(defining_blocks)) {
  validate();
}

void Subshift::validate() const {
  if (alphabet_size_ < 2) fail(ErrorCode::malformed_subshift, kModule, "alphabet size must be >= 2");
  if (blocks_.length() == 0) fail(ErrorCode::malformed_subshift, kModule, "order must be at least 1");
  if (blocks_.empty()) fail(ErrorCode::malformed_subshift, kModule, "defining system is empty");
  if (blocks_.max_symbol() >= alphabet_size_) {
    fail(ErrorCode::malformed_subshift, kModule,
         "symbol " + std::to_string(blocks_.max_symbol()) + " outside alphabet of size " +
             std::to_string(alphabet_size_));
  }
}

Subshift Subshift::full_shift(std::size_t alphabet_size) {
  std::vector<Word> blocks;
  for (std::size_t a = 0; a < alphabet_size; ++a) blocks.push_back(Word{static_cast<Symbol>(a)});
  return Subshift(alphabet_size, 1, blocks);
}

Subshift Subshift::golden_mean() {
  return Subshift(2, 2, {Word{0, 0}, Word{0, 1}, Word{1, 0}});
}

std::optional<std::size_t> Subshift::first_violation(SymbolSpan word) const {
  const std::size_t n = order();
  if (word.size() < n) {
    return admissible(word) ? std::nullopt : std::optional<std::size_t>(0);
  }
  for (std::size_t i = 0; i + n <= word.size(); ++i) {
    if (!allows(word.subspan(i, n))) return i;
  }
  return std::nullopt;
}

bool Subshift::admissible(SymbolSpan word) const {
  const std::size_t n = order();
  if (word.size() >= n) return !first_violation(word).has_value();
  if (word.empty()) return true;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    auto block = blocks_[b];
    for (std::size_t i = 0; i + word.size() <= n; ++i) {
      if (spans_equal(block.subspan(i, word.size()), word)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- enumeration

std::vector<Word> enumerate_blocks(const Subshift& shift, std::size_t r, unsigned threads) {
  if (r == 0) fail(ErrorCode::parameter, kModule, "block length r must be >= 1");
  const std::size_t n = shift.order();
  if (r < n) {
    BlockSet::Builder b(r);
    for (std::size_t i = 0; i < shift.blocks().size(); ++i) {
      auto block = shift.blocks()[i];
      for (std::size_t p = 0; p + r <= n; ++p) b.add(block.subspan(p, r));
    }
    return std::move(b).finish().words();
  }

  const FollowerGraph graph(shift, /*essential_only=*/false);
  const std::size_t m = graph.context_length();
  const std::size_t steps = r - m;
  const std::size_t vcount = graph.vertex_count();

  auto walk = [&](std::size_t first, std::size_t last, std::vector<Word>& out) {
    std::vector<Symbol> buf(r);
    struct Frame {
      std::uint32_t vertex;
      std::size_t next_edge;
    };
    std::vector<Frame> stack;
    for (std::size_t v = first; v < last; ++v) {
      auto ctx = graph.vertex(v);
      std::copy(ctx.begin(), ctx.end(), buf.begin());
      if (steps == 0) {
        out.emplace_back(buf);
        continue;
      }
      stack.clear();
      stack.push_back({static_cast<std::uint32_t>(v), 0});
      while (!stack.empty()) {
        auto& top = stack.back();
        auto succ = graph.successors(top.vertex);
        if (top.next_edge == succ.size()) {
          stack.pop_back();
          continue;
        }
        const auto e = succ[top.next_edge++];
        buf[m + stack.size() - 1] = e.symbol;
        if (stack.size() == steps) {
          out.emplace_back(buf);
        } else {
          stack.push_back({e.to, 0});
        }
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(vcount)));
  std::vector<std::vector<Word>> parts(workers);
  if (workers == 1) {
    walk(0, vcount, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (vcount + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = std::min(vcount, w * chunk), hi = std::min(vcount, lo + chunk);
      pool.emplace_back(walk, lo, hi, std::ref(parts[w]));
    }
    for (auto& t : pool) t.join();
  }
  std::vector<Word> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

long double count_blocks(const Subshift& shift, std::size_t r) {
  if (r == 0) fail(ErrorCode::parameter, kModule, "block length r must be >= 1");
  if (r < shift.order()) return static_cast<long double>(enumerate_blocks(shift, r).size());
  const FollowerGraph graph(shift, false);
  const std::size_t m = graph.context_length();
  std::vector<long double> cur(graph.vertex_count(), 1.0L), next(graph.vertex_count());
  for (std::size_t step = m; step < r; ++step) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
      if (cur[v] == 0) continue;
      for (const auto& e : graph.successors(v)) next[e.to] += cur[v];
    }
    cur.swap(next);
  }
  long double total = 0;
  for (auto c : cur) total += c;
  return total;
}

EntropyEstimate entropy_estimate(const Subshift& shift, std::size_t r) {
  if (r < shift.order()) {
    fail(ErrorCode::parameter, kModule,
         "entropy depth " + std::to_string(r) + " below order " + std::to_string(shift.order()));
  }
  EntropyEstimate e;
  e.depth = r;
  e.theta = count_blocks(shift, r);
  if (e.theta <= 0) fail(ErrorCode::empty_language, kModule, "no admissible blocks of length " + std::to_string(r));
  e.estimate = static_cast<double>(std::log(e.theta) / static_cast<long double>(r));
  return e;
}

double spectral_entropy(const Subshift& shift) {
  const FollowerGraph graph(shift, true);
  if (graph.vertex_count() == 0) fail(ErrorCode::empty_language, kModule, "shift space is empty");
  return std::log(graph.perron().root);
}

// ---------------------------------------------------------------- transitions

TransitionReport analyze_transitions(const Subshift& shift, std::size_t cap) {
  const FollowerGraph graph(shift, true);
  TransitionReport report;
  const std::size_t v = graph.vertex_count();
  report.essential_vertices = v;
  if (v == 0) fail(ErrorCode::empty_language, kModule, "shift space is empty");
  report.transitive = graph.strongly_connected();
  if (!report.transitive) return report;
  report.period = graph.period();
  if (report.period != 1) return report;

  if (cap == 0) cap = 4 * v * v;
  // Smallest L with every ordered pair joined by a path of length exactly L.
  // In an essential graph full reach at L persists for all larger L.
  std::size_t worst = 0;
  std::vector<char> cur(v), next(v);
  for (std::size_t src = 0; src < v; ++src) {
    std::fill(cur.begin(), cur.end(), 0);
    cur[src] = 1;
    std::size_t len = 0;
    bool full = false;
    while (len < cap) {
      ++len;
      std::fill(next.begin(), next.end(), 0);
      std::size_t reached = 0;
      for (std::size_t u = 0; u < v; ++u) {
        if (!cur[u]) continue;
        for (const auto& e : graph.successors(u)) {
          if (!next[e.to]) {
            next[e.to] = 1;
            ++reached;
          }
        }
      }
      cur.swap(next);
      if (reached == v) {
        full = true;
        break;
      }
    }
    if (!full) {
      report.undecided_at_cap = true;
      return report;
    }
    worst = std::max(worst, len);
  }
  report.mixing = true;
  report.transition_length = worst;
  return report;
}

Word transition_word(const Subshift& shift, const Word& prefix, const Word& suffix,
                     std::size_t length) {
  if (!shift.admissible(prefix)) fail(ErrorCode::parameter, kModule, "prefix block is not admissible");
  if (!shift.admissible(suffix)) fail(ErrorCode::parameter, kModule, "suffix block is not admissible");
  const std::size_t n = shift.order();
  const std::size_t k = shift.alphabet_size();
  auto no_transition = [&]() -> Word {
    fail(ErrorCode::no_transition, kModule,
         "no transition block of length " + std::to_string(length) + " from " + prefix.to_string() +
             " to " + suffix.to_string());
  };

  if (prefix.size() + length + suffix.size() < n) {
    for (const auto& u : all_words(k, length)) {
      if (shift.admissible(prefix + u + suffix)) return u;
    }
    return no_transition();
  }

  // Tail: the last min(n-1, |text|) symbols written so far.
  auto keep_tail = [&](std::vector<Symbol> s) {
    const std::size_t keep = std::min(n - 1, s.size());
    return std::vector<Symbol>(s.end() - static_cast<std::ptrdiff_t>(keep), s.end());
  };
  auto extend = [&](const std::vector<Symbol>& tail, Symbol a) -> std::optional<std::vector<Symbol>> {
    std::vector<Symbol> s = tail;
    s.push_back(a);
    if (s.size() >= n && !shift.allows(SymbolSpan(s).last(n))) return std::nullopt;
    return keep_tail(std::move(s));
  };
  auto closes = [&](const std::vector<Symbol>& tail) {
    std::vector<Symbol> s = tail;
    s.insert(s.end(), suffix.begin(), suffix.end());
    if (s.size() < n) return shift.admissible(SymbolSpan(s));
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      if (!shift.allows(SymbolSpan(s).subspan(i, n))) return false;
    }
    return true;
  };

  std::map<std::pair<std::vector<Symbol>, std::size_t>, bool> memo;
  auto feasible = [&](auto&& self, const std::vector<Symbol>& tail, std::size_t remaining) -> bool {
    if (remaining == 0) return closes(tail);
    auto key = std::make_pair(tail, remaining);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (std::size_t a = 0; a < k && !ok; ++a) {
      if (auto nt = extend(tail, static_cast<Symbol>(a))) ok = self(self, *nt, remaining - 1);
    }
    memo.emplace(std::move(key), ok);
    return ok;
  };

  std::vector<Symbol> tail = keep_tail(prefix.symbols());
  if (!feasible(feasible, tail, length)) return no_transition();
  Word out;
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      auto nt = extend(tail, static_cast<Symbol>(a));
      if (nt && feasible(feasible, *nt, length - i - 1)) {
        out.push_back(static_cast<Symbol>(a));
        tail = std::move(*nt);
        break;
      }
    }
  }
  return out;
}

PowerRecoding power_recode(const Subshift& shift, std::size_t n) {
  if (n == 0) fail(ErrorCode::parameter, kModule, "power must be >= 1");
  const std::size_t order = shift.order();
  const std::size_t m = 1 + (order - 1 + n - 1) / n;
  std::vector<Word> symbols = enumerate_blocks(shift, n);
  if (symbols.empty()) fail(ErrorCode::empty_language, kModule, "no blocks of length " + std::to_string(n));

  const auto long_words = enumerate_blocks(shift, n * m);
  BlockSet::Builder builder(m);
  std::vector<Symbol> tuple(m);
  for (const auto& w : long_words) {
    for (std::size_t j = 0; j < m; ++j) {
      const Word piece = w.slice(j * n, n);
      auto it = std::lower_bound(symbols.begin(), symbols.end(), piece);
      if (it == symbols.end() || *it != piece) {
        fail(ErrorCode::internal, kModule, "recoded piece missing from the block alphabet");
      }
      tuple[j] = static_cast<Symbol>(it - symbols.begin());
    }
    builder.add(SymbolSpan(tuple));
  }
  const std::size_t alphabet = std::max<std::size_t>(2, symbols.size());
  return PowerRecoding{Subshift(alphabet, std::move(builder).finish()), std::move(symbols)};
}

}  // namespace symdyn
