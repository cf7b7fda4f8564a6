#include "symdyn/synthesizers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

#include "internal.hpp"
#include "symdyn/error.hpp"
#include "symdyn/follower_graph.hpp"
#include "symdyn/random.hpp"
#include "symdyn/typical.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "synthesizers";
constexpr std::size_t kTypicalDepth = 2;
constexpr std::size_t kMarkerTransitionCap = 64;
constexpr std::size_t kInnerCheck = 4096;
constexpr std::uint64_t kPiece = 1024;

bool in_language(const FollowerGraph& g, std::size_t k, SymbolSpan w) {
  for (Symbol s : w)
    if (s >= k) return false;
  const std::size_t m = g.context_length();
  if (w.size() < m) {
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      const auto ctx = g.vertex(v);
      if (std::equal(w.begin(), w.end(), ctx.begin())) return true;
    }
    return false;
  }
  auto v = g.find_vertex(w.first(m));
  if (!v) return false;
  for (std::size_t i = m; i < w.size(); ++i) {
    bool moved = false;
    for (const auto& e : g.successors(*v)) {
      if (e.symbol == w[i]) {
        v = e.to;
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return true;
}

// Shortest, then lexicographically least, connecting words in one SFT.
class Joiner {
 public:
  explicit Joiner(const Subshift& shift) : graph_(shift, true) {
    if (graph_.vertex_count() == 0) fail(ErrorCode::empty_language, kModule, "subshift has no infinite points");
  }

  std::size_t context_length() const { return graph_.context_length(); }

  // U with tail·U·head in the language; tail needs at least m symbols.
  Word connect(SymbolSpan tail, SymbolSpan head) const {
    const std::size_t m = graph_.context_length();
    const std::size_t V = graph_.vertex_count();
    if (tail.size() < m) fail(ErrorCode::internal, kModule, "connection tail shorter than the context");
    const auto start = graph_.find_vertex(tail.last(m));
    if (!start) fail(ErrorCode::no_transition, kModule, "segment ends outside the essential graph");
    std::vector<char> reads(V, 0);
    for (std::size_t v = 0; v < V; ++v) {
      std::optional<std::size_t> cur = v;
      for (Symbol a : head) {
        cur = step(*cur, a);
        if (!cur) break;
      }
      reads[v] = cur.has_value();
    }
    std::vector<char> layer(V, 0), next(V, 0);
    layer[*start] = 1;
    const std::size_t cap = 4 * V * V + 4;
    for (std::size_t len = 0; len <= cap; ++len) {
      for (std::size_t v = 0; v < V; ++v) {
        if (layer[v] && reads[v]) return least_path(*start, len, reads);
      }
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t v = 0; v < V; ++v) {
        if (!layer[v]) continue;
        for (const auto& e : graph_.successors(v)) next[e.to] = 1;
      }
      layer.swap(next);
    }
    fail(ErrorCode::no_transition, kModule, "no connecting word between consecutive segments");
  }

 private:
  std::optional<std::size_t> step(std::size_t v, Symbol a) const {
    for (const auto& e : graph_.successors(v))
      if (e.symbol == a) return e.to;
    return std::nullopt;
  }

  Word least_path(std::size_t start, std::size_t len, const std::vector<char>& reads) const {
    const std::size_t V = graph_.vertex_count();
    std::vector<std::vector<char>> ok(len + 1, std::vector<char>(V, 0));
    ok[0] = reads;
    for (std::size_t j = 1; j <= len; ++j) {
      for (std::size_t v = 0; v < V; ++v) {
        for (const auto& e : graph_.successors(v)) {
          if (ok[j - 1][e.to]) {
            ok[j][v] = 1;
            break;
          }
        }
      }
    }
    Word out;
    std::size_t v = start;
    for (std::size_t j = len; j > 0; --j) {
      for (const auto& e : graph_.successors(v)) {
        if (ok[j - 1][e.to]) {
          out.push_back(e.symbol);
          v = e.to;
          break;
        }
      }
    }
    return out;
  }

  FollowerGraph graph_;
};

struct PieceRequest {
  std::size_t source;
  std::size_t length;
};

// Everything a piece generator shares across replays.
struct PiecePlan {
  Subshift shift;
  Joiner joiner;
  std::vector<Source> sources;
  std::function<PieceRequest(std::size_t)> schedule;
};

class PieceGenerator final : public StreamGenerator {
 public:
  PieceGenerator(std::shared_ptr<const PiecePlan> plan, std::uint64_t seed) : plan_(std::move(plan)), rng_(seed) {}

  Symbol next() override {
    while (pos_ == buf_.size()) refill();
    return buf_[pos_++];
  }

 private:
  void refill() {
    buf_.clear();
    pos_ = 0;
    const PieceRequest req = plan_->schedule(index_++);
    const std::size_t n = std::max(req.length, plan_->joiner.context_length());
    const double delta = 5.0 / std::sqrt(static_cast<double>(n));
    Word w = typical_word(plan_->sources[req.source], n, kTypicalDepth, delta, &plan_->shift, rng_.split()).word;
    if (!tail_.empty()) {
      const Word u = plan_->joiner.connect(tail_.span(), w.sub(0, std::min(w.size(), plan_->joiner.context_length())));
      buf_.insert(buf_.end(), u.begin(), u.end());
    }
    buf_.insert(buf_.end(), w.begin(), w.end());
    const std::size_t m = plan_->joiner.context_length();
    tail_ = w.slice(w.size() - m, m);
  }

  std::shared_ptr<const PiecePlan> plan_;
  Rng rng_;
  std::vector<Symbol> buf_;
  std::size_t pos_ = 0;
  std::size_t index_ = 0;
  Word tail_;
};

std::uint64_t grow(std::uint64_t base, std::uint64_t factor, std::size_t power) {
  std::uint64_t v = base;
  for (std::size_t i = 0; i < power && v < (std::uint64_t{1} << 40); ++i) v *= factor;
  return v;
}

void check_measure(const MarkovMeasure& mu, const Subshift& shift) {
  if (mu.states() != shift.alphabet_size())
    fail(ErrorCode::invalid_measure, kModule, "measure alphabet differs from the subshift alphabet");
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string measure_text(const MarkovMeasure& mu) {
  std::string out = "markov:";
  for (std::size_t a = 0; a < mu.states(); ++a) {
    if (a) out += ';';
    for (std::size_t b = 0; b < mu.states(); ++b) {
      if (b) out += ',';
      out += number_text(mu.transition(a, b));
    }
  }
  return out;
}

StreamSpec api_spec(const std::string& kind, std::uint64_t seed) {
  StreamSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  return spec;
}

SymbolStream piece_stream(StreamSpec spec, const Subshift& shift, std::vector<MarkovMeasure> measures,
                          std::function<PieceRequest(std::size_t)> schedule, std::uint64_t seed) {
  std::vector<Source> sources;
  for (auto& mu : measures) {
    check_measure(mu, shift);
    sources.emplace_back(std::move(mu));
  }
  auto plan = std::make_shared<const PiecePlan>(PiecePlan{shift, Joiner(shift), std::move(sources), std::move(schedule)});
  const std::size_t k = shift.alphabet_size();
  return SymbolStream(std::move(spec), k, [plan, seed] { return std::make_unique<PieceGenerator>(plan, seed); });
}

bool same_measure(const MarkovMeasure& a, const MarkovMeasure& b) {
  return a.transition() == b.transition() && a.stationary() == b.stationary();
}

// One path of the chain, grown in chunks. Each chunk is the best of several
// chain continuations, scored by the ρ-weighted distance between the running
// window counts and ν, so that E_n(x) approaches ν at every prefix and not
// only in expectation. Segments of lengths 64·2^j are checked δ-typical.
struct GenericPlan {
  MarkovMeasure chain;
  Subshift shift;
  std::size_t depth = 0;
  std::vector<std::vector<double>> target;
  std::vector<double> weight;
};

constexpr std::size_t kChunk = 32;
constexpr std::size_t kCandidates = 8;

class GenericGenerator final : public StreamGenerator {
 public:
  GenericGenerator(std::shared_ptr<const GenericPlan> plan, std::uint64_t seed) : plan_(std::move(plan)), rng_(seed) {
    const std::size_t k = plan_->chain.states();
    counts_.resize(plan_->depth + 1);
    windows_.assign(plan_->depth + 1, 0);
    for (std::size_t r = 1, cells = k; r <= plan_->depth; ++r, cells *= k) counts_[r].assign(cells, 0.0);
  }

  Symbol next() override {
    while (pos_ == buf_.size()) refill();
    return buf_[pos_++];
  }

 private:
  void refill() {
    buf_.clear();
    pos_ = 0;
    const auto length = static_cast<std::size_t>(grow(64, 2, segment_++));
    const std::size_t hist = std::max(plan_->depth, plan_->shift.order());
    while (buf_.size() < length) {
      Word best;
      double best_score = 0;
      for (std::size_t c = 0; c < kCandidates; ++c) {
        Word w = continuation();
        Word probe(std::vector<Symbol>(history_.end() - static_cast<std::ptrdiff_t>(std::min(history_.size(), hist - 1)),
                                       history_.end()));
        probe += w;
        if (!plan_->shift.admissible(probe)) continue;
        apply(w, +1.0);
        const double sc = score();
        apply(w, -1.0);
        if (best.empty() || sc < best_score) {
          best = std::move(w);
          best_score = sc;
        }
      }
      if (best.empty()) fail(ErrorCode::invalid_measure, kModule, "the measure is not supported in the subshift");
      apply(best, +1.0);
      for (Symbol a : best) {
        history_.push_back(a);
        if (history_.size() > hist) history_.erase(history_.begin());
      }
      buf_.insert(buf_.end(), best.begin(), best.end());
    }
    const double delta = 5.0 / std::sqrt(static_cast<double>(length));
    const double dev =
        typicality_deviation(SymbolSpan(buf_), markov_cylinders(plan_->chain, kTypicalDepth), kTypicalDepth);
    if (dev > delta) {
      std::ostringstream msg;
      msg << "segment of length " << length << " has deviation " << dev << " > " << delta;
      fail(ErrorCode::typicality_failure, kModule, msg.str());
    }
  }

  Word continuation() {
    const auto& p = plan_->chain.transition();
    Word w;
    Symbol cur = history_.empty() ? static_cast<Symbol>(rng_.pick(plan_->chain.stationary())) : history_.back();
    if (history_.empty()) w.push_back(cur);
    while (w.size() < kChunk) {
      cur = static_cast<Symbol>(rng_.pick(p[cur]));
      w.push_back(cur);
    }
    return w;
  }

  // Adds (sign +1) or removes (-1) the windows ending inside w.
  void apply(const Word& w, double sign) {
    const std::size_t k = plan_->chain.states();
    std::vector<Symbol> seq(history_.end() - static_cast<std::ptrdiff_t>(std::min(history_.size(), plan_->depth - 1)),
                            history_.end());
    const std::size_t before = seq.size();
    seq.insert(seq.end(), w.begin(), w.end());
    for (std::size_t i = before; i < seq.size(); ++i) {
      std::size_t idx = 0;
      for (std::size_t r = 1; r <= plan_->depth && r <= i + 1; ++r) {
        // Window seq[i-r+1 .. i]; extend the index on the left.
        std::size_t pow = 1;
        for (std::size_t q = 1; q < r; ++q) pow *= k;
        idx += seq[i + 1 - r] * pow;
        counts_[r][idx] += sign;
        windows_[r] += sign;
      }
    }
  }

  double score() const {
    double total = 0;
    for (std::size_t r = 1; r <= plan_->depth; ++r) {
      double sum = 0;
      const auto& c = counts_[r];
      const auto& t = plan_->target[r];
      for (std::size_t i = 0; i < c.size(); ++i) sum += std::fabs(c[i] - windows_[r] * t[i]);
      total += plan_->weight[r] * sum;
    }
    return total;
  }

  std::shared_ptr<const GenericPlan> plan_;
  Rng rng_;
  std::vector<std::vector<double>> counts_;
  std::vector<double> windows_;
  std::vector<Symbol> history_;
  std::vector<Symbol> buf_;
  std::size_t pos_ = 0;
  std::size_t segment_ = 0;
};

// ---------------------------------------------------------------- wrappers

class PrefixedGenerator final : public StreamGenerator {
 public:
  PrefixedGenerator(Word prefix, std::unique_ptr<StreamGenerator> inner)
      : prefix_(std::move(prefix)), inner_(std::move(inner)) {}
  Symbol next() override { return pos_ < prefix_.size() ? prefix_[pos_++] : inner_->next(); }

 private:
  Word prefix_;
  std::unique_ptr<StreamGenerator> inner_;
  std::size_t pos_ = 0;
};

struct ExcursionPlan {
  Joiner joiner;
  Word marker;
};

class ExcursionGenerator final : public StreamGenerator {
 public:
  ExcursionGenerator(std::shared_ptr<const ExcursionPlan> plan, std::unique_ptr<StreamGenerator> base)
      : plan_(std::move(plan)), base_(std::move(base)) {}

  Symbol next() override {
    if (pending_.empty()) {
      if (base_pos_ == next_mark_) {
        excursion();
        advance_mark();
      }
      if (pending_.empty()) {
        pending_.push_back(take_base());
      }
    }
    const Symbol s = pending_.front();
    pending_.pop_front();
    tail_.push_back(s);
    if (tail_.size() > plan_->joiner.context_length()) tail_.pop_front();
    return s;
  }

 private:
  Symbol take_base() {
    ++base_pos_;
    if (!lookahead_.empty()) {
      const Symbol s = lookahead_.front();
      lookahead_.pop_front();
      return s;
    }
    return base_->next();
  }

  void advance_mark() {
    ++j_;
    next_mark_ += grow(j_, 4, j_);
  }

  void excursion() {
    const std::size_t m = plan_->joiner.context_length();
    // Too early to have a context; the next mark takes over.
    if (tail_.size() < m) return;
    while (lookahead_.size() < m) lookahead_.push_back(base_->next());
    const Word tail(std::vector<Symbol>(tail_.begin(), tail_.end()));
    const Word& marker = plan_->marker;
    const Word in = plan_->joiner.connect(tail.span(), marker.span());
    const Word head(std::vector<Symbol>(lookahead_.begin(), lookahead_.begin() + static_cast<std::ptrdiff_t>(m)));
    const Word out = plan_->joiner.connect(marker.sub(marker.size() - m, m), head.span());
    for (const Word* w : {&in, &marker, &out}) pending_.insert(pending_.end(), w->begin(), w->end());
  }

  std::shared_ptr<const ExcursionPlan> plan_;
  std::unique_ptr<StreamGenerator> base_;
  std::deque<Symbol> pending_;
  std::deque<Symbol> lookahead_;
  std::deque<Symbol> tail_;
  std::uint64_t base_pos_ = 0;
  std::uint64_t j_ = 1;
  std::uint64_t next_mark_ = 4;
};

void check_inner(const SymbolStream& inner, const Subshift& lambda) {
  if (inner.alphabet_size() > lambda.alphabet_size())
    fail(ErrorCode::parameter, kModule, "inner stream alphabet exceeds the subshift alphabet");
  if (!lambda.admissible(Word(inner.prefix(kInnerCheck))))
    fail(ErrorCode::parameter, kModule, "inner stream is not admissible in its subshift");
}

Word checked_marker(const Word& marker, const Subshift& lambda, const Subshift& ambient) {
  const FollowerGraph gi(lambda, true), ga(ambient, true);
  if (marker.size() < ga.context_length())
    fail(ErrorCode::parameter, kModule, "marker shorter than the ambient context length");
  if (!in_language(ga, ambient.alphabet_size(), marker.span()))
    fail(ErrorCode::parameter, kModule, "marker " + marker.to_string() + " is not in the ambient language");
  if (gi.vertex_count() > 0 && in_language(gi, lambda.alphabet_size(), marker.span()))
    fail(ErrorCode::no_marker, kModule, "marker " + marker.to_string() + " occurs in the inner shift");
  return marker;
}

std::optional<Word> marker_param(const StreamSpec& s) {
  const std::string v = s.get("marker", "");
  if (v.empty()) return std::nullopt;
  return Word::from_digits(v);
}

// ---------------------------------------------------------------- kinds

Subshift shift_param(const StreamSpec& s, std::size_t k) {
  const std::string v = s.get("sft", "");
  return v.empty() ? Subshift::full_shift(k) : parse_subshift_param(s, v);
}

std::size_t measure_alphabet(const StreamSpec& s, const char* key) {
  return parse_measure_param(s, s.require(key)).states();
}

std::vector<std::pair<std::string, StreamKind>> kinds() {
  std::vector<std::pair<std::string, StreamKind>> out;
  out.emplace_back("generic", StreamKind{
      [](const StreamSpec& s) { return measure_alphabet(s, "measure"); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto nu = parse_measure_param(s, s.require("measure"));
        return synthesize_generic(nu, shift_param(s, nu.states()), s.seed_or_fail()).factory();
      }});
  out.emplace_back("saturated", StreamKind{
      [](const StreamSpec& s) { return measure_alphabet(s, "mu1"); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto a = parse_measure_param(s, s.require("mu1"));
        const auto b = parse_measure_param(s, s.require("mu2"));
        return synthesize_saturated(a, b, shift_param(s, a.states()), s.seed_or_fail()).factory();
      }});
  out.emplace_back("level", StreamKind{
      [](const StreamSpec& s) { return measure_alphabet(s, "mu1"); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto a = parse_measure_param(s, s.require("mu1"));
        const auto b = parse_measure_param(s, s.require("mu2"));
        const auto phi = parse_observable_param(a.states(), s.require("phi"));
        const double level = s.number("a", std::nan(""));
        if (std::isnan(level)) fail(ErrorCode::parameter, kModule, "level stream needs param a");
        return synthesize_level(a, b, phi, level, shift_param(s, a.states()), s.seed_or_fail()).factory();
      }});
  out.emplace_back("irregular", StreamKind{
      [](const StreamSpec& s) { return measure_alphabet(s, "mu1"); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto a = parse_measure_param(s, s.require("mu1"));
        const auto b = parse_measure_param(s, s.require("mu2"));
        const auto phi = parse_observable_param(a.states(), s.require("phi"));
        return synthesize_irregular(a, b, phi, shift_param(s, a.states()), s.seed_or_fail()).factory();
      }});
  out.emplace_back("nonrecurrent", StreamKind{
      [](const StreamSpec& s) { return parse_subshift_param(s, s.require("ambient")).alphabet_size(); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const SymbolStream inner = SymbolStream::load(s.resolve(s.require("inner")));
        return synthesize_nonrecurrent(inner, parse_subshift_param(s, s.require("lambda")),
                                       parse_subshift_param(s, s.require("ambient")), marker_param(s))
            .factory();
      }});
  out.emplace_back("case2", StreamKind{
      [](const StreamSpec& s) { return parse_subshift_param(s, s.require("ambient")).alphabet_size(); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const SymbolStream base = SymbolStream::load(s.resolve(s.require("base")));
        return case2_wrapper(base, parse_subshift_param(s, s.require("lambda")),
                             parse_subshift_param(s, s.require("ambient")), marker_param(s))
            .factory();
      }});
  return out;
}

}  // namespace

namespace detail {
std::vector<std::pair<std::string, StreamKind>> construction_stream_kinds() { return kinds(); }
}  // namespace detail

SymbolStream synthesize_generic(const MarkovMeasure& nu, const Subshift& shift, std::uint64_t seed) {
  auto spec = api_spec("generic", seed);
  spec.params["measure"] = measure_text(nu);
  check_measure(nu, shift);
  auto plan = std::make_shared<GenericPlan>(GenericPlan{nu, shift, 1, {}, {}});
  const std::size_t k = nu.states();
  for (std::size_t cells = k * k; plan->depth < 6 && cells <= 4096; cells *= k) ++plan->depth;
  plan->target.resize(plan->depth + 1);
  plan->weight.resize(plan->depth + 1);
  for (std::size_t r = 1, cells = k; r <= plan->depth; ++r, cells *= k) {
    plan->target[r] = markov_cylinders(nu, r).values();
    plan->weight[r] = 1.0 / (std::ldexp(1.0, static_cast<int>(r)) * static_cast<double>(cells));
  }
  std::shared_ptr<const GenericPlan> shared = plan;
  return SymbolStream(std::move(spec), k, [shared, seed] { return std::make_unique<GenericGenerator>(shared, seed); });
}

SymbolStream synthesize_saturated(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Subshift& shift,
                                  std::uint64_t seed) {
  if (same_measure(mu1, mu2)) return synthesize_generic(mu1, shift, seed);
  auto spec = api_spec("saturated", seed);
  spec.params["mu1"] = measure_text(mu1);
  spec.params["mu2"] = measure_text(mu2);
  auto schedule = [](std::size_t i) {
    for (std::size_t s = 0;; ++s) {
      const std::uint64_t len = grow(64, 3, s);
      const std::uint64_t pieces = (len + kPiece - 1) / kPiece;
      if (i >= pieces) {
        i -= pieces;
        continue;
      }
      const std::uint64_t piece = std::min(kPiece, len - i * kPiece);
      std::size_t source = 0;
      switch (s % 4) {
        case 0: source = 0; break;
        case 2: source = 1; break;
        default: source = i % 2; break;
      }
      return PieceRequest{source, static_cast<std::size_t>(piece)};
    }
  };
  return piece_stream(std::move(spec), shift, {mu1, mu2}, schedule, seed);
}

double level_proportion(double integral1, double integral2, double a) {
  const double lo = std::min(integral1, integral2), hi = std::max(integral1, integral2);
  if (!(a > lo && a < hi)) {
    std::ostringstream msg;
    msg << "level " << a << " outside the open interval (" << lo << ", " << hi << ")";
    fail(ErrorCode::range, kModule, msg.str());
  }
  return (integral2 - a) / (integral2 - integral1);
}

SymbolStream synthesize_level(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Observable& phi,
                              double a, const Subshift& shift, std::uint64_t seed) {
  const double theta = level_proportion(phi.integral(mu1), phi.integral(mu2), a);
  auto spec = api_spec("level", seed);
  spec.params["mu1"] = measure_text(mu1);
  spec.params["mu2"] = measure_text(mu2);
  spec.params["a"] = number_text(a);
  auto schedule = [theta](std::size_t i) {
    const std::size_t cycle = 64 * (i / 2 + 1);
    const auto first = static_cast<std::size_t>(std::llround(theta * static_cast<double>(cycle)));
    const std::size_t clamped = std::clamp<std::size_t>(first, 8, cycle - 8);
    return i % 2 == 0 ? PieceRequest{0, clamped} : PieceRequest{1, cycle - clamped};
  };
  return piece_stream(std::move(spec), shift, {mu1, mu2}, schedule, seed);
}

SymbolStream synthesize_irregular(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Observable& phi,
                                  const Subshift& shift, std::uint64_t seed) {
  if (phi.integral(mu1) == phi.integral(mu2))
    fail(ErrorCode::degenerate_observable, kModule, "the two measures give the observable equal integrals");
  auto spec = api_spec("irregular", seed);
  spec.params["mu1"] = measure_text(mu1);
  spec.params["mu2"] = measure_text(mu2);
  return piece_stream(std::move(spec), shift, {mu1, mu2},
                      [](std::size_t i) { return PieceRequest{i % 2, static_cast<std::size_t>(grow(64, 3, i))}; },
                      seed);
}

Word marker_word(const Subshift& inner, const Subshift& ambient, std::size_t max_length) {
  const FollowerGraph gi(inner, true), ga(ambient, true);
  for (std::size_t r = 1; r <= max_length; ++r) {
    for (const Word& w : enumerate_blocks(ambient, r)) {
      if (!in_language(ga, ambient.alphabet_size(), w.span())) continue;
      if (gi.vertex_count() > 0 && in_language(gi, inner.alphabet_size(), w.span())) continue;
      const std::size_t m = ga.context_length();
      if (w.size() >= m) return w;
      for (std::size_t v = 0; v < ga.vertex_count(); ++v) {
        const auto ctx = ga.vertex(v);
        if (std::equal(w.begin(), w.end(), ctx.begin())) return Word(ctx);
      }
    }
  }
  fail(ErrorCode::no_marker, kModule,
       "every block of the ambient shift up to length " + std::to_string(max_length) + " occurs in the inner shift");
}

SymbolStream synthesize_nonrecurrent(const SymbolStream& inner, const Subshift& lambda, const Subshift& ambient,
                                     const std::optional<Word>& chosen) {
  check_inner(inner, lambda);
  const Word marker = chosen ? checked_marker(*chosen, lambda, ambient) : marker_word(lambda, ambient);
  const std::size_t m = FollowerGraph(ambient, true).context_length();
  const Word head = inner.prefix_word(m);
  std::optional<Word> bridge;
  for (std::size_t len = 0; len <= kMarkerTransitionCap && !bridge; ++len)
    bridge = detail::connect_avoiding(ambient, marker, head, len, marker, false);
  if (!bridge) fail(ErrorCode::no_transition, kModule, "no transition from the marker into the inner stream");
  StreamSpec spec;
  spec.kind = "nonrecurrent";
  spec.params["marker"] = marker.to_string();
  const Word prefix = marker + *bridge;
  auto inner_factory = inner.factory();
  return SymbolStream(std::move(spec), ambient.alphabet_size(),
                      [prefix, inner_factory] { return std::make_unique<PrefixedGenerator>(prefix, inner_factory()); });
}

SymbolStream case2_wrapper(const SymbolStream& base, const Subshift& lambda, const Subshift& ambient,
                           const std::optional<Word>& chosen) {
  check_inner(base, lambda);
  Word marker = chosen ? checked_marker(*chosen, lambda, ambient) : marker_word(lambda, ambient);
  auto plan = std::make_shared<const ExcursionPlan>(ExcursionPlan{Joiner(ambient), std::move(marker)});
  StreamSpec spec;
  spec.kind = "case2";
  spec.params["marker"] = plan->marker.to_string();
  auto base_factory = base.factory();
  return SymbolStream(std::move(spec), ambient.alphabet_size(),
                      [plan, base_factory] { return std::make_unique<ExcursionGenerator>(plan, base_factory()); });
}

std::vector<std::uint64_t> excursion_positions(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  std::uint64_t p = 4;
  for (std::uint64_t j = 1; p <= limit; ++j) {
    out.push_back(p);
    p += grow(j + 1, 4, j + 1);
  }
  return out;
}

Observable parse_observable_param(std::size_t alphabet_size, const std::string& value) {
  if (value.rfind("indicator:", 0) == 0) return Observable::indicator(alphabet_size, Word::from_digits(value.substr(10)));
  if (value.rfind("values:", 0) == 0) {
    const std::string rest = value.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) fail(ErrorCode::parse, kModule, "observable values need '<depth>:<list>'");
    std::vector<double> values;
    std::stringstream ss(rest.substr(colon + 1));
    std::string tok;
    try {
      const auto depth = std::stoul(rest.substr(0, colon));
      while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
      return Observable(alphabet_size, depth, std::move(values));
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::parse, kModule, "bad number in observable '" + value + "'");
    }
  }
  fail(ErrorCode::parse, kModule, "observable must be indicator:<block> or values:<depth>:<list>");
}

}  // namespace symdyn
