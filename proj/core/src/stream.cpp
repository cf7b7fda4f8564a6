#include "symdyn/stream.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>

#include "internal.hpp"
#include "symdyn/error.hpp"
#include "symdyn/follower_graph.hpp"
#include "symdyn/parry.hpp"
#include "symdyn/sft_format.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "stream";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<Symbol> digits(const std::string& text, const char* what) {
  std::vector<Symbol> out;
  for (char c : text) {
    if (c < '0' || c > '9') fail(ErrorCode::parse, kModule, std::string(what) + " must be a digit string: '" + text + "'");
    out.push_back(static_cast<Symbol>(c - '0'));
  }
  return out;
}

std::size_t alphabet_for(const StreamSpec& spec, const std::vector<Symbol>& used) {
  std::size_t k = 2;
  for (Symbol s : used) k = std::max<std::size_t>(k, s + 1u);
  const auto declared = spec.integer("alphabet", 0);
  if (declared != 0) {
    if (declared < k) fail(ErrorCode::parameter, kModule, "declared alphabet smaller than the symbols used");
    k = declared;
  }
  return k;
}

// ---------------------------------------------------------------- core kinds

class LiteralGenerator final : public StreamGenerator {
 public:
  LiteralGenerator(std::vector<Symbol> prefix, Symbol tail) : prefix_(std::move(prefix)), tail_(tail) {}
  Symbol next() override { return pos_ < prefix_.size() ? prefix_[pos_++] : tail_; }

 private:
  std::vector<Symbol> prefix_;
  Symbol tail_;
  std::size_t pos_ = 0;
};

class PeriodicGenerator final : public StreamGenerator {
 public:
  explicit PeriodicGenerator(std::vector<Symbol> word) : word_(std::move(word)) {}
  Symbol next() override {
    const Symbol s = word_[pos_];
    pos_ = (pos_ + 1) % word_.size();
    return s;
  }

 private:
  std::vector<Symbol> word_;
  std::size_t pos_ = 0;
};

// x_n = 1 exactly when n is a power of `base` (n = 1, base, base^2, ...).
class SparseGenerator final : public StreamGenerator {
 public:
  explicit SparseGenerator(std::uint64_t base) : base_(base) {}
  Symbol next() override {
    const std::uint64_t n = n_++;
    if (n == mark_) {
      mark_ = mark_ > UINT64_MAX / base_ ? UINT64_MAX : mark_ * base_;
      return 1;
    }
    return 0;
  }

 private:
  std::uint64_t base_;
  std::uint64_t n_ = 0;
  std::uint64_t mark_ = 1;
};

// Runs of length 1, 2, 4, 8, ... alternating between two symbols.
class DoublingGenerator final : public StreamGenerator {
 public:
  DoublingGenerator(Symbol first, Symbol second) : sym_{first, second} {}
  Symbol next() override {
    if (left_ == 0) {
      run_ = run_ == 0 ? 1 : run_ * 2;
      left_ = run_;
      phase_ ^= 1;
    }
    --left_;
    return sym_[phase_];
  }

 private:
  Symbol sym_[2];
  std::uint64_t run_ = 0;
  std::uint64_t left_ = 0;
  int phase_ = 1;
};

// All words of length 1, then all of length 2, ... in lexicographic order.
class ChampernowneGenerator final : public StreamGenerator {
 public:
  explicit ChampernowneGenerator(std::size_t k) : k_(k), word_(1, 0) {}
  Symbol next() override {
    const Symbol s = word_[pos_++];
    if (pos_ == word_.size()) {
      pos_ = 0;
      std::size_t i = word_.size();
      while (i > 0 && word_[i - 1] + 1u == k_) word_[--i] = 0;
      if (i == 0) word_.assign(word_.size() + 1, 0);
      else ++word_[i - 1];
    }
    return s;
  }

 private:
  std::size_t k_;
  std::vector<Symbol> word_;
  std::size_t pos_ = 0;
};

class WalkGenerator final : public StreamGenerator {
 public:
  WalkGenerator(std::shared_ptr<const FollowerGraph> graph, std::shared_ptr<const std::vector<char>> live,
                std::vector<Symbol> prefix, std::size_t start)
      : graph_(std::move(graph)), live_(std::move(live)), prefix_(std::move(prefix)), vertex_(start) {}

  Symbol next() override {
    if (pos_ < prefix_.size()) return prefix_[pos_++];
    for (const auto& e : graph_->successors(vertex_)) {
      if ((*live_)[e.to]) {
        vertex_ = e.to;
        return e.symbol;
      }
    }
    fail(ErrorCode::internal, kModule, "walk reached a dead end");
  }

 private:
  std::shared_ptr<const FollowerGraph> graph_;
  std::shared_ptr<const std::vector<char>> live_;
  std::vector<Symbol> prefix_;
  std::size_t vertex_;
  std::size_t pos_ = 0;
};

std::map<std::string, StreamKind> builtin_kinds() {
  std::map<std::string, StreamKind> kinds;
  kinds["literal"] = {
      [](const StreamSpec& s) {
        auto used = digits(s.get("prefix", ""), "prefix");
        used.push_back(static_cast<Symbol>(s.integer("tail", 0)));
        return alphabet_for(s, used);
      },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        auto prefix = digits(s.get("prefix", ""), "prefix");
        const auto tail = static_cast<Symbol>(s.integer("tail", 0));
        return [prefix, tail] { return std::make_unique<LiteralGenerator>(prefix, tail); };
      }};
  kinds["periodic"] = {
      [](const StreamSpec& s) { return alphabet_for(s, digits(s.require("word"), "word")); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        auto word = digits(s.require("word"), "word");
        if (word.empty()) fail(ErrorCode::parameter, kModule, "periodic word must be nonempty");
        return [word] { return std::make_unique<PeriodicGenerator>(word); };
      }};
  kinds["sparse"] = {
      [](const StreamSpec& s) { return alphabet_for(s, {1}); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto base = s.integer("base", 2);
        if (base < 2) fail(ErrorCode::parameter, kModule, "sparse base must be >= 2");
        return [base] { return std::make_unique<SparseGenerator>(base); };
      }};
  kinds["doubling"] = {
      [](const StreamSpec& s) {
        return alphabet_for(s, {static_cast<Symbol>(s.integer("first", 0)), static_cast<Symbol>(s.integer("second", 1))});
      },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto a = static_cast<Symbol>(s.integer("first", 0));
        const auto b = static_cast<Symbol>(s.integer("second", 1));
        return [a, b] { return std::make_unique<DoublingGenerator>(a, b); };
      }};
  kinds["champernowne"] = {
      [](const StreamSpec& s) { return static_cast<std::size_t>(std::max<std::uint64_t>(2, s.integer("alphabet", 2))); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const auto k = static_cast<std::size_t>(std::max<std::uint64_t>(2, s.integer("alphabet", 2)));
        return [k] { return std::make_unique<ChampernowneGenerator>(k); };
      }};
  kinds["sft-walk"] = {
      [](const StreamSpec& s) { return parse_subshift_param(s, s.require("sft")).alphabet_size(); },
      [](const StreamSpec& s) -> SymbolStream::Factory {
        const Subshift shift = parse_subshift_param(s, s.require("sft"));
        return sft_walk_stream(shift, Word(digits(s.require("prefix"), "prefix")), s).factory();
      }};
  return kinds;
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, StreamKind> kinds;
};

Registry& registry() {
  static Registry* reg = [] {
    auto* r = new Registry;
    r->kinds = builtin_kinds();
    for (auto& [name, kind] : detail::construction_stream_kinds()) r->kinds[name] = std::move(kind);
    return r;
  }();
  return *reg;
}

StreamKind lookup(const std::string& name) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto it = reg.kinds.find(name);
  if (it == reg.kinds.end()) fail(ErrorCode::parameter, kModule, "unknown stream kind '" + name + "'");
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------- StreamSpec

StreamSpec StreamSpec::parse(std::istream& in, std::string base_dir) {
  StreamSpec spec;
  spec.base_dir = std::move(base_dir);
  std::string line;
  std::size_t line_no = 0;
  bool header = false, ended = false;
  auto error = [&](const std::string& msg) {
    fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "stream v1") error("expected header 'stream v1'");
      header = true;
      continue;
    }
    if (line == "end") {
      ended = true;
      break;
    }
    const auto sp = line.find_first_of(" \t");
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    if (key == "kind") {
      if (rest.empty()) error("kind needs a name");
      spec.kind = rest;
    } else if (key == "param") {
      const auto sp2 = rest.find_first_of(" \t");
      if (rest.empty() || sp2 == std::string::npos) error("expected 'param <key> <value>'");
      const std::string name = rest.substr(0, sp2);
      if (spec.params.count(name)) error("duplicate param '" + name + "'");
      spec.params[name] = trim(rest.substr(sp2));
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        spec.seed = std::stoull(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(rest);
      } catch (const std::exception&) {
        error("bad seed '" + rest + "'");
      }
    } else {
      error("unknown key '" + key + "'");
    }
  }
  if (!header) fail(ErrorCode::parse, kModule, "missing 'stream v1' header");
  if (!ended) fail(ErrorCode::parse, kModule, "missing 'end'");
  if (spec.kind.empty()) fail(ErrorCode::parse, kModule, "missing 'kind'");
  return spec;
}

StreamSpec StreamSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, kModule, "cannot open " + path);
  return parse(in, std::filesystem::path(path).parent_path().string());
}

std::string StreamSpec::to_text() const {
  std::string out = "stream v1\nkind " + kind + "\n";
  for (const auto& [k, v] : params) out += "param " + k + " " + v + "\n";
  if (seed) out += "seed " + std::to_string(*seed) + "\n";
  return out + "end\n";
}

const std::string& StreamSpec::require(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) fail(ErrorCode::parameter, kModule, "stream kind '" + kind + "' needs param '" + key + "'");
  return it->second;
}

std::string StreamSpec::get(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double StreamSpec::number(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::parse, kModule, "param '" + key + "' is not a number: '" + it->second + "'");
  }
}

std::uint64_t StreamSpec::integer(const std::string& key, std::uint64_t fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(it->second, &used);
    if (used != it->second.size() || it->second[0] == '-') throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::parse, kModule, "param '" + key + "' is not a non-negative integer: '" + it->second + "'");
  }
}

std::uint64_t StreamSpec::seed_or_fail() const {
  if (!seed) fail(ErrorCode::parameter, kModule, "stream kind '" + kind + "' samples and needs a seed");
  return *seed;
}

std::string StreamSpec::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

// ---------------------------------------------------------------- SymbolStream

SymbolStream::SymbolStream(StreamSpec spec) : spec_(std::move(spec)) {
  const StreamKind kind = lookup(spec_.kind);
  k_ = kind.alphabet(spec_);
  factory_ = kind.make(spec_);
}

SymbolStream::SymbolStream(StreamSpec spec, std::size_t alphabet_size, Factory factory)
    : spec_(std::move(spec)), k_(alphabet_size), factory_(std::move(factory)) {}

std::vector<Symbol> SymbolStream::prefix(std::size_t n) const {
  auto gen = factory_();
  std::vector<Symbol> out(n);
  for (auto& s : out) s = gen->next();
  return out;
}

void register_stream_kind(const std::string& name, StreamKind kind) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  reg.kinds[name] = std::move(kind);
}

std::vector<std::string> stream_kinds() {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> out;
  for (const auto& [name, kind] : reg.kinds) out.push_back(name);
  return out;
}

// ---------------------------------------------------------------- params

MarkovMeasure parse_measure_param(const StreamSpec& spec, const std::string& value) {
  auto numbers = [&](const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stod(trim(tok)));
      } catch (const std::exception&) {
        fail(ErrorCode::parse, kModule, "bad number '" + tok + "' in measure '" + value + "'");
      }
    }
    return out;
  };
  if (value.rfind("bernoulli:", 0) == 0) return MarkovMeasure::bernoulli(numbers(value.substr(10)));
  if (value.rfind("markov:", 0) == 0) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(value.substr(7));
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(numbers(row));
    return MarkovMeasure::from_transition(std::move(rows));
  }
  if (value.rfind("parry:", 0) == 0) {
    auto chain = ParryMeasure(parse_subshift_param(spec, value.substr(6))).symbol_chain();
    if (!chain) fail(ErrorCode::parameter, kModule, "Parry measure of '" + value.substr(6) + "' is not a symbol chain");
    return *chain;
  }
  return MarkovMeasure::load(spec.resolve(value));
}

Subshift parse_subshift_param(const StreamSpec& spec, const std::string& value) {
  if (value.rfind("full:", 0) == 0) {
    const auto k = std::stoul(value.substr(5));
    return Subshift::full_shift(k);
  }
  if (value == "golden") return Subshift::golden_mean();
  return load_sft(spec.resolve(value));
}

SymbolStream sft_walk_stream(const Subshift& shift, const Word& prefix, StreamSpec spec) {
  auto graph = std::make_shared<const FollowerGraph>(shift, false);
  const std::size_t m = graph->context_length();
  if (prefix.size() < m) fail(ErrorCode::parameter, kModule, "walk prefix shorter than the shift context");
  if (!shift.admissible(prefix)) fail(ErrorCode::parameter, kModule, "walk prefix is not admissible");
  // Keep vertices with an infinite forward path.
  const std::size_t n = graph->vertex_count();
  auto live = std::make_shared<std::vector<char>>(n, 1);
  std::vector<std::size_t> out_live(n);
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    out_live[v] = graph->successors(v).size();
    if (out_live[v] == 0) {
      (*live)[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const auto v = queue.back();
    queue.pop_back();
    for (auto p : graph->predecessors(v)) {
      if ((*live)[p] && --out_live[p] == 0) {
        (*live)[p] = 0;
        queue.push_back(p);
      }
    }
  }
  const auto start = graph->find_vertex(prefix.span().last(m));
  if (!start || !(*live)[*start]) fail(ErrorCode::parameter, kModule, "walk prefix cannot be extended forever");
  std::vector<Symbol> symbols = prefix.symbols();
  const std::size_t origin = *start;
  std::shared_ptr<const std::vector<char>> live_c = live;
  return SymbolStream(std::move(spec), shift.alphabet_size(), [graph, live_c, symbols, origin] {
    return std::make_unique<WalkGenerator>(graph, live_c, symbols, origin);
  });
}

CylinderDistribution empirical_distribution(const SymbolStream& x, std::size_t n, std::size_t t) {
  if (n < t) fail(ErrorCode::parameter, kModule, "horizon n must be >= depth t");
  const auto prefix = x.prefix(n + t - 1);
  return empirical_distribution(prefix, x.alphabet_size(), n, t);
}

}  // namespace symdyn
