#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/measures.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

class Subshift;

// Stateful producer of x_0, x_1, ... . Generators never end.
class StreamGenerator {
 public:
  virtual ~StreamGenerator() = default;
  virtual Symbol next() = 0;
};

// Text form:
//   stream v1
//   kind <name>
//   param <key> <value>     (repeated)
//   seed <u64>              (optional)
//   end
struct StreamSpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
  // Directory used to resolve relative file parameters.
  std::string base_dir;

  static StreamSpec parse(std::istream& in, std::string base_dir = {});
  static StreamSpec load(const std::string& path);
  std::string to_text() const;

  const std::string& require(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
  std::uint64_t seed_or_fail() const;
  std::string resolve(const std::string& path) const;
};

// Deterministic replayable point of Σ_k^+. Every analysis replays from x_0.
class SymbolStream {
 public:
  using Factory = std::function<std::unique_ptr<StreamGenerator>()>;

  // Generators come from the kind registry.
  explicit SymbolStream(StreamSpec spec);
  SymbolStream(StreamSpec spec, std::size_t alphabet_size, Factory factory);

  static SymbolStream load(const std::string& path) { return SymbolStream(StreamSpec::load(path)); }

  std::size_t alphabet_size() const noexcept { return k_; }
  const StreamSpec& spec() const noexcept { return spec_; }

  // x_0 .. x_{n-1}, independent of any cursor.
  std::vector<Symbol> prefix(std::size_t n) const;
  Word prefix_word(std::size_t n) const { return Word(prefix(n)); }
  std::unique_ptr<StreamGenerator> open() const { return factory_(); }
  const Factory& factory() const noexcept { return factory_; }

 private:
  StreamSpec spec_;
  std::size_t k_ = 2;
  Factory factory_;
};

struct StreamKind {
  std::function<std::size_t(const StreamSpec&)> alphabet;
  std::function<SymbolStream::Factory(const StreamSpec&)> make;
};

void register_stream_kind(const std::string& name, StreamKind kind);
std::vector<std::string> stream_kinds();

// Parameter helpers shared by stream kinds. A measure is "bernoulli:p0,p1,...",
// "markov:row;row;..." (rows comma separated), "parry:<subshift>" for an SFT
// of order at most 2, or a path to a markov v1 file.
// A subshift is "full:<k>", "golden" or a path to an sft v1 file.
MarkovMeasure parse_measure_param(const StreamSpec& spec, const std::string& value);
Subshift parse_subshift_param(const StreamSpec& spec, const std::string& value);

// x = prefix followed by the lexicographically least continuation that stays
// infinitely extendable in `shift`. The prefix must be admissible, at least as
// long as the follower-graph context, and end in an extendable context.
SymbolStream sft_walk_stream(const Subshift& shift, const Word& prefix, StreamSpec spec);

// Empirical law of the first n depth-t windows of the stream.
CylinderDistribution empirical_distribution(const SymbolStream& x, std::size_t n, std::size_t t);

}  // namespace symdyn
