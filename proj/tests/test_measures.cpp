#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "symdyn/error.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/parry.hpp"
#include "symdyn/stream.hpp"

using namespace symdyn;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

std::map<oracle::Seq, double> table(const CylinderDistribution& d) {
  std::map<oracle::Seq, double> m;
  for (std::size_t i = 0; i < d.cell_count(); ++i) m[to_seq(d.word_at(i))] = d[i];
  return m;
}

SymbolStream literal(const std::string& prefix, int tail) {
  StreamSpec spec;
  spec.kind = "literal";
  spec.params["prefix"] = prefix;
  spec.params["tail"] = std::to_string(tail);
  return SymbolStream(spec);
}

SymbolStream periodic(const std::string& word) {
  StreamSpec spec;
  spec.kind = "periodic";
  spec.params["word"] = word;
  return SymbolStream(spec);
}

MarkovMeasure random_chain(std::mt19937_64& gen, std::size_t k) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<std::vector<double>> p(k, std::vector<double>(k));
  for (auto& row : p) {
    double s = 0;
    for (auto& v : row) s += (v = u(gen));
    for (auto& v : row) v /= s;
  }
  return MarkovMeasure::from_transition(p);
}

}  // namespace

TEST_CASE("block_frequency: spec examples") {
  CHECK(block_frequency(Word::from_digits("0101"), Word::from_digits("01")) == make_rational(2, 3));
  CHECK(block_frequency(Word::from_digits("0110"), Word::from_digits("0110")).value() == 1.0);
  CHECK(block_frequency(Word::from_digits("0000"), Word::from_digits("1")).num == 0);
  CHECK(code_of([] { block_frequency(Word::from_digits("01"), Word::from_digits("010")); }) == ErrorCode::length);
  CHECK(make_rational(6, 8) == Rational{3, 4});
}

TEST_CASE("block_frequency agrees with direct counting") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    oracle::Seq q(5 + gen() % 30), p(1 + gen() % 4);
    for (auto& v : q) v = static_cast<int>(gen() % 2);
    for (auto& v : p) v = static_cast<int>(gen() % 2);
    if (p.size() > q.size()) continue;
    const double expect = double(oracle::occurrences(q, p)) / double(q.size() - p.size() + 1);
    CHECK(block_frequency(to_word(q), to_word(p)).value() == doctest::Approx(expect));
  }
}

TEST_CASE("empirical_distribution: spec examples") {
  const auto zero = empirical_distribution(literal("", 0), 100, 1);
  CHECK(zero.probability(Word{0}) == 1.0);
  CHECK(zero.probability(Word{1}) == 0.0);

  const auto alt = empirical_distribution(periodic("01"), 4, 2);
  CHECK(alt.probability(Word{0, 1}) == 0.5);
  CHECK(alt.probability(Word{1, 0}) == 0.5);
  CHECK(alt.probability(Word{0, 0}) == 0.0);
  CHECK(alt.probability(Word{1, 1}) == 0.0);

  const auto pre = empirical_distribution(periodic("0101"), 3, 2);
  for (const auto& p : all_words(2, 2))
    CHECK(pre.probability(p) == doctest::Approx(block_frequency(Word::from_digits("0101"), p).value()));
}

TEST_CASE("rho_distance: spec examples and oracle") {
  const auto zero = CylinderDistribution::point_mass(2, 12, Word::repeat(0, 12));
  const auto one = CylinderDistribution::point_mass(2, 12, Word::repeat(1, 12));
  CHECK(rho_distance(zero, zero, 12).value == 0.0);
  // Σ_r 2/4^r over r ≤ 12, with the tail bounded by 2^-12.
  double geometric = 0;
  for (int r = 1; r <= 12; ++r) geometric += 2.0 / std::pow(4.0, r);
  const auto r = rho_distance(zero, one, 12);
  CHECK(r.value == doctest::Approx(geometric).epsilon(1e-12));
  CHECK(std::fabs(r.value - 2.0 / 3.0) <= r.error_bound);

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = markov_cylinders(random_chain(gen, 2), 5);
    const auto b = markov_cylinders(random_chain(gen, 2), 5);
    CHECK(rho_distance(a, b, 5).value == doctest::Approx(oracle::rho(table(a), table(b), 2, 5)).epsilon(1e-10));
    // Deeper distribution marginalised to the truncation depth.
    CHECK(rho_distance(a, b.marginal(3), 3).value ==
          doctest::Approx(oracle::rho(table(a), table(b), 2, 3)).epsilon(1e-10));
  }
  CHECK(code_of([&] { rho_distance(zero.marginal(2), one.marginal(2), 5); }) == ErrorCode::depth);
}

TEST_CASE("markov measures: cylinders and entropy") {
  CHECK(markov_entropy(MarkovMeasure::bernoulli({0.5, 0.5})) == doctest::Approx(std::log(2.0)));
  const double h34 = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK(h34 == doctest::Approx(0.56234).epsilon(1e-5));
  CHECK(markov_entropy(MarkovMeasure::bernoulli({0.75, 0.25})) == doctest::Approx(h34).epsilon(1e-12));

  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_chain(gen, 3);
    const auto d = markov_cylinders(m, 4);
    CHECK(d.total() == doctest::Approx(1.0));
    CHECK(d.stationary(1e-9));
    for (std::size_t i = 0; i < d.cell_count(); ++i)
      CHECK(d[i] == doctest::Approx(oracle::chain_cylinder(m.transition(), m.stationary(), to_seq(d.word_at(i)))));
  }

  // Stationary vector that is not stationary.
  CHECK(code_of([] { MarkovMeasure({{0.5, 0.5}, {1.0, 0.0}}, {0.5, 0.5}); }) == ErrorCode::invalid_measure);
  CHECK(code_of([] { MarkovMeasure::from_transition({{0.5, 0.6}, {1.0, 0.0}}); }) == ErrorCode::invalid_measure);
}

TEST_CASE("Parry measure of the golden mean attains the topological entropy") {
  const double oracle_h = std::log(oracle::spectral_radius({{1, 1}, {1, 0}}));
  const ParryMeasure parry(Subshift::golden_mean());
  CHECK(parry.entropy() == doctest::Approx(oracle_h).epsilon(1e-9));
  const auto chain = parry.symbol_chain();
  REQUIRE(chain.has_value());
  CHECK(markov_entropy(*chain) == doctest::Approx(oracle_h).epsilon(1e-9));
  CHECK(chain->transition(1, 1) == 0.0);
  const auto cyl = parry.cylinders(4);
  CHECK(cyl.total() == doctest::Approx(1.0));
  CHECK(cyl.probability(Word{1, 1, 0, 0}) == 0.0);
}

TEST_CASE("power_entropy_check") {
  const auto half = power_entropy_check(MarkovMeasure::bernoulli({0.5, 0.5}), 3);
  CHECK(half.entropy == doctest::Approx(3 * std::log(2.0)));
  const auto b34 = power_entropy_check(MarkovMeasure::bernoulli({0.75, 0.25}), 3);
  CHECK(b34.entropy == doctest::Approx(1.68703).epsilon(1e-5));
  CHECK(b34.ratio == doctest::Approx(3.0).epsilon(1e-12));
  std::mt19937_64 gen(13);
  const auto m = random_chain(gen, 3);
  CHECK(power_entropy_check(m, 1).entropy == doctest::Approx(markov_entropy(m)).epsilon(1e-12));
  CHECK(power_entropy_check(m, 4).ratio == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("hausdorff_rho") {
  const std::size_t T = 12;
  const auto zero = CylinderDistribution::point_mass(2, T, Word::repeat(0, T));
  const auto one = CylinderDistribution::point_mass(2, T, Word::repeat(1, T));
  const MeasureSet a({zero});
  const MeasureSet b({zero, one});
  CHECK(hausdorff_rho(a, a, T) == 0.0);
  CHECK(hausdorff_rho(a, b, T) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(hausdorff_rho(b, a, T) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(code_of([] { MeasureSet({}); }) == ErrorCode::empty_set);
}

TEST_CASE("markov text round trip") {
  const auto m = MarkovMeasure::load(fixture("bernoulli_0.8.markov"));
  CHECK(m.stationary()[1] == doctest::Approx(0.8));
  std::istringstream in(m.to_text());
  const auto back = MarkovMeasure::parse(in);
  CHECK(back.transition() == m.transition());
}
