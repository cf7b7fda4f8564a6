#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "symdyn/error.hpp"
#include "symdyn/omega.hpp"

using namespace symdyn;

namespace {

SymbolStream make(const std::string& kind, std::map<std::string, std::string> params = {}) {
  StreamSpec spec;
  spec.kind = kind;
  spec.params = std::move(params);
  return SymbolStream(spec);
}

std::vector<Word> words(std::initializer_list<const char*> list) {
  std::vector<Word> out;
  for (const char* s : list) out.push_back(Word::from_digits(s));
  return out;
}

}  // namespace

TEST_CASE("visit_set: spec examples") {
  const auto zero = make("literal", {{"tail", "0"}});
  const auto all = visit_set(zero, Word{0}, 50);
  CHECK(all.size() == 50);
  CHECK(all.elements().front() == 1);

  // x_n x_{n+1} = 01 exactly at even n for (01)^∞, and visits start at n = 1.
  const auto alt = visit_set(make("periodic", {{"word", "01"}}), Word{0, 1}, 40);
  for (auto n : alt.elements()) CHECK(n % 2 == 0);
  CHECK(alt.size() == 20);

  CHECK(visit_set(make("literal", {{"prefix", "1"}, {"tail", "0"}}), Word{1}, 100).empty());
}

TEST_CASE("visit_set agrees with direct occurrence scanning") {
  const auto champ = make("champernowne");
  const auto x = to_seq(champ.prefix_word(3000));
  for (const auto& p : all_words(2, 3)) {
    const auto v = visit_set(champ, p, 2000);
    std::vector<std::uint64_t> expect;
    const auto ps = to_seq(p);
    for (std::uint64_t n = 1; n <= 2000; ++n)
      if (std::equal(ps.begin(), ps.end(), x.begin() + static_cast<std::ptrdiff_t>(n))) expect.push_back(n);
    CHECK(v.elements() == expect);
  }
}

TEST_CASE("omega_profile: trivial points") {
  const auto zero = make("literal", {{"tail", "0"}});
  const auto p = omega_profile(zero, 3, 4000, 100);
  const auto expect = std::vector<Word>{Word{0, 0, 0}};
  CHECK(p.banach_lower == expect);
  CHECK(p.d_lower == expect);
  CHECK(p.d_upper == expect);
  CHECK(p.banach_upper == expect);
  CHECK(p.limit == expect);
  CHECK(classify_case(p).index == 1);

  const auto q = omega_profile(make("literal", {{"prefix", "1"}, {"tail", "0"}}), 1, 4000, 100);
  CHECK(q.limit == std::vector<Word>{Word{0}});
  CHECK(q.banach_lower == std::vector<Word>{Word{0}});
}

TEST_CASE("omega_profile: sparse ones is Case 2") {
  // At w = sqrt(N) the window [1, 1000] still holds ten ones, above θ_pos.
  const auto p = omega_profile(make("sparse", {{"base", "2"}}), 2, 1000000, 250000);
  const auto zeros = words({"00"});
  CHECK(p.banach_lower == zeros);
  CHECK(p.d_lower == zeros);
  CHECK(p.d_upper == zeros);
  CHECK(p.banach_upper == zeros);
  CHECK(p.limit == words({"00", "01", "10"}));
  const auto label = classify_case(p);
  CHECK(label.index == 2);
  CHECK_FALSE(label.strict[0]);
  CHECK(label.strict[3]);
}

TEST_CASE("omega sets are nested and thread independent") {
  const auto champ = make("champernowne");
  const auto a = omega_profile(champ, 3, 200000, 400, kDefaultThreshold, 1);
  const auto b = omega_profile(champ, 3, 200000, 400, kDefaultThreshold, 4);
  CHECK(a.limit == b.limit);
  CHECK(a.banach_lower == b.banach_lower);
  auto subset = [](const std::vector<Word>& s, const std::vector<Word>& t) {
    return std::includes(t.begin(), t.end(), s.begin(), s.end());
  };
  CHECK(subset(a.banach_lower, a.d_lower));
  CHECK(subset(a.d_lower, a.d_upper));
  CHECK(subset(a.d_upper, a.banach_upper));
  CHECK(subset(a.banach_upper, a.limit));
}

TEST_CASE("classify_case follows the listing") {
  // (s1, s2, s3, s4) -> index.
  const int table[16][5] = {{0, 0, 0, 0, 1},  {0, 0, 0, 1, 2},  {1, 0, 0, 0, 3},  {1, 0, 0, 1, 4},
                            {1, 0, 1, 0, 5},  {1, 0, 1, 1, 6},  {0, 1, 0, 0, 7},  {0, 1, 0, 1, 8},
                            {1, 1, 0, 0, 9},  {1, 1, 0, 1, 10}, {0, 1, 1, 0, 11}, {0, 1, 1, 1, 12},
                            {1, 1, 1, 0, 13}, {1, 1, 1, 1, 14}, {0, 0, 1, 0, 15}, {0, 0, 1, 1, 16}};
  std::set<int> seen;
  for (const auto& row : table) {
    CHECK(case_index(row[0], row[1], row[2], row[3]) == row[4]);
    seen.insert(row[4]);
  }
  CHECK(seen.size() == 16);
}

TEST_CASE("recurrence_tests: spec examples") {
  const auto alt = recurrence_tests(make("periodic", {{"word", "01"}}), 2, 1000);
  CHECK(alt.recurrent);
  CHECK(alt.almost_periodic);
  CHECK(alt.gap == 2);

  const auto once = recurrence_tests(make("literal", {{"prefix", "1"}, {"tail", "0"}}), 1, 1000);
  CHECK_FALSE(once.recurrent);

  const auto champ = recurrence_tests(make("champernowne"), 2, 100000);
  CHECK(champ.recurrent);
  CHECK_FALSE(champ.almost_periodic);
}

TEST_CASE("birkhoff_trace: spec examples") {
  const auto phi = Observable::indicator(2, Word{1});
  const auto zero = birkhoff_trace(make("literal", {{"tail", "0"}}), phi, {10, 100, 1000});
  for (double v : zero.averages) CHECK(v == 0.0);

  const auto alt = birkhoff_trace(make("periodic", {{"word", "01"}}), phi, {11, 101, 1001});
  for (std::size_t i = 0; i < alt.averages.size(); ++i)
    CHECK(std::fabs(alt.averages[i] - 0.5) <= 1.0 / double(alt.checkpoints[i]));

  // Oracle: partial sums read straight off the prefix.
  const auto doubling = make("doubling");
  const auto cps = log_checkpoints(1000000, 60);
  const auto trace = birkhoff_trace(doubling, phi, cps);
  const auto x = doubling.prefix(1000000);
  std::uint64_t ones = 0, n = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    while (n < cps[i]) ones += x[n++];
    CHECK(trace.averages[i] == doctest::Approx(double(ones) / double(cps[i])).epsilon(1e-12));
  }
  CHECK(trace.oscillation >= 0.25);
}

TEST_CASE("observables") {
  const Observable phi(2, 2, {0.0, 1.0, 2.0, 3.0});
  const auto b = MarkovMeasure::bernoulli({0.25, 0.75});
  // E φ(x0 x1) with independent symbols.
  const double expect = 0.25 * 0.75 * 1 + 0.75 * 0.25 * 2 + 0.75 * 0.75 * 3;
  CHECK(phi.integral(b) == doctest::Approx(expect));
  CHECK(phi.integral(markov_cylinders(b, 4)) == doctest::Approx(expect));
}

TEST_CASE("window_measures: spec examples") {
  const auto zero = window_measures(make("literal", {{"tail", "0"}}), 2, 50, 25, 1000);
  for (const auto& m : zero.members()) CHECK(m.probability(Word{0, 0}) == 1.0);

  const auto alt = window_measures(make("periodic", {{"word", "01"}}), 3, 40, 10, 1000);
  for (const auto& m : alt.members()) CHECK(m.values() == alt[0].values());
  CHECK(alt[0].probability(Word{0, 1, 0}) == 0.5);
}
