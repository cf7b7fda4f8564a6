#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "symdyn/error.hpp"
#include "symdyn/shadowing.hpp"

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

// Random admissible golden-mean word of length n.
oracle::Seq golden_walk(std::mt19937_64& gen, std::size_t n) {
  oracle::Seq w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(!w.empty() && w.back() == 1 ? 0 : static_cast<int>(gen() % 2));
  return w;
}

std::vector<Word> slice(const oracle::Seq& x, std::size_t count, std::size_t m) {
  std::vector<Word> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back(to_word(oracle::Seq(x.begin() + i, x.begin() + i + m)));
  return pts;
}

// Every y of length n+m-1 that is admissible and agrees with x_i on m-1 symbols at i.
std::vector<oracle::Seq> shadow_candidates(const oracle::Shift& s, const std::vector<Word>& pts, std::size_t m) {
  std::vector<oracle::Seq> out;
  const int len = static_cast<int>(pts.size() + m - 1);
  for (const auto& y : oracle::all_sequences(s.k, len)) {
    if (!s.admissible(y)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i)
      for (std::size_t j = 0; j + 1 < m; ++j) ok = ok && y[i + j] == pts[i][j];
    if (ok) out.push_back(y);
  }
  return out;
}

}  // namespace

TEST_CASE("true orbit segments verify and shadow themselves") {
  const auto golden = Subshift::golden_mean();
  std::mt19937_64 gen(1);
  const auto x = golden_walk(gen, 40);
  const PseudoOrbit po(golden, 4, slice(x, 30, 4));
  CHECK(verify_pseudo_orbit(po).valid);
  const auto sh = shadow(po);
  CHECK(sh.epsilon == 1.0 / 8);
  const auto y = to_seq(sh.point.prefix_word(33));
  CHECK(y == oracle::Seq(x.begin(), x.begin() + 33));
}

TEST_CASE("inadmissible step is reported at its index") {
  const auto golden = Subshift::golden_mean();
  const PseudoOrbit po(golden, 3, {Word{0, 0, 1}, Word{0, 1, 1}});
  const auto check = verify_pseudo_orbit(po);
  CHECK_FALSE(check.valid);
  CHECK(check.first_bad == 1);
  CHECK(code_of([&] { PseudoOrbit(golden, 1, {Word{0}}); }) == ErrorCode::resolution);
}

TEST_CASE("two-step pseudo-orbit with a last-symbol mismatch") {
  const auto golden = Subshift::golden_mean();
  // The true orbit through 010 continues 101; the second point switches its last symbol.
  const std::vector<Word> pts{Word{0, 1, 0}, Word{1, 0, 0}};
  const PseudoOrbit po(golden, 3, pts);
  REQUIRE(verify_pseudo_orbit(po).valid);
  const auto sh = shadow(po);
  const auto candidates = shadow_candidates(oracle::golden(), pts, 3);
  CHECK(candidates.size() == 2);
  const auto y = to_seq(sh.determined);
  CHECK(std::find(candidates.begin(), candidates.end(), y) != candidates.end());
  CHECK(shadows(po, sh.determined.span()));
}

TEST_CASE("random pseudo-orbits: shadows match brute force") {
  const auto golden = Subshift::golden_mean();
  const auto o = oracle::golden();
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 3 + trial % 3;
    const std::size_t n = 2 + gen() % 6;
    // Chain each point onto the previous one, choosing the free last symbol at random.
    std::vector<Word> pts;
    auto first = golden_walk(gen, m);
    pts.push_back(to_word(first));
    while (pts.size() < n) {
      oracle::Seq next(pts.back().begin() + 1, pts.back().end());
      next.push_back(next.back() == 1 ? 0 : static_cast<int>(gen() % 2));
      pts.push_back(to_word(next));
    }
    const PseudoOrbit po(golden, m, pts);
    REQUIRE(verify_pseudo_orbit(po).valid);
    const auto sh = shadow(po);
    const auto candidates = shadow_candidates(o, pts, m);
    REQUIRE_FALSE(candidates.empty());
    CHECK(std::find(candidates.begin(), candidates.end(), to_seq(sh.determined)) != candidates.end());
    const auto y = to_seq(sh.point.prefix_word(n + m + 20));
    CHECK(o.admissible(y));
  }
}

TEST_CASE("corrupted step in a random walk is caught exactly there") {
  const auto golden = Subshift::golden_mean();
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 3 + trial % 4;
    const auto x = golden_walk(gen, 60);
    auto pts = slice(x, 40, m);
    const std::size_t at = 1 + gen() % 39;
    // Flip a symbol the predecessor pins down.
    std::vector<Symbol> sym(pts[at].begin(), pts[at].end());
    sym[gen() % (m - 1)] ^= 1;
    pts[at] = Word(sym);
    const PseudoOrbit po(golden, m, pts);
    const auto check = verify_pseudo_orbit(po);
    CHECK_FALSE(check.valid);
    CHECK(check.first_bad == at);
  }
}

TEST_CASE("porbit text round trip") {
  const std::vector<Word> pts{Word{0, 1, 0}, Word{1, 0, 0}};
  std::istringstream in(to_porbit_text(3, pts));
  const auto back = parse_porbit(in);
  CHECK(back.depth == 3);
  CHECK(back.points == pts);
  std::istringstream bad("porbit v1\ndepth 3\n01\nend\n");
  CHECK(code_of([&] { parse_porbit(bad); }) == ErrorCode::parse);
}
