#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "symdyn/densities.hpp"
#include "symdyn/error.hpp"

using namespace symdyn;

namespace {

using Member = std::function<bool(std::uint64_t)>;

VisitSet build(std::uint64_t n, const Member& in) {
  std::vector<std::uint64_t> el;
  for (std::uint64_t i = 1; i <= n; ++i)
    if (in(i)) el.push_back(i);
  return VisitSet(n, el);
}

// Membership array, prefix counts and brute-force window scans.
struct Oracle {
  double d_upper = 0, d_lower = 1, b_upper = 0, b_lower = 1;
  std::uint64_t gap = 0;

  Oracle(std::uint64_t n, std::uint64_t w, const Member& in) {
    std::vector<std::uint64_t> count(n + 1, 0);
    for (std::uint64_t i = 1; i <= n; ++i) count[i] = count[i - 1] + (in(i) ? 1 : 0);
    for (std::uint64_t m = (n + 1) / 2; m <= n; ++m) {
      const double r = double(count[m]) / double(m);
      d_upper = std::max(d_upper, r);
      d_lower = std::min(d_lower, r);
    }
    for (std::uint64_t a = 1; a + w - 1 <= n; ++a) {
      const double r = double(count[a + w - 1] - count[a - 1]) / double(w);
      b_upper = std::max(b_upper, r);
      b_lower = std::min(b_lower, r);
    }
    // Longest stretch of [1, n] an interval can sit in while missing S, plus one.
    std::uint64_t run = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
      run = in(i) ? 0 : run + 1;
      gap = std::max(gap, run + 1);
    }
  }
};

bool power_of_two(std::uint64_t n) { return (n & (n - 1)) == 0; }

bool even_block(std::uint64_t n) {
  // n in [2^{2j}, 2^{2j+1}) iff the leading bit sits at an even position.
  int lead = 63;
  while (!((n >> lead) & 1)) --lead;
  return lead % 2 == 0;
}

}  // namespace

TEST_CASE("evens: every density near one half") {
  const Member evens = [](std::uint64_t n) { return n % 2 == 0; };
  const auto r = density_report(build(10000, evens), 100);
  for (double v : {r.d_upper, r.d_lower, r.banach_upper, r.banach_lower}) CHECK(std::fabs(v - 0.5) <= 0.01);
  CHECK(r.syndetic_gap == 2);
}

TEST_CASE("powers of two: density zero, not syndetic") {
  const auto s = build(1000000, power_of_two);
  CHECK(s.size() == 20);
  const auto r = density_report(s, 1000);
  CHECK(r.d_upper <= 0.001);
  CHECK(r.banach_lower == 0.0);
  CHECK(r.syndetic_gap == Oracle(1000000, 1000, power_of_two).gap);
  CHECK(*r.syndetic_gap >= (1u << 18));
}

TEST_CASE("alternating dyadic blocks: densities 1/3 and 2/3") {
  const std::uint64_t n = 1u << 20;
  const auto r = density_report(build(n, even_block), 1024);
  const Oracle o(n, 1024, even_block);
  CHECK(r.d_upper == doctest::Approx(o.d_upper).epsilon(1e-12));
  CHECK(r.d_lower == doctest::Approx(o.d_lower).epsilon(1e-12));
  CHECK(r.d_upper == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
  CHECK(r.d_lower == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(r.banach_upper == 1.0);
  CHECK(r.banach_lower == 0.0);
}

TEST_CASE("full interval has gap 1") {
  const auto r = density_report(build(400, [](std::uint64_t) { return true; }), 10);
  CHECK(r.syndetic_gap == 1);
  CHECK(r.d_lower == 1.0);
  CHECK(r.banach_lower == 1.0);
}

TEST_CASE("empty set is not syndetic") {
  const VisitSet empty(100, {});
  CHECK_FALSE(syndetic_gap(empty).has_value());
  CHECK(density_report(empty, 5).d_upper == 0.0);
}

TEST_CASE("random sets match the brute-force oracle") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint64_t n = 200 + gen() % 3000;
    const double p = 0.02 + 0.9 * double(gen() % 1000) / 1000.0;
    std::vector<char> bits(n + 1);
    for (auto& b : bits) b = (double(gen() % 100000) / 100000.0) < p;
    const Member in = [&](std::uint64_t i) { return bits[i] != 0; };
    const std::uint64_t w = 1 + gen() % (n / 4);
    const auto r = density_report(build(n, in), w);
    const Oracle o(n, w, in);
    CHECK(r.d_upper == doctest::Approx(o.d_upper));
    CHECK(r.d_lower == doctest::Approx(o.d_lower));
    // The report may clamp the Banach estimates outward to keep them nested.
    CHECK(r.banach_upper == doctest::Approx(std::max(o.b_upper, o.d_upper)));
    CHECK(r.banach_lower == doctest::Approx(std::min(o.b_lower, o.d_lower)));
    CHECK(r.banach_lower <= r.d_lower);
    CHECK(r.d_lower <= r.d_upper);
    CHECK(r.d_upper <= r.banach_upper);
    if (r.syndetic_gap) CHECK(*r.syndetic_gap == o.gap);
  }
}

TEST_CASE("arithmetic progressions converge at two horizons") {
  for (std::uint64_t q : {3u, 7u}) {
    const Member ap = [q](std::uint64_t i) { return i % q == 1; };
    for (std::uint64_t n : {20000u, 200000u}) {
      const std::uint64_t w = 700;
      const auto r = density_report(build(n, ap), w);
      const double d = 1.0 / double(q);
      const double tol = 1.0 / double(w) + double(q) / double(n);
      for (double v : {r.d_upper, r.d_lower, r.banach_upper, r.banach_lower}) CHECK(std::fabs(v - d) <= tol);
    }
  }
}

TEST_CASE("parameter errors") {
  const auto s = build(100, [](std::uint64_t i) { return i % 2 == 0; });
  auto code = [&](std::uint64_t w) {
    try {
      density_report(s, w);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  CHECK(code(0) == ErrorCode::parameter);
  CHECK(code(26) == ErrorCode::parameter);
  CHECK_THROWS_AS(VisitSet(10, {0}), Error);
  CHECK_THROWS_AS(VisitSet(10, {3, 3}), Error);
}
