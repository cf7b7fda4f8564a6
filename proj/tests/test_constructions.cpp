#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "symdyn/constructions.hpp"
#include "symdyn/error.hpp"
#include "symdyn/sft_format.hpp"

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

std::vector<MarkovMeasure> two_targets() {
  return {MarkovMeasure::bernoulli({0.2, 0.8}), MarkovMeasure::bernoulli({0.8, 0.2})};
}

const MinimalConstruction& two_stage() {
  static const MinimalConstruction c = [] {
    MinimalOptions opt;
    opt.epsilon = 0.3;
    opt.eta = 0.15;
    opt.stages = 2;
    return construct_minimal_k(Subshift::full_shift(2), two_targets(), opt);
  }();
  return c;
}

}  // namespace

TEST_CASE("identical targets violate the separation precondition") {
  const auto b = MarkovMeasure::bernoulli({0.5, 0.5});
  CHECK(code_of([&] { construct_minimal_k(Subshift::full_shift(2), {b, b}); }) == ErrorCode::target_geometry);
}

TEST_CASE("single target, one stage") {
  MinimalOptions opt;
  opt.stages = 1;
  const auto c = construct_minimal_k(Subshift::full_shift(2), {MarkovMeasure::bernoulli({0.5, 0.5})}, opt);
  CHECK(c.certificate.pass());
  REQUIRE(c.stages.size() == 1);
  CHECK(c.stages[0].components.size() == 1);
  CHECK(c.measures.size() == 1);
}

TEST_CASE("two Bernoulli targets, two stages: certificate passes") {
  const auto& c = two_stage();
  CHECK(c.certificate.pass());
  for (const auto& line : c.certificate.lines()) {
    INFO(line.name);
    CHECK(line.pass());
  }
  REQUIRE(c.stages.size() == 2);
  for (const auto& st : c.stages) {
    CHECK(st.invariants.pass());
    // r_i > 4(r̄_i + L_i).
    CHECK(st.defining_length > 4 * (st.test_length + st.bridge_length));
  }
}

TEST_CASE("final measures sit within ε of their targets and apart from each other") {
  const auto& c = two_stage();
  const std::size_t T = 8;
  const auto targets = two_targets();
  REQUIRE(c.measures.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto mine = table(c.measures[j].marginal(T));
    const auto target = table(markov_cylinders(targets[j], T));
    CHECK(oracle::rho(mine, target, 2, static_cast<int>(T)) < 0.3);
  }
  const double sep = oracle::rho(table(c.measures[0].marginal(T)), table(c.measures[1].marginal(T)), 2, static_cast<int>(T));
  CHECK(sep > 0.1);
}

TEST_CASE("stage monotonicity: later components live inside the earlier glued shift") {
  const auto& c = two_stage();
  const auto& earlier = c.stages[0].glued;
  const auto& later = c.stages[1];
  for (const auto& comp : later.components) {
    const auto blocks = comp.shift.blocks();
    for (std::size_t i = 0; i < blocks.size(); i += 1 + blocks.size() / 200) CHECK(earlier.admissible(blocks[i]));
  }
}

TEST_CASE("marker occurs once per bridge and never inside a component") {
  const auto& g = two_stage().stages.back().glued;
  const auto marker = to_seq(g.marker());
  for (const auto& [key, u] : g.bridges()) CHECK(oracle::occurrences(to_seq(u), marker) == 1);
  for (const auto& comp : g.components()) {
    const auto blocks = comp.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) CHECK(oracle::occurrences(to_seq(blocks.word(i)), marker) == 0);
  }
}

TEST_CASE("glued descriptor round trip and independent re-verification") {
  const auto& c = two_stage();
  const auto& g = c.stages.back().glued;
  const auto dir = std::filesystem::temp_directory_path() / "symdyn_glued_roundtrip";
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t j = 0; j < g.components().size(); ++j) {
    files.push_back("component" + std::to_string(j) + ".sft");
    save_sft(g.components()[j], (dir / files.back()).string());
  }
  {
    std::ofstream out(dir / "glued.txt");
    out << g.to_text(files);
  }
  const auto back = GluedShift::load((dir / "glued.txt").string());
  CHECK(back.marker() == g.marker());
  CHECK(back.bridges() == g.bridges());
  CHECK(back.defining_length() == g.defining_length());
  CHECK(back.blocks(3) == g.blocks(3));

  const auto cert = reverify_minimal(back, two_targets(), 0.3, c.stages.back().depth);
  for (const auto& line : cert.lines()) {
    INFO(line.name);
    CHECK(line.pass());
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("glued shift admissibility matches its window rule") {
  const auto& g = two_stage().stages.front().glued;
  std::mt19937_64 gen(3);
  const std::size_t r = g.defining_length();
  // Windows cut from bridge words are allowed; random words almost never are.
  for (const auto& [key, u] : g.bridges()) {
    const auto w = g.bridge_word(key.first, key.second);
    for (std::size_t p = 0; p + r <= w.size(); p += 1 + w.size() / 50) CHECK(g.window_allowed(w.sub(p, r)));
    CHECK(g.admissible(w));
  }
  std::vector<Symbol> noise(r);
  for (auto& s : noise) s = static_cast<Symbol>(gen() % 2);
  CHECK_FALSE(g.window_allowed(SymbolSpan(noise)));
}
