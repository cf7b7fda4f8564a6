#include "symdyn/typical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "typical";

double shannon(const CylinderDistribution& d) {
  double h = 0;
  for (double p : d.values()) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}
}  // namespace

Source::Source(MarkovMeasure chain) : impl_(std::move(chain)) {}

Source::Source(std::shared_ptr<const ParryMeasure> parry) : impl_(std::move(parry)) {
  if (!std::get<1>(impl_)) fail(ErrorCode::parameter, kModule, "null Parry measure");
}

std::size_t Source::alphabet_size() const {
  if (auto* m = std::get_if<MarkovMeasure>(&impl_)) return m->states();
  return std::get<1>(impl_)->alphabet_size();
}

CylinderDistribution Source::cylinders(std::size_t depth) const {
  if (auto* m = std::get_if<MarkovMeasure>(&impl_)) return markov_cylinders(*m, depth);
  return std::get<1>(impl_)->cylinders(depth);
}

double Source::conditional_entropy(std::size_t depth) const {
  if (depth == 0) fail(ErrorCode::parameter, kModule, "depth must be positive");
  const double ht = shannon(cylinders(depth));
  const double hs = depth > 1 ? shannon(cylinders(depth - 1)) : 0.0;
  return std::max(0.0, ht - hs);
}

Word Source::sample(std::size_t n, Rng& rng) const {
  std::vector<Symbol> out;
  out.reserve(n);
  if (auto* m = std::get_if<MarkovMeasure>(&impl_)) {
    if (n == 0) return Word();
    std::size_t s = rng.pick(m->stationary());
    out.push_back(static_cast<Symbol>(s));
    while (out.size() < n) {
      s = rng.pick(m->transition()[s]);
      out.push_back(static_cast<Symbol>(s));
    }
    return Word(std::move(out));
  }
  const ParryMeasure& p = *std::get<1>(impl_);
  const FollowerGraph& g = p.graph();
  std::size_t v = rng.pick(p.context_weights());
  for (Symbol a : g.vertex(v)) {
    if (out.size() == n) break;
    out.push_back(a);
  }
  std::vector<double> w;
  while (out.size() < n) {
    auto succ = g.successors(v);
    w.assign(succ.size(), 0.0);
    for (std::size_t i = 0; i < succ.size(); ++i) w[i] = p.edge_probability(v, succ[i].to);
    const auto& e = succ[rng.pick(w)];
    out.push_back(e.symbol);
    v = e.to;
  }
  return Word(std::move(out));
}

double typicality_deviation(SymbolSpan word, const CylinderDistribution& nu, std::size_t t) {
  if (t > nu.depth()) fail(ErrorCode::parameter, kModule, "measure depth is below the typicality depth");
  if (word.size() < t) fail(ErrorCode::length, kModule, "word shorter than the typicality depth");
  double worst = 0;
  for (std::size_t r = 1; r <= t; ++r) {
    const auto emp = empirical_distribution(word, nu.alphabet_size(), word.size() - r + 1, r);
    const auto ref = nu.marginal(r);
    for (std::size_t i = 0; i < emp.cell_count(); ++i) worst = std::max(worst, std::abs(emp[i] - ref[i]));
  }
  return worst;
}

TypicalWord typical_word(const Source& nu, std::size_t n, std::size_t t, double delta,
                         const Subshift* shift, std::uint64_t seed, std::size_t budget) {
  if (t == 0 || n < t) fail(ErrorCode::parameter, kModule, "need 1 <= t <= n");
  if (!(delta > 0)) fail(ErrorCode::parameter, kModule, "delta must be positive");
  if (shift && shift->alphabet_size() != nu.alphabet_size())
    fail(ErrorCode::parameter, kModule, "measure and subshift alphabets differ");
  const auto target = nu.cylinders(t);
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t attempt = 1; attempt <= budget; ++attempt) {
    Word w = nu.sample(n, rng);
    if (shift && !shift->admissible(w)) continue;
    const double dev = typicality_deviation(w.span(), target, t);
    if (dev < delta) return TypicalWord{std::move(w), dev, attempt};
    best = std::min(best, dev);
  }
  std::ostringstream msg;
  msg << "no " << delta << "-typical word of length " << n << " in " << budget
      << " draws (best deviation " << best << ")";
  fail(ErrorCode::typicality_failure, kModule, msg.str());
}

}  // namespace symdyn
