#include "symdyn/parry.hpp"

#include <cmath>
#include <numeric>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "parry";
}

ParryMeasure::ParryMeasure(const Subshift& shift) : k_(shift.alphabet_size()), graph_(shift, true) {
  if (graph_.vertex_count() == 0) fail(ErrorCode::empty_language, kModule, "shift space is empty");
  if (!graph_.strongly_connected()) {
    fail(ErrorCode::parameter, kModule, "measure of maximal entropy requires an irreducible shift");
  }
  auto p = graph_.perron();
  lambda_ = p.root;
  entropy_ = std::log(lambda_);
  r_ = std::move(p.right);
  pi_.resize(r_.size());
  double z = 0;
  for (std::size_t v = 0; v < r_.size(); ++v) {
    pi_[v] = p.left[v] * r_[v];
    z += pi_[v];
  }
  for (auto& w : pi_) w /= z;
}

double ParryMeasure::cylinder(SymbolSpan block) const {
  const std::size_t m = graph_.context_length();
  if (block.empty()) return 1.0;
  if (block.size() <= m) {
    double s = 0;
    for (std::size_t v = 0; v < graph_.vertex_count(); ++v) {
      if (spans_equal(graph_.vertex(v).first(block.size()), block)) s += pi_[v];
    }
    return s;
  }
  auto start = graph_.find_vertex(block.first(m));
  if (!start) return 0.0;
  std::size_t u = *start;
  double p = pi_[u];
  for (std::size_t i = m; i < block.size(); ++i) {
    bool moved = false;
    for (const auto& e : graph_.successors(u)) {
      if (e.symbol == block[i]) {
        p *= edge_probability(u, e.to);
        u = e.to;
        moved = true;
        break;
      }
    }
    if (!moved) return 0.0;
  }
  return p;
}

CylinderDistribution ParryMeasure::cylinders(std::size_t depth) const {
  CylinderDistribution d(k_, depth);
  const std::size_t m = graph_.context_length();
  auto index_of = [&](SymbolSpan w) {
    std::size_t idx = 0;
    for (Symbol s : w) idx = idx * k_ + s;
    return idx;
  };
  if (depth <= m) {
    for (std::size_t v = 0; v < graph_.vertex_count(); ++v) d[index_of(graph_.vertex(v).first(depth))] += pi_[v];
    return d;
  }
  const std::size_t steps = depth - m;
  struct Frame {
    std::uint32_t vertex;
    std::size_t index;
    double prob;
    std::size_t level;
  };
  std::vector<Frame> stack;
  for (std::size_t v = 0; v < graph_.vertex_count(); ++v) {
    stack.push_back({static_cast<std::uint32_t>(v), index_of(graph_.vertex(v)), pi_[v], 0});
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.level == steps) {
        d[f.index] += f.prob;
        continue;
      }
      for (const auto& e : graph_.successors(f.vertex)) {
        stack.push_back({e.to, f.index * k_ + e.symbol, f.prob * edge_probability(f.vertex, e.to), f.level + 1});
      }
    }
  }
  return d;
}

std::optional<MarkovMeasure> ParryMeasure::symbol_chain() const {
  if (graph_.context_length() != 1) return std::nullopt;
  std::vector<std::vector<double>> p(k_, std::vector<double>(k_, 0.0));
  std::vector<double> pi(k_, 0.0);
  std::vector<char> present(k_, 0);
  for (std::size_t v = 0; v < graph_.vertex_count(); ++v) {
    const Symbol a = graph_.vertex(v)[0];
    present[a] = 1;
    pi[a] = pi_[v];
    for (const auto& e : graph_.successors(v)) p[a][graph_.vertex(e.to)[0]] = edge_probability(v, e.to);
  }
  for (std::size_t a = 0; a < k_; ++a) {
    if (!present[a]) p[a][a] = 1.0;
    const double s = std::accumulate(p[a].begin(), p[a].end(), 0.0);
    for (auto& x : p[a]) x /= s;
  }
  return MarkovMeasure(std::move(p), std::move(pi));
}

}  // namespace symdyn
