#pragma once

#include <optional>

#include "symdyn/follower_graph.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

// Measure of maximal entropy of an irreducible SFT. It is a Markov chain on
// the follower-graph contexts with P(u -> v) = r_v / (λ r_u) and stationary
// weights l_v r_v, where l and r are the left and right Perron vectors.
class ParryMeasure {
 public:
  explicit ParryMeasure(const Subshift& shift);

  double entropy() const noexcept { return entropy_; }
  double perron_root() const noexcept { return lambda_; }
  std::size_t alphabet_size() const noexcept { return k_; }
  const FollowerGraph& graph() const noexcept { return graph_; }
  const std::vector<double>& context_weights() const noexcept { return pi_; }

  double cylinder(SymbolSpan block) const;
  CylinderDistribution cylinders(std::size_t depth) const;
  // Symbol-level Markov chain; available when the contexts are single symbols.
  std::optional<MarkovMeasure> symbol_chain() const;
  double edge_probability(std::size_t from, std::size_t to) const { return r_[to] / (lambda_ * r_[from]); }

 private:
  std::size_t k_;
  FollowerGraph graph_;
  double lambda_ = 0;
  double entropy_ = 0;
  std::vector<double> r_;
  std::vector<double> pi_;
};

}  // namespace symdyn
