#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "symdyn/subshift.hpp"

namespace symdyn {

// Vertex graph of an SFT: vertices are contexts of length m = max(N-1, 1),
// an edge u -> v labelled a exists when u·a is allowed and v is its last m
// symbols. Infinite paths are exactly the points of the shift.
class FollowerGraph {
 public:
  struct Edge {
    std::uint32_t to;
    Symbol symbol;
  };

  // With `essential_only`, vertices lacking an incoming or outgoing edge are
  // removed repeatedly until none remain.
  explicit FollowerGraph(const Subshift& shift, bool essential_only = true);

  std::size_t context_length() const noexcept { return context_length_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  SymbolSpan vertex(std::size_t v) const {
    return SymbolSpan(contexts_).subspan(v * context_length_, context_length_);
  }
  std::optional<std::size_t> find_vertex(SymbolSpan context) const;

  // Outgoing edges sorted by label.
  std::span<const Edge> successors(std::size_t v) const {
    return std::span<const Edge>(edges_).subspan(out_offset_[v], out_offset_[v + 1] - out_offset_[v]);
  }
  std::span<const std::uint32_t> predecessors(std::size_t v) const {
    return std::span<const std::uint32_t>(in_sources_)
        .subspan(in_offset_[v], in_offset_[v + 1] - in_offset_[v]);
  }

  // Strongly connected component id per vertex; ids are in reverse topological order.
  std::vector<std::uint32_t> components(std::size_t* count = nullptr) const;
  bool strongly_connected() const;
  // gcd of cycle lengths; 0 when the graph has no cycle.
  std::size_t period() const;

  // Right Perron vector of the adjacency matrix, normalised to max 1, and the
  // Perron root. Requires an irreducible graph for a meaningful vector.
  struct Perron {
    double root = 0.0;
    std::vector<double> right;
    std::vector<double> left;
  };
  Perron perron(double tolerance = 1e-13, std::size_t max_iterations = 200000) const;

 private:
  std::size_t order_ = 0;
  std::size_t context_length_ = 0;
  std::size_t vertex_count_ = 0;
  std::vector<Symbol> contexts_;
  std::vector<std::size_t> out_offset_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> in_offset_;
  std::vector<std::uint32_t> in_sources_;
};

}  // namespace symdyn
