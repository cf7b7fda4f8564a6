#include "symdyn/follower_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symdyn/error.hpp"

namespace symdyn {

FollowerGraph::FollowerGraph(const Subshift& shift, bool essential_only) {
  order_ = shift.order();
  context_length_ = std::max<std::size_t>(order_ > 1 ? order_ - 1 : 1, 1);
  const std::size_t m = context_length_;
  const BlockSet& blocks = shift.blocks();

  BlockSet::Builder ctx_builder(m);
  if (order_ == 1) {
    for (std::size_t b = 0; b < blocks.size(); ++b) ctx_builder.add(blocks[b]);
  } else {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      ctx_builder.add(blocks[b].first(m));
      ctx_builder.add(blocks[b].last(m));
    }
  }
  const BlockSet contexts = std::move(ctx_builder).finish();
  const std::size_t n0 = contexts.size();

  // Raw edges, grouped by source and sorted by label.
  std::vector<std::pair<std::uint32_t, Edge>> raw;
  if (order_ == 1) {
    raw.reserve(n0 * n0);
    for (std::size_t u = 0; u < n0; ++u) {
      for (std::size_t v = 0; v < n0; ++v) {
        raw.push_back({static_cast<std::uint32_t>(u), Edge{static_cast<std::uint32_t>(v), contexts[v][0]}});
      }
    }
  } else {
    raw.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto u = *contexts.index_of(blocks[b].first(m));
      const auto v = *contexts.index_of(blocks[b].last(m));
      raw.push_back({static_cast<std::uint32_t>(u), Edge{static_cast<std::uint32_t>(v), blocks[b][order_ - 1]}});
    }
  }

  std::vector<char> alive(n0, 1);
  if (essential_only) {
    std::vector<std::size_t> indeg(n0, 0), outdeg(n0, 0);
    std::vector<std::vector<std::uint32_t>> out_adj(n0), in_adj(n0);
    for (const auto& [u, e] : raw) {
      ++outdeg[u];
      ++indeg[e.to];
      out_adj[u].push_back(e.to);
      in_adj[e.to].push_back(u);
    }
    std::vector<std::uint32_t> queue;
    for (std::size_t v = 0; v < n0; ++v) {
      if (indeg[v] == 0 || outdeg[v] == 0) {
        alive[v] = 0;
        queue.push_back(static_cast<std::uint32_t>(v));
      }
    }
    while (!queue.empty()) {
      const auto v = queue.back();
      queue.pop_back();
      for (auto w : out_adj[v]) {
        if (alive[w] && --indeg[w] == 0) {
          alive[w] = 0;
          queue.push_back(w);
        }
      }
      for (auto w : in_adj[v]) {
        if (alive[w] && --outdeg[w] == 0) {
          alive[w] = 0;
          queue.push_back(w);
        }
      }
    }
  }

  std::vector<std::uint32_t> remap(n0, UINT32_MAX);
  for (std::size_t v = 0; v < n0; ++v) {
    if (!alive[v]) continue;
    remap[v] = static_cast<std::uint32_t>(vertex_count_++);
    auto c = contexts[v];
    contexts_.insert(contexts_.end(), c.begin(), c.end());
  }

  out_offset_.assign(vertex_count_ + 1, 0);
  for (const auto& [u, e] : raw) {
    if (alive[u] && alive[e.to]) ++out_offset_[remap[u] + 1];
  }
  std::partial_sum(out_offset_.begin(), out_offset_.end(), out_offset_.begin());
  edges_.reserve(out_offset_.back());
  for (const auto& [u, e] : raw) {
    if (alive[u] && alive[e.to]) edges_.push_back(Edge{remap[e.to], e.symbol});
  }

  in_offset_.assign(vertex_count_ + 1, 0);
  for (const auto& e : edges_) ++in_offset_[e.to + 1];
  std::partial_sum(in_offset_.begin(), in_offset_.end(), in_offset_.begin());
  in_sources_.resize(edges_.size());
  std::vector<std::size_t> fill(in_offset_.begin(), in_offset_.end() - 1);
  for (std::size_t u = 0; u < vertex_count_; ++u) {
    for (const auto& e : successors(u)) in_sources_[fill[e.to]++] = static_cast<std::uint32_t>(u);
  }
}

std::optional<std::size_t> FollowerGraph::find_vertex(SymbolSpan context) const {
  if (context.size() != context_length_) return std::nullopt;
  std::size_t lo = 0, hi = vertex_count_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const int c = compare_spans(vertex(mid), context);
    if (c == 0) return mid;
    if (c < 0) lo = mid + 1;
    else hi = mid;
  }
  return std::nullopt;
}

std::vector<std::uint32_t> FollowerGraph::components(std::size_t* count) const {
  const std::size_t n = vertex_count_;
  constexpr std::uint32_t unset = UINT32_MAX;
  std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  std::uint32_t next_index = 0, next_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back({static_cast<std::uint32_t>(root), 0});
    index[root] = low[root] = next_index++;
    stack.push_back(static_cast<std::uint32_t>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& f = call.back();
      auto succ = successors(f.v);
      if (f.edge < succ.size()) {
        const auto w = succ[f.edge++].to;
        if (index[w] == unset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const auto v = f.v;
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  if (count) *count = next_comp;
  return comp;
}

bool FollowerGraph::strongly_connected() const {
  if (vertex_count_ == 0) return false;
  std::size_t count = 0;
  components(&count);
  return count == 1;
}

std::size_t FollowerGraph::period() const {
  const std::size_t n = vertex_count_;
  if (n == 0) return 0;
  const auto comp = components();
  std::vector<long long> level(n, -1);
  std::size_t g = 0;
  std::vector<std::uint32_t> queue;
  for (std::size_t root = 0; root < n; ++root) {
    if (level[root] >= 0) continue;
    level[root] = 0;
    queue.assign(1, static_cast<std::uint32_t>(root));
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto u = queue[qi];
      for (const auto& e : successors(u)) {
        if (comp[e.to] != comp[u]) continue;
        if (level[e.to] < 0) {
          level[e.to] = level[u] + 1;
          queue.push_back(e.to);
        } else {
          const auto d = static_cast<std::size_t>(std::llabs(level[u] + 1 - level[e.to]));
          g = std::gcd(g, d);
        }
      }
    }
  }
  return g;
}

FollowerGraph::Perron FollowerGraph::perron(double tolerance, std::size_t max_iterations) const {
  const std::size_t n = vertex_count_;
  Perron out;
  if (n == 0) return out;

  // Power iteration on A + I, which shares the Perron vector and is aperiodic.
  auto iterate = [&](bool transpose, double& root) {
    std::vector<double> x(n, 1.0), y(n);
    double prev_root = -1.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
      for (std::size_t u = 0; u < n; ++u) {
        double s = x[u];
        if (transpose) {
          for (auto p : predecessors(u)) s += x[p];
        } else {
          for (const auto& e : successors(u)) s += x[e.to];
        }
        y[u] = s;
      }
      const double mx = *std::max_element(y.begin(), y.end());
      if (mx <= 0) fail(ErrorCode::internal, "follower-graph", "Perron iteration collapsed");
      double diff = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        y[u] /= mx;
        diff = std::max(diff, std::abs(y[u] - x[u]));
      }
      x.swap(y);
      root = mx - 1.0;
      if (diff < tolerance && std::abs(root - prev_root) < tolerance) break;
      prev_root = root;
    }
    return x;
  };
  double r1 = 0, r2 = 0;
  out.right = iterate(false, r1);
  out.left = iterate(true, r2);
  out.root = r1;
  return out;
}

}  // namespace symdyn
