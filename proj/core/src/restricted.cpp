#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "symdyn/constructions.hpp"
#include "symdyn/error.hpp"
#include "symdyn/follower_graph.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "restricted";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Same shift space, presented with defining blocks of length at least `n`.
Subshift with_order_at_least(const Subshift& shift, std::size_t n) {
  if (shift.order() >= n) return shift;
  return Subshift(shift.alphabet_size(), n, enumerate_blocks(shift, n));
}

// Base-k index of each window of length r, rolling.
void window_counts(SymbolSpan w, std::size_t k, std::size_t r, std::vector<std::uint32_t>& counts) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < r; ++i) cells *= k;
  counts.assign(cells, 0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    idx = (idx * k + w[i]) % cells;
    if (i + 1 >= r) ++counts[idx];
  }
}
}  // namespace

EntropyBracket entropy_bracket(const Subshift& shift, double target, std::size_t max_iterations) {
  FollowerGraph g(shift, true);
  const std::size_t V = g.vertex_count();
  if (V == 0) return {};
  // Collatz-Wielandt: for x > 0, min (Ax)_i/x_i <= λ <= max (Ax)_i/x_i.
  std::vector<double> x(V, 1.0), y(V);
  EntropyBracket out;
  const double e_target = std::exp(target);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t u = 0; u < V; ++u)
      for (const auto& e : g.successors(u)) y[u] += x[e.to];
    double lo = std::numeric_limits<double>::infinity(), hi = 0, top = 0;
    for (std::size_t u = 0; u < V; ++u) {
      lo = std::min(lo, y[u] / x[u]);
      hi = std::max(hi, y[u] / x[u]);
    }
    out.lower = lo > 0 ? std::log(lo) : -std::numeric_limits<double>::infinity();
    out.upper = std::log(hi);
    out.iterations = it + 1;
    if (lo > e_target || hi <= e_target || hi - lo <= 1e-12 * hi) break;
    // (A + I)x keeps the iteration aperiodic.
    for (std::size_t u = 0; u < V; ++u) {
      y[u] += x[u];
      top = std::max(top, y[u]);
    }
    for (std::size_t u = 0; u < V; ++u) x[u] = y[u] / top;
  }
  return out;
}

void Certificate::add(std::string name, double bound, double achieved, bool lower) {
  lines_.push_back(CertificateLine{std::move(name), bound, achieved, lower});
}

void Certificate::append(const Certificate& other, const std::string& prefix) {
  for (const auto& l : other.lines_) lines_.push_back(CertificateLine{prefix + l.name, l.bound, l.achieved, l.lower});
}

bool Certificate::pass() const {
  return std::all_of(lines_.begin(), lines_.end(), [](const CertificateLine& l) { return l.pass(); });
}

std::string Certificate::to_text() const {
  std::ostringstream out;
  for (const auto& l : lines_) {
    out << l.name << ' ' << fmt(l.bound) << ' ' << fmt(l.achieved) << ' ' << (l.pass() ? "PASS" : "FAIL") << '\n';
  }
  return out.str();
}

Subshift essential_part(const Subshift& shift) {
  FollowerGraph g(shift, true);
  if (g.vertex_count() == 0) fail(ErrorCode::empty_language, kModule, "the subshift has no infinite points");
  const std::size_t k = shift.alphabet_size();
  if (shift.order() == 1) {
    std::vector<Word> syms;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) syms.emplace_back(g.vertex(v));
    return Subshift(k, 1, syms);
  }
  std::size_t count = 0;
  const auto comp = g.components(&count);
  std::vector<std::vector<Word>> parts(count);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    for (const auto& e : g.successors(u)) {
      if (comp[u] != comp[e.to]) continue;
      Word b(g.vertex(u));
      b.push_back(e.symbol);
      parts[comp[u]].push_back(std::move(b));
    }
  }
  std::optional<Subshift> best;
  double best_h = -1;
  for (auto& p : parts) {
    if (p.empty()) continue;
    Subshift s(k, shift.order(), p);
    if (count == 1) return s;
    const double h = spectral_entropy(s);
    if (h > best_h) {
      best_h = h;
      best.emplace(std::move(s));
    }
  }
  if (!best) fail(ErrorCode::empty_language, kModule, "the subshift has no infinite points");
  return *best;
}

DeviationBound deviation_bound(const Subshift& shift_in, const CylinderDistribution& nu, std::size_t t,
                               std::size_t r, const std::vector<Word>& required) {
  if (t == 0 || nu.depth() < t) fail(ErrorCode::parameter, kModule, "measure depth is below the pattern depth");
  const Subshift shift = with_order_at_least(shift_in, t);
  FollowerGraph g(shift, true);
  if (g.vertex_count() == 0) fail(ErrorCode::empty_language, kModule, "the subshift has no infinite points");
  const std::size_t m = g.context_length();
  if (r < m + 1 || r < t) fail(ErrorCode::parameter, kModule, "test length is shorter than the order");
  const std::size_t k = shift.alphabet_size();
  const std::size_t V = g.vertex_count();

  std::vector<Word> patterns;
  for (std::size_t p = 1; p <= t; ++p) {
    for (auto& w : all_words(k, p)) patterns.push_back(std::move(w));
  }
  for (const auto& w : required) {
    if (w.size() > m + 1) fail(ErrorCode::parameter, kModule, "required block is longer than the order");
    if (std::find(patterns.begin(), patterns.end(), w) == patterns.end()) patterns.push_back(w);
  }

  DeviationBound out;
  out.min_occurrences = std::numeric_limits<std::size_t>::max();
  std::vector<std::int32_t> hi(V), lo(V), nhi(V), nlo(V);
  std::vector<Symbol> buf;
  for (const auto& P : patterns) {
    const std::size_t p = P.size();
    const bool measured = p <= t;
    const double target = measured ? nu.probability(P) : 0.0;
    const bool needed = std::find(required.begin(), required.end(), P) != required.end();
    for (std::size_t v = 0; v < V; ++v) hi[v] = lo[v] = static_cast<std::int32_t>(count_occurrences(g.vertex(v), P.span()));
    double worst = 0;
    auto edge_hit = [&](std::size_t u, Symbol a) {
      if (p > m + 1) return 0;
      buf.assign(g.vertex(u).begin(), g.vertex(u).end());
      buf.push_back(a);
      return spans_equal(SymbolSpan(buf).last(p), P.span()) ? 1 : 0;
    };
    // hits cached per edge, in CSR order.
    std::vector<std::uint8_t> hit;
    hit.reserve(g.edge_count());
    for (std::size_t u = 0; u < V; ++u) {
      for (const auto& e : g.successors(u)) hit.push_back(static_cast<std::uint8_t>(edge_hit(u, e.symbol)));
    }
    for (std::size_t len = m; len < 2 * r; ++len) {
      if (len >= r) {
        const double windows = static_cast<double>(len - p + 1);
        for (std::size_t v = 0; v < V; ++v) {
          if (measured) {
            worst = std::max(worst, hi[v] / windows - target);
            worst = std::max(worst, target - lo[v] / windows);
          }
          if (needed && len == r) out.min_occurrences = std::min<std::size_t>(out.min_occurrences, lo[v]);
        }
        if (!measured && len == r) break;
      }
      std::fill(nhi.begin(), nhi.end(), std::numeric_limits<std::int32_t>::min());
      std::fill(nlo.begin(), nlo.end(), std::numeric_limits<std::int32_t>::max());
      std::size_t ei = 0;
      for (std::size_t u = 0; u < V; ++u) {
        for (const auto& e : g.successors(u)) {
          const std::int32_t h = hit[ei++];
          nhi[e.to] = std::max(nhi[e.to], hi[u] + h);
          nlo[e.to] = std::min(nlo[e.to], lo[u] + h);
        }
      }
      hi.swap(nhi);
      lo.swap(nlo);
    }
    if (measured) {
      out.window_max = std::max(out.window_max, worst);
      const double slack = 2.0 * static_cast<double>(p - 1) / static_cast<double>(r - p + 1);
      out.all_lengths = std::max(out.all_lengths, worst + slack);
    }
  }
  if (required.empty()) out.min_occurrences = 0;
  return out;
}

Restricted restricted_subshift(const Subshift& ambient, const CylinderDistribution& nu, double h_bar,
                               std::size_t t, double delta, const RestrictOptions& options) {
  if (t == 0) fail(ErrorCode::parameter, kModule, "depth t must be positive");
  if (!(delta > 0) || delta > 2) fail(ErrorCode::parameter, kModule, "delta must lie in (0, 2]");
  if (nu.depth() < t) fail(ErrorCode::parameter, kModule, "measure depth is below t");
  if (options.tolerance < 0 || options.tolerance >= 1)
    fail(ErrorCode::parameter, kModule, "window tolerance must lie in [0, 1)");
  if (nu.alphabet_size() != ambient.alphabet_size())
    fail(ErrorCode::parameter, kModule, "measure and subshift alphabets differ");
  const std::size_t k = ambient.alphabet_size();

  // H(X_t | X_1..X_{t-1}) >= h_ν.
  auto shannon = [](const CylinderDistribution& d) {
    double h = 0;
    for (double p : d.values()) {
      if (p > 0) h -= p * std::log(p);
    }
    return h;
  };
  const double h_up = shannon(nu.marginal(t)) - (t > 1 ? shannon(nu.marginal(t - 1)) : 0.0);
  if (h_bar >= h_up) {
    fail(ErrorCode::entropy_infeasible, kModule,
         "entropy floor " + fmt(h_bar) + " is not below the entropy bound " + fmt(h_up) + " of the measure");
  }

  std::vector<Word> required = options.required;
  if (required.empty()) {
    for (auto& w : enumerate_blocks(ambient, t)) required.push_back(std::move(w));
  }
  std::vector<CylinderDistribution> targets;
  for (std::size_t r = 1; r <= t; ++r) targets.push_back(nu.marginal(r));

  const std::size_t first = options.window ? options.window
                                           : std::max({ambient.order(), options.min_window, t + 1});
  const std::size_t last = options.window ? options.window : std::max(first, options.max_window);
  if (first < ambient.order()) fail(ErrorCode::parameter, kModule, "window is shorter than the ambient order");
  const std::vector<double> schedule =
      options.tolerance > 0 ? std::vector<double>{options.tolerance} : std::vector<double>{0.5, 0.7, 0.9};
  double best_h = 0;
  std::size_t best_w = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> counts;
  for (std::size_t w = first; w <= last; ++w) {
    if (count_blocks(ambient, w) > static_cast<long double>(options.max_candidates)) break;
    // Worst window deviation of every candidate carrying all required blocks.
    std::vector<std::pair<double, Word>> cands;
    for (auto& b : enumerate_blocks(ambient, w)) {
      bool ok = true;
      for (std::size_t i = 0; i < required.size() && ok; ++i) ok = b.contains(required[i]);
      if (!ok) continue;
      double worst = 0;
      for (std::size_t r = 1; r <= t; ++r) {
        window_counts(b.span(), k, r, counts);
        const double windows = static_cast<double>(w - r + 1);
        for (std::size_t i = 0; i < counts.size(); ++i)
          worst = std::max(worst, std::abs(counts[i] / windows - targets[r - 1][i]));
      }
      if (worst < delta) cands.emplace_back(worst, std::move(b));
    }
    for (double kappa : schedule) {
      std::vector<Word> kept;
      for (const auto& [dev, b] : cands) {
        if (dev < kappa * delta) kept.push_back(b);
      }
      if (kept.empty()) continue;
      std::optional<Subshift> shift;
      try {
        shift.emplace(essential_part(Subshift(k, w, kept)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::empty_language) throw;
        continue;
      }
      if (FollowerGraph(*shift, true).period() != 1) continue;
      const auto br = entropy_bracket(*shift, h_bar, options.entropy_iterations);
      const double h = br.lower;
      if (h <= h_bar) {
        if (br.upper > best_h) best_h = br.upper, best_w = w;
        continue;
      }
      const std::size_t r = options.test_length
                                ? options.test_length
                                : std::max<std::size_t>(w, static_cast<std::size_t>(std::ceil(4.0 * w / delta)));
      const auto dev = deviation_bound(*shift, nu, t, r, required);
      if (dev.all_lengths >= delta || dev.min_occurrences == 0) {
        best_dev = std::min(best_dev, dev.all_lengths);
        continue;
      }
      Restricted out{std::move(*shift), {}, w, r, h, dev.all_lengths};
      out.certificate.add("syndetic", 0, static_cast<double>(dev.min_occurrences), true);
      out.certificate.add("deviation", delta, dev.all_lengths, false);
      out.certificate.add("entropy", h_bar, h, true);
      return out;
    }
  }
  if (std::isfinite(best_dev)) {
    fail(ErrorCode::typicality_failure, kModule,
         "windows clearing entropy " + fmt(h_bar) + " leave a frequency deviation of " + fmt(best_dev) +
             " (needs < " + fmt(delta) + ")");
  }
  fail(ErrorCode::entropy_infeasible, kModule,
       "no window up to length " + std::to_string(last) + " clears entropy " + fmt(h_bar) +
           (best_w ? " (at most " + fmt(best_h) + " at window " + std::to_string(best_w) + ")" : std::string()) +
           "; raise delta or the window cap");
}

std::optional<Word> connecting_word(const Subshift& shift, SymbolSpan prefix, SymbolSpan suffix,
                                    std::size_t length) {
  FollowerGraph g(shift, true);
  const std::size_t m = g.context_length();
  if (prefix.size() < m) fail(ErrorCode::parameter, kModule, "prefix shorter than the context length");
  if (!shift.admissible(prefix) || !shift.admissible(suffix)) return std::nullopt;
  const auto start = g.find_vertex(prefix.last(m));
  if (!start) return std::nullopt;
  const std::size_t V = g.vertex_count();
  auto step = [&](std::size_t v, Symbol a) -> std::optional<std::size_t> {
    for (const auto& e : g.successors(v)) {
      if (e.symbol == a) return e.to;
    }
    return std::nullopt;
  };
  // ok[j][v]: from v, j free steps followed by `suffix` can be read.
  std::vector<std::vector<bool>> ok(length + 1, std::vector<bool>(V, false));
  for (std::size_t v = 0; v < V; ++v) {
    std::optional<std::size_t> cur = v;
    for (Symbol a : suffix) {
      cur = step(*cur, a);
      if (!cur) break;
    }
    ok[0][v] = cur.has_value();
  }
  for (std::size_t j = 1; j <= length; ++j) {
    for (std::size_t v = 0; v < V; ++v) {
      for (const auto& e : g.successors(v)) {
        if (ok[j - 1][e.to]) {
          ok[j][v] = true;
          break;
        }
      }
    }
  }
  if (!ok[length][*start]) return std::nullopt;
  Word out;
  std::size_t v = *start;
  for (std::size_t j = length; j > 0; --j) {
    for (const auto& e : g.successors(v)) {
      if (ok[j - 1][e.to]) {
        out.push_back(e.symbol);
        v = e.to;
        break;
      }
    }
  }
  return out;
}

}  // namespace symdyn
