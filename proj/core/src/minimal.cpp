#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <thread>

#include "symdyn/constructions.hpp"
#include "symdyn/error.hpp"
#include "symdyn/follower_graph.hpp"
#include "symdyn/parry.hpp"
#include "internal.hpp"

namespace symdyn {

namespace detail {

std::optional<Word> connect_avoiding(const Subshift& shift, const Word& prefix, const Word& suffix,
                                     std::size_t length, const Word& pattern, bool at_end) {
  FollowerGraph g(shift, true);
  const std::size_t m = g.context_length();
  const std::size_t c = pattern.size();
  if (prefix.size() < m || !shift.admissible(prefix)) return std::nullopt;
  const auto start = g.find_vertex(prefix.sub(prefix.size() - m, m));
  if (!start) return std::nullopt;
  // KMP automaton; state c means a full match.
  std::vector<std::size_t> fail_to(c + 1, 0);
  for (std::size_t i = 1, q = 0; i < c; ++i) {
    while (q && pattern[i] != pattern[q]) q = fail_to[q];
    if (pattern[i] == pattern[q]) ++q;
    fail_to[i + 1] = q;
  }
  auto delta = [&](std::size_t q, Symbol a) {
    if (q == c) q = fail_to[c];
    while (q && pattern[q] != a) q = fail_to[q];
    return pattern[q] == a ? q + 1 : std::size_t{0};
  };
  std::size_t q0 = 0;
  for (Symbol a : prefix) q0 = delta(q0, a);
  const std::size_t V = g.vertex_count();
  auto id = [&](std::size_t v, std::size_t q) { return v * (c + 1) + q; };
  auto step = [&](std::size_t v, Symbol a) -> std::optional<std::size_t> {
    for (const auto& e : g.successors(v))
      if (e.symbol == a) return e.to;
    return std::nullopt;
  };
  std::vector<std::vector<bool>> ok(length + 1, std::vector<bool>(V * (c + 1), false));
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t q = 0; q <= c; ++q) {
      std::optional<std::size_t> cur = v;
      std::size_t qq = q;
      bool good = true;
      for (std::size_t x = 0; x < suffix.size() && good; ++x) {
        cur = step(*cur, suffix[x]);
        if (!cur) good = false;
        else {
          qq = delta(qq, suffix[x]);
          if (qq == c && !(at_end && x + 1 == suffix.size())) good = false;
        }
      }
      if (good && at_end && qq != c) good = false;
      ok[0][id(v, q)] = good;
    }
  }
  for (std::size_t j = 1; j <= length; ++j) {
    for (std::size_t v = 0; v < V; ++v) {
      for (std::size_t q = 0; q <= c; ++q) {
        for (const auto& e : g.successors(v)) {
          const std::size_t nq = delta(q, e.symbol);
          if (nq != c && ok[j - 1][id(e.to, nq)]) {
            ok[j][id(v, q)] = true;
            break;
          }
        }
      }
    }
  }
  if (!ok[length][id(*start, q0)]) return std::nullopt;
  Word out;
  std::size_t v = *start, q = q0;
  for (std::size_t j = length; j > 0; --j) {
    for (const auto& e : g.successors(v)) {
      const std::size_t nq = delta(q, e.symbol);
      if (nq != c && ok[j - 1][id(e.to, nq)]) {
        out.push_back(e.symbol);
        v = e.to;
        q = nq;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

namespace {
constexpr const char* kModule = "minimal";
constexpr std::size_t kSearchCap = 4096;

Word least_context(const Subshift& s) {
  FollowerGraph g(s, true);
  return Word(g.vertex(0));
}

// Smallest ℓ for which every query yields a connecting word of length ℓ.
template <typename Query>
std::vector<Word> common_length(std::size_t count, Query query, const char* what) {
  for (std::size_t len = 0; len <= kSearchCap; ++len) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < count; ++i) {
      auto w = query(i, len);
      if (!w) break;
      out.push_back(std::move(*w));
    }
    if (out.size() == count) return out;
  }
  fail(ErrorCode::no_transition, kModule, std::string("no common length for ") + what);
}

// Lower bound on the truncated ρ-distance from member a to the convex hull
// of the other members: grid minimum minus the grid's Lipschitz slack.
double hull_distance_lower(const std::vector<CylinderDistribution>& m, std::size_t a, std::size_t T) {
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (i != a) others.push_back(i);
  if (others.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t n = others.size() == 1 ? 1 : (others.size() <= 3 ? 24 : 8);
  double spread = 0;
  for (auto i : others)
    for (auto j : others) spread = std::max(spread, rho_distance(m[i], m[j], T).value);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> parts(others.size(), 0);
  // Enumerate compositions of n into |others| parts.
  auto visit = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
    if (idx + 1 == others.size()) {
      parts[idx] = left;
      CylinderDistribution mix(m[a].alphabet_size(), m[a].depth());
      for (std::size_t q = 0; q < others.size(); ++q) {
        const double w = static_cast<double>(parts[q]) / static_cast<double>(n);
        for (std::size_t c = 0; c < mix.cell_count(); ++c) mix[c] += w * m[others[q]][c];
      }
      best = std::min(best, rho_distance(m[a], mix, T).value);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      parts[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  visit(visit, 0, n);
  const double slack = others.size() == 1 ? 0.0 : 0.5 * static_cast<double>(others.size() - 1) / n * spread;
  return best - slack;
}

double delta_at(std::size_t i) {
  return std::min(0.4 * std::pow(0.75, static_cast<double>(i)), 0.9 * std::ldexp(1.0, -static_cast<int>(i)));
}

}  // namespace

MinimalConstruction construct_minimal_k(const Subshift& ambient_in, const std::vector<MarkovMeasure>& targets,
                                        const MinimalOptions& opt) {
  if (targets.empty()) fail(ErrorCode::parameter, kModule, "need at least one target measure");
  if (opt.stages == 0) fail(ErrorCode::parameter, kModule, "need at least one stage");
  if (!(opt.epsilon > 0) || !(opt.eta > 0)) fail(ErrorCode::parameter, kModule, "epsilon and eta must be positive");
  const std::size_t k = ambient_in.alphabet_size();
  const std::size_t K = targets.size();
  const std::size_t T = opt.rho_truncation;
  const Subshift ambient = essential_part(ambient_in);
  if (!analyze_transitions(ambient).mixing) fail(ErrorCode::parameter, kModule, "ambient subshift is not mixing");

  std::vector<CylinderDistribution> target_cyl;
  std::vector<double> target_h;
  for (const auto& mu : targets) {
    if (mu.states() != k) fail(ErrorCode::invalid_measure, kModule, "target alphabet differs from the ambient one");
    auto c = markov_cylinders(mu, std::max(ambient.order(), T));
    for (std::size_t i = 0; i < c.cell_count(); ++i) {
      if (c[i] > 0 && !ambient.admissible(c.word_at(i)))
        fail(ErrorCode::invalid_measure, kModule, "target charges a block outside the ambient subshift");
    }
    target_cyl.push_back(c.marginal(T));
    target_h.push_back(markov_entropy(mu));
  }
  if (opt.eta >= *std::min_element(target_h.begin(), target_h.end()))
    fail(ErrorCode::parameter, kModule, "eta must be below the smallest target entropy");
  for (std::size_t a = 0; a < K; ++a) {
    const double dist = hull_distance_lower(target_cyl, a, T);
    if (dist <= opt.epsilon)
      fail(ErrorCode::target_geometry, kModule,
           "target " + std::to_string(a + 1) + " lies within epsilon of the hull of the others (distance >= " +
               std::to_string(dist) + ")");
  }

  const unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t d = opt.stages;
  MinimalConstruction out;
  std::vector<Subshift> prev(K, ambient);
  std::vector<CylinderDistribution> prev_nu;
  for (const auto& mu : targets) prev_nu.push_back(markov_cylinders(mu, d));
  std::size_t prev_r = 0;

  for (std::size_t i = 1; i <= d; ++i) {
    const std::size_t t = i;  // t_{i-1}
    const double delta = delta_at(i - 1);
    std::vector<Word> required = i == 1 ? enumerate_blocks(ambient, t) : out.stages.back().glued.blocks(t);

    std::vector<double> floors(K);
    for (std::size_t j = 0; j < K; ++j) floors[j] = target_h[j] - opt.eta * static_cast<double>(i) / (d + 1.0);
    auto build = [&](std::size_t j) {
      RestrictOptions ro;
      ro.required = required;
      return restricted_subshift(prev[j], prev_nu[j].marginal(t), floors[j], t, delta, ro);
    };
    std::vector<Restricted> comps;
    if (threads > 1 && K > 1) {
      std::vector<std::future<Restricted>> jobs;
      for (std::size_t j = 0; j < K; ++j) jobs.push_back(std::async(std::launch::async, build, j));
      for (auto& f : jobs) comps.push_back(f.get());
    } else {
      for (std::size_t j = 0; j < K; ++j) comps.push_back(build(j));
    }
    std::size_t rbar = 0;
    for (const auto& c : comps) rbar = std::max(rbar, c.test_length);

    // Marker: absent from every new component, present in the parent.
    Word marker;
    if (i == 1) {
      for (std::size_t s = 1; s <= 24 && marker.empty(); ++s) {
        for (auto& w : enumerate_blocks(ambient, s)) {
          if (std::none_of(comps.begin(), comps.end(), [&](const Restricted& c) { return c.shift.admissible(w); })) {
            marker = std::move(w);
            break;
          }
        }
      }
      if (marker.empty()) fail(ErrorCode::no_marker, kModule, "no block separates the parent from the components");
    } else {
      marker = out.stages.back().glued.marker();
    }

    std::vector<Word> ctx(K);
    for (std::size_t j = 0; j < K; ++j) ctx[j] = least_context(comps[j].shift);

    // U^{st} = X_s · middle · Y_t.
    std::map<std::pair<std::size_t, std::size_t>, Word> bridges;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t s = 0; s < K; ++s)
      for (std::size_t q = 0; q < K; ++q)
        if (s != q) pairs.emplace_back(s, q);
    if (!pairs.empty()) {
      if (i == 1) {
        auto xs = common_length(K, [&](std::size_t s, std::size_t len) {
          return detail::connect_avoiding(ambient, ctx[s], marker, len, marker, true);
        }, "the marker approach");
        auto ys = common_length(pairs.size(), [&](std::size_t p, std::size_t len) {
          const auto [s, q] = pairs[p];
          const Word pre = ctx[s] + xs[s] + marker;
          return detail::connect_avoiding(ambient, pre, ctx[q], len, marker, false);
        }, "the marker exit");
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          const auto [s, q] = pairs[p];
          bridges[pairs[p]] = xs[s] + marker + ys[p];
        }
      } else {
        const auto& last = out.stages.back();
        auto xs = common_length(K, [&](std::size_t s, std::size_t len) {
          return connecting_word(prev[s], ctx[s].span(), last.glued.anchors()[s].span(), len);
        }, "the previous anchors");
        auto ys = common_length(K, [&](std::size_t q, std::size_t len) {
          return connecting_word(prev[q], last.glued.anchors()[q].span(), ctx[q].span(), len);
        }, "the new contexts");
        for (const auto& pr : pairs) {
          const auto [s, q] = pr;
          bridges[pr] = xs[s] + last.glued.bridge_word(s, q) + ys[q];
        }
      }
    }
    std::size_t L = 0;
    for (const auto& [key, u] : bridges) L = std::max(L, u.size());
    for (const auto& [key, u] : bridges) {
      if (u.size() != L) fail(ErrorCode::internal, kModule, "bridge lengths differ");
    }

    std::size_t mmax = 0;
    for (const auto& c : ctx) mmax = std::max(mmax, c.size());
    const double need = 4.0 * static_cast<double>(rbar + L) / delta;
    std::size_t r = std::max<std::size_t>({prev_r + 1, static_cast<std::size_t>(std::floor(need)) + 1, 2 * mmax + 1});
    std::vector<Word> anchors(K);
    for (std::size_t j = 0; j < K; ++j) {
      const std::size_t m = ctx[j].size();
      auto mid = connecting_word(comps[j].shift, ctx[j].span(), ctx[j].span(), r - 2 * m);
      if (!mid) fail(ErrorCode::no_transition, kModule, "no anchor word of length " + std::to_string(r));
      anchors[j] = ctx[j] + *mid + ctx[j];
    }

    std::vector<Subshift> shifts;
    for (const auto& c : comps) shifts.push_back(c.shift);
    GluedShift glued(shifts, anchors, bridges, marker, r);

    Certificate inv;
    {
      double inside = 0;
      for (const auto& c : comps) inside += c.shift.admissible(marker) ? 1 : 0;
      inv.add("marker-new", 0.5, inside, false);
      const bool in_parent = i == 1 ? ambient.admissible(marker) : out.stages.back().glued.admissible(marker);
      inv.add("marker-in-parent", 0.5, in_parent ? 1 : 0, true);
      bool once = true;
      for (const auto& [key, u] : bridges) {
        once = once && glued.bridge_word(key.first, key.second).count_occurrences(marker) == 1 &&
               u.count_occurrences(marker) == 1;
      }
      inv.add("marker-once", 0.5, once ? 1 : 0, true);
      inv.add("defining-length", need, static_cast<double>(r), true);
      bool contained = true;
      for (std::size_t j = 0; j < K && contained; ++j) {
        const auto& b = comps[j].shift.blocks();
        for (std::size_t x = 0; x < b.size() && contained; ++x) contained = prev[j].admissible(b[x]);
      }
      for (const auto& [key, u] : bridges) {
        const Word w = glued.bridge_word(key.first, key.second);
        contained = contained && (i == 1 ? ambient.admissible(w) : out.stages.back().glued.admissible(w));
      }
      inv.add("containment", 0.5, contained ? 1 : 0, true);
    }

    StageArtifacts st{i, delta, t, comps, floors, rbar, L, r, std::move(glued), std::move(inv)};
    prev_r = r;
    for (std::size_t j = 0; j < K; ++j) {
      prev[j] = comps[j].shift;
      prev_nu[j] = ParryMeasure(prev[j]).cylinders(d);
    }
    out.stages.push_back(std::move(st));
  }

  // Final-stage certificate.
  const auto& fin = out.stages.back();
  const std::size_t t = fin.depth;
  const std::vector<Word> required = d == 1 ? enumerate_blocks(ambient, t) : out.stages[d - 2].glued.blocks(t);
  std::vector<std::unique_ptr<ParryMeasure>> parry;
  for (const auto& c : fin.components) parry.push_back(std::make_unique<ParryMeasure>(c.shift));
  for (const auto& p : parry) out.measures.push_back(p->cylinders(std::max(T, t)).marginal(T));

  // (a) every required block in every defining block of M_d.
  double min_occ = std::numeric_limits<double>::infinity();
  std::vector<DeviationBound> dev;
  for (std::size_t j = 0; j < K; ++j) {
    dev.push_back(deviation_bound(fin.components[j].shift, parry[j]->cylinders(t), t, fin.test_length, required));
    min_occ = std::min(min_occ, static_cast<double>(dev.back().min_occurrences));
  }
  const std::size_t r = fin.defining_length;
  for (const auto& [key, u] : fin.glued.bridges()) {
    const Word w = fin.glued.bridge_word(key.first, key.second);
    for (const auto& P : required) {
      std::vector<std::size_t> pre(w.size() + 1, 0);
      for (std::size_t x = 0; x < w.size(); ++x)
        pre[x + 1] = pre[x] + (x + P.size() <= w.size() && spans_equal(w.sub(x, P.size()), P.span()) ? 1 : 0);
      for (std::size_t x = 0; x + r <= w.size(); ++x)
        min_occ = std::min(min_occ, static_cast<double>(pre[x + r - P.size() + 1] - pre[x]));
    }
  }
  out.certificate.add("syndetic-depth-" + std::to_string(t), 0, min_occ, true);
  for (std::size_t j = 0; j < K; ++j)
    out.certificate.add("deviation-" + std::to_string(j + 1), fin.delta, dev[j].all_lengths, false);
  for (std::size_t s = 0; s < K; ++s)
    for (std::size_t q = s + 1; q < K; ++q)
      out.certificate.add("separation-" + std::to_string(s + 1) + "-" + std::to_string(q + 1), opt.epsilon / 3,
                          rho_distance(out.measures[s], out.measures[q], T).value, true);
  for (std::size_t j = 0; j < K; ++j)
    out.certificate.add("entropy-" + std::to_string(j + 1), target_h[j] - opt.eta, parry[j]->entropy(), true);
  out.certificate.add("hausdorff", opt.epsilon / 2,
                      hausdorff_rho(MeasureSet(out.measures), MeasureSet(target_cyl), T) + std::ldexp(1.0, -static_cast<int>(T)),
                      false);
  for (const auto& s : out.stages) out.certificate.append(s.invariants, "stage" + std::to_string(s.index) + "-");
  return out;
}

}  // namespace symdyn
