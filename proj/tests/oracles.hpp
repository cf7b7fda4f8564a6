#pragma once

// Reference computations for the tests. They share no code with the library
// beyond plain data types: words are std::vector<int>, shifts are lists of
// allowed windows, and every quantity is computed the slow, obvious way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Seq = std::vector<int>;

inline Seq digits(const std::string& s) {
  Seq out;
  for (char c : s) out.push_back(c - '0');
  return out;
}

inline std::string text(const Seq& s) {
  std::string out;
  for (int v : s) out.push_back(static_cast<char>('0' + v));
  return out;
}

// All k^n sequences in lexicographic order.
inline std::vector<Seq> all_sequences(int k, int n) {
  std::vector<Seq> out;
  Seq cur(n, 0);
  for (;;) {
    out.push_back(cur);
    int i = n;
    while (i > 0 && cur[i - 1] == k - 1) cur[--i] = 0;
    if (i == 0) return out;
    ++cur[i - 1];
  }
}

struct Shift {
  int k;
  int order;
  std::set<Seq> allowed;

  // Window test for words at least as long as the order; shorter words must
  // sit inside some allowed window.
  bool admissible(const Seq& w) const {
    if (static_cast<int>(w.size()) < order) {
      for (const auto& a : allowed) {
        for (std::size_t p = 0; p + w.size() <= a.size(); ++p) {
          if (std::equal(w.begin(), w.end(), a.begin() + static_cast<std::ptrdiff_t>(p))) return true;
        }
      }
      return false;
    }
    for (std::size_t p = 0; p + order <= w.size(); ++p) {
      if (!allowed.count(Seq(w.begin() + static_cast<std::ptrdiff_t>(p), w.begin() + static_cast<std::ptrdiff_t>(p + order))))
        return false;
    }
    return true;
  }

  // Brute force over all k^r words.
  std::vector<Seq> blocks(int r) const {
    std::vector<Seq> out;
    for (auto& w : all_sequences(k, r))
      if (admissible(w)) out.push_back(w);
    return out;
  }
};

inline Shift golden() { return {2, 2, {{0, 0}, {0, 1}, {1, 0}}}; }
inline Shift full(int k) {
  Shift s{k, 1, {}};
  for (int a = 0; a < k; ++a) s.allowed.insert({a});
  return s;
}

// Spectral radius of a non-negative matrix by power iteration on (A + I).
inline double spectral_radius(const std::vector<std::vector<double>>& a, int iterations = 20000) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0), w(n);
  double lambda = 0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i];
      for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] * v[j];
    }
    const double norm = *std::max_element(w.begin(), w.end());
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    lambda = norm - 1.0;
  }
  return lambda;
}

// Occurrence count of p in q, by direct comparison.
inline int occurrences(const Seq& q, const Seq& p) {
  int c = 0;
  for (std::size_t i = 0; i + p.size() <= q.size(); ++i)
    if (std::equal(p.begin(), p.end(), q.begin() + static_cast<std::ptrdiff_t>(i))) ++c;
  return c;
}

// Σ_{r≤T} Σ_P |μ(P) − ν(P)| / (2^r k^r) from two cylinder tables keyed by word.
inline double rho(const std::map<Seq, double>& mu, const std::map<Seq, double>& nu, int k, int T) {
  double total = 0;
  for (int r = 1; r <= T; ++r) {
    double s = 0;
    for (auto& w : all_sequences(k, r)) {
      auto get = [&](const std::map<Seq, double>& m) {
        // Marginal: sum over all deeper cells starting with w.
        double v = 0;
        for (auto& [key, p] : m)
          if (key.size() >= w.size() && std::equal(w.begin(), w.end(), key.begin())) v += p;
        return v;
      };
      s += std::fabs(get(mu) - get(nu));
    }
    total += s / (std::pow(2.0, r) * std::pow(static_cast<double>(k), r));
  }
  return total;
}

// Cylinder probability of a chain by the product formula.
inline double chain_cylinder(const std::vector<std::vector<double>>& p, const std::vector<double>& pi, const Seq& w) {
  double v = pi[w[0]];
  for (std::size_t i = 1; i < w.size(); ++i) v *= p[w[i - 1]][w[i]];
  return v;
}

}  // namespace oracle
