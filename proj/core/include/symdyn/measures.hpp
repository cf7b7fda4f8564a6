#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

// Exact non-negative fraction in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::uint64_t num, std::uint64_t den);

// μ_Q(P): occurrences of P as a window of Q over the number of windows.
Rational block_frequency(const Word& text, const Word& pattern);

// Probabilities of all k^t cylinders of depth t. Entry i belongs to the word
// whose base-k digits (most significant first) spell i, i.e. lexicographic order.
class CylinderDistribution {
 public:
  CylinderDistribution(std::size_t alphabet_size, std::size_t depth);
  CylinderDistribution(std::size_t alphabet_size, std::size_t depth, std::vector<double> freq);

  static CylinderDistribution point_mass(std::size_t alphabet_size, std::size_t depth, const Word& block);

  std::size_t alphabet_size() const noexcept { return k_; }
  std::size_t depth() const noexcept { return t_; }
  std::size_t cell_count() const noexcept { return freq_.size(); }

  double operator[](std::size_t index) const { return freq_[index]; }
  double& operator[](std::size_t index) { return freq_[index]; }
  double probability(SymbolSpan block) const;
  double probability(const Word& block) const { return probability(block.span()); }
  std::size_t index_of(SymbolSpan block) const;
  Word word_at(std::size_t index) const;
  const std::vector<double>& values() const noexcept { return freq_; }

  // Marginal on the first `depth` coordinates.
  CylinderDistribution marginal(std::size_t depth) const;
  double total() const;
  // Σ_a μ(a w) = Σ_b μ(w b) for every (t-1)-word w, within `tolerance`.
  bool stationary(double tolerance = 1e-9) const;
  // Blocks with probability above `threshold`, lexicographic.
  std::vector<Word> support(double threshold = 0.0) const;

 private:
  std::size_t k_;
  std::size_t t_;
  std::vector<double> freq_;
};

// n windows of length t from the first n+t-1 symbols of `prefix`.
CylinderDistribution empirical_distribution(SymbolSpan prefix, std::size_t alphabet_size,
                                            std::size_t n, std::size_t t);

struct RhoValue {
  double value = 0.0;
  double error_bound = 0.0;
};

// Σ_{r≤T} Σ_P |μ(P)-ν(P)| / (2^r k^r), with the tail 2^{-T} reported as the bound.
RhoValue rho_distance(const CylinderDistribution& mu, const CylinderDistribution& nu, std::size_t truncation);

class MarkovMeasure {
 public:
  // Validates row sums, non-negativity and stationarity of `pi`.
  MarkovMeasure(std::vector<std::vector<double>> transition, std::vector<double> stationary);

  // Stationary vector found by power iteration; requires a unique one.
  static MarkovMeasure from_transition(std::vector<std::vector<double>> transition);
  static MarkovMeasure bernoulli(const std::vector<double>& weights);

  std::size_t states() const noexcept { return pi_.size(); }
  const std::vector<std::vector<double>>& transition() const noexcept { return p_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }
  double transition(std::size_t a, std::size_t b) const { return p_[a][b]; }

  // Irreducible on the support of π (all states with π > 0 reach each other).
  bool irreducible() const;
  double cylinder(SymbolSpan block) const;

  static MarkovMeasure parse(std::istream& in);
  static MarkovMeasure load(const std::string& path);
  std::string to_text() const;

 private:
  std::vector<std::vector<double>> p_;
  std::vector<double> pi_;
};

CylinderDistribution markov_cylinders(const MarkovMeasure& m, std::size_t depth);
// -Σ π_i Σ_j Π_ij log Π_ij, nats.
double markov_entropy(const MarkovMeasure& m);

struct PowerEntropy {
  double entropy = 0.0;
  double ratio = 0.0;
};
// Entropy of the chain of n-blocks driven by Π, and its ratio to markov_entropy.
PowerEntropy power_entropy_check(const MarkovMeasure& m, std::size_t n);

class MeasureSet {
 public:
  explicit MeasureSet(std::vector<CylinderDistribution> members);
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t depth() const noexcept { return members_.front().depth(); }
  const CylinderDistribution& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<CylinderDistribution>& members() const noexcept { return members_; }

 private:
  std::vector<CylinderDistribution> members_;
};

// Hausdorff distance induced by the truncated ρ.
double hausdorff_rho(const MeasureSet& a, const MeasureSet& b, std::size_t truncation);

}  // namespace symdyn
