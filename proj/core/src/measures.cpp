#include "symdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "measures";
constexpr std::size_t kMaxCells = std::size_t{1} << 26;

std::size_t checked_power(std::size_t k, std::size_t t) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < t; ++i) {
    if (cells > kMaxCells / k) {
      fail(ErrorCode::depth, kModule,
           "depth " + std::to_string(t) + " over alphabet " + std::to_string(k) + " exceeds the dense table limit");
    }
    cells *= k;
  }
  return cells;
}

double xlogx(double p) { return p > 0 ? p * std::log(p) : 0.0; }

}  // namespace

// ---------------------------------------------------------------- Rational

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) fail(ErrorCode::parameter, kModule, "zero denominator");
  const auto g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational block_frequency(const Word& text, const Word& pattern) {
  if (pattern.empty()) fail(ErrorCode::length, kModule, "empty pattern");
  if (pattern.size() > text.size()) {
    fail(ErrorCode::length, kModule,
         "pattern length " + std::to_string(pattern.size()) + " exceeds text length " + std::to_string(text.size()));
  }
  const std::size_t windows = text.size() - pattern.size() + 1;
  return make_rational(count_occurrences(text.span(), pattern.span()), windows);
}

// ---------------------------------------------------------------- CylinderDistribution

CylinderDistribution::CylinderDistribution(std::size_t alphabet_size, std::size_t depth)
    : k_(alphabet_size), t_(depth) {
  if (k_ < 2) fail(ErrorCode::parameter, kModule, "alphabet size must be >= 2");
  if (t_ == 0) fail(ErrorCode::depth, kModule, "depth must be >= 1");
  freq_.assign(checked_power(k_, t_), 0.0);
}

CylinderDistribution::CylinderDistribution(std::size_t alphabet_size, std::size_t depth, std::vector<double> freq)
    : CylinderDistribution(alphabet_size, depth) {
  if (freq.size() != freq_.size()) fail(ErrorCode::depth, kModule, "frequency table has the wrong size");
  for (double v : freq) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::invalid_measure, kModule, "negative or non-finite frequency");
  }
  freq_ = std::move(freq);
  if (std::abs(total() - 1.0) > 1e-12 * static_cast<double>(std::max<std::size_t>(freq_.size(), 1)) + 1e-12) {
    fail(ErrorCode::invalid_measure, kModule, "frequencies do not sum to 1");
  }
}

CylinderDistribution CylinderDistribution::point_mass(std::size_t alphabet_size, std::size_t depth,
                                                      const Word& block) {
  CylinderDistribution d(alphabet_size, depth);
  d.freq_[d.index_of(block.span())] = 1.0;
  return d;
}

std::size_t CylinderDistribution::index_of(SymbolSpan block) const {
  if (block.size() != t_) fail(ErrorCode::depth, kModule, "block length differs from the distribution depth");
  std::size_t idx = 0;
  for (Symbol s : block) {
    if (s >= k_) fail(ErrorCode::parameter, kModule, "symbol outside the alphabet");
    idx = idx * k_ + s;
  }
  return idx;
}

Word CylinderDistribution::word_at(std::size_t index) const {
  std::vector<Symbol> s(t_);
  for (std::size_t i = t_; i-- > 0;) {
    s[i] = static_cast<Symbol>(index % k_);
    index /= k_;
  }
  return Word(std::move(s));
}

double CylinderDistribution::probability(SymbolSpan block) const {
  if (block.size() > t_) fail(ErrorCode::depth, kModule, "block longer than the distribution depth");
  if (block.size() == t_) return freq_[index_of(block)];
  return marginal(block.size()).probability(block);
}

CylinderDistribution CylinderDistribution::marginal(std::size_t depth) const {
  if (depth > t_) fail(ErrorCode::depth, kModule, "cannot refine a distribution beyond its depth");
  if (depth == t_) return *this;
  CylinderDistribution out(k_, depth);
  const std::size_t stride = freq_.size() / out.freq_.size();
  for (std::size_t i = 0; i < freq_.size(); ++i) out.freq_[i / stride] += freq_[i];
  return out;
}

double CylinderDistribution::total() const {
  long double s = 0;
  for (double v : freq_) s += v;
  return static_cast<double>(s);
}

bool CylinderDistribution::stationary(double tolerance) const {
  if (t_ == 1) return true;
  const std::size_t inner = freq_.size() / k_;
  // Σ_a μ(a w): indices a*inner + w. Σ_b μ(w b): indices w*k + b.
  for (std::size_t w = 0; w < inner; ++w) {
    double left = 0, right = 0;
    for (std::size_t a = 0; a < k_; ++a) {
      left += freq_[a * inner + w];
      right += freq_[w * k_ + a];
    }
    if (std::abs(left - right) > tolerance) return false;
  }
  return true;
}

std::vector<Word> CylinderDistribution::support(double threshold) const {
  std::vector<Word> out;
  for (std::size_t i = 0; i < freq_.size(); ++i) {
    if (freq_[i] > threshold) out.push_back(word_at(i));
  }
  return out;
}

CylinderDistribution empirical_distribution(SymbolSpan prefix, std::size_t alphabet_size, std::size_t n,
                                            std::size_t t) {
  if (t == 0) fail(ErrorCode::depth, kModule, "depth must be >= 1");
  if (n < t) fail(ErrorCode::parameter, kModule, "horizon n must be >= depth t");
  if (prefix.size() < n + t - 1) {
    fail(ErrorCode::short_stream, kModule,
         "need " + std::to_string(n + t - 1) + " symbols, have " + std::to_string(prefix.size()));
  }
  CylinderDistribution d(alphabet_size, t);
  std::vector<std::uint64_t> counts(d.cell_count(), 0);
  const std::size_t top = d.cell_count() / alphabet_size;
  std::size_t idx = 0;
  for (std::size_t i = 0; i + 1 < t; ++i) {
    if (prefix[i] >= alphabet_size) fail(ErrorCode::parameter, kModule, "symbol outside the alphabet");
    idx = idx * alphabet_size + prefix[i];
  }
  for (std::size_t i = t - 1; i < n + t - 1; ++i) {
    if (prefix[i] >= alphabet_size) fail(ErrorCode::parameter, kModule, "symbol outside the alphabet");
    idx = (idx % top) * alphabet_size + prefix[i];
    ++counts[idx];
  }
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) freq[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  for (std::size_t i = 0; i < counts.size(); ++i) d[i] = freq[i];
  return d;
}

RhoValue rho_distance(const CylinderDistribution& mu, const CylinderDistribution& nu, std::size_t truncation) {
  if (mu.alphabet_size() != nu.alphabet_size()) fail(ErrorCode::depth, kModule, "alphabet sizes differ");
  if (truncation == 0) fail(ErrorCode::depth, kModule, "truncation depth must be >= 1");
  if (truncation > mu.depth() || truncation > nu.depth()) {
    fail(ErrorCode::depth, kModule,
         "truncation " + std::to_string(truncation) + " exceeds available depth " +
             std::to_string(std::min(mu.depth(), nu.depth())));
  }
  const double k = static_cast<double>(mu.alphabet_size());
  RhoValue out;
  CylinderDistribution a = mu.marginal(truncation), b = nu.marginal(truncation);
  for (std::size_t r = truncation; r >= 1; --r) {
    if (r < truncation) {
      a = a.marginal(r);
      b = b.marginal(r);
    }
    double s = 0;
    for (std::size_t i = 0; i < a.cell_count(); ++i) s += std::abs(a[i] - b[i]);
    out.value += s / (std::pow(2.0, static_cast<double>(r)) * std::pow(k, static_cast<double>(r)));
  }
  out.error_bound = std::ldexp(1.0, -static_cast<int>(truncation));
  return out;
}

// ---------------------------------------------------------------- MarkovMeasure

MarkovMeasure::MarkovMeasure(std::vector<std::vector<double>> transition, std::vector<double> stationary)
    : p_(std::move(transition)), pi_(std::move(stationary)) {
  const std::size_t k = pi_.size();
  if (k < 2) fail(ErrorCode::invalid_measure, kModule, "at least two states required");
  if (p_.size() != k) fail(ErrorCode::invalid_measure, kModule, "transition matrix and stationary vector differ in size");
  for (std::size_t i = 0; i < k; ++i) {
    if (p_[i].size() != k) fail(ErrorCode::invalid_measure, kModule, "transition matrix is not square");
    double row = 0;
    for (double v : p_[i]) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::invalid_measure, kModule, "negative transition probability");
      row += v;
    }
    if (std::abs(row - 1.0) > 1e-9) {
      fail(ErrorCode::invalid_measure, kModule, "row " + std::to_string(i) + " sums to " + std::to_string(row));
    }
  }
  double total = 0;
  for (double v : pi_) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::invalid_measure, kModule, "negative stationary weight");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::invalid_measure, kModule, "stationary vector does not sum to 1");
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += pi_[i] * p_[i][j];
    if (std::abs(s - pi_[j]) > 1e-9) fail(ErrorCode::invalid_measure, kModule, "pi is not stationary for P");
  }
}

MarkovMeasure MarkovMeasure::from_transition(std::vector<std::vector<double>> transition) {
  const std::size_t k = transition.size();
  if (k < 2) fail(ErrorCode::invalid_measure, kModule, "at least two states required");
  // Lazy chain (P+I)/2 has the same stationary vectors and is aperiodic.
  std::vector<double> pi(k, 1.0 / static_cast<double>(k)), next(k);
  for (int it = 0; it < 1000000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (transition[i].size() != k) fail(ErrorCode::invalid_measure, kModule, "transition matrix is not square");
      next[i] += 0.5 * pi[i];
      for (std::size_t j = 0; j < k; ++j) next[j] += 0.5 * pi[i] * transition[i][j];
    }
    const double s = std::accumulate(next.begin(), next.end(), 0.0);
    double diff = 0;
    for (std::size_t i = 0; i < k; ++i) {
      next[i] /= s;
      diff = std::max(diff, std::abs(next[i] - pi[i]));
    }
    pi.swap(next);
    if (diff < 1e-15) break;
  }
  return MarkovMeasure(std::move(transition), std::move(pi));
}

MarkovMeasure MarkovMeasure::bernoulli(const std::vector<double>& weights) {
  const std::size_t k = weights.size();
  return MarkovMeasure(std::vector<std::vector<double>>(k, weights), weights);
}

bool MarkovMeasure::irreducible() const {
  const std::size_t k = states();
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < k; ++i) {
    if (pi_[i] > 0) live.push_back(i);
  }
  for (std::size_t src : live) {
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> stack{src};
    seen[src] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < k; ++v) {
        if (p_[u][v] > 0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (std::size_t v : live) {
      if (!seen[v]) return false;
    }
  }
  return true;
}

double MarkovMeasure::cylinder(SymbolSpan block) const {
  if (block.empty()) return 1.0;
  for (Symbol s : block) {
    if (s >= states()) return 0.0;
  }
  double p = pi_[block[0]];
  for (std::size_t i = 1; i < block.size() && p > 0; ++i) p *= p_[block[i - 1]][block[i]];
  return p;
}

namespace {

std::string next_content_line(std::istream& in, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return line.substr(first);
  }
  fail(ErrorCode::parse, kModule, "unexpected end of markov input after line " + std::to_string(line_no));
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t line_no) {
  std::istringstream ss(line);
  std::vector<double> row;
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      row.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
  }
  if (row.size() != expected) {
    fail(ErrorCode::parse, kModule,
         "line " + std::to_string(line_no) + ": expected " + std::to_string(expected) + " values");
  }
  return row;
}

void expect(const std::string& got, const std::string& want, std::size_t line_no) {
  if (got != want) {
    fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": expected '" + want + "', got '" + got + "'");
  }
}

}  // namespace

MarkovMeasure MarkovMeasure::parse(std::istream& in) {
  std::size_t line_no = 0;
  expect(next_content_line(in, line_no), "markov v1", line_no);
  std::string line = next_content_line(in, line_no);
  std::istringstream ss(line);
  std::string key;
  long long k = 0;
  if (!(ss >> key >> k) || key != "states" || k < 2) {
    fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": expected 'states <k>' with k >= 2");
  }
  const auto n = static_cast<std::size_t>(k);
  expect(next_content_line(in, line_no), "P", line_no);
  std::vector<std::vector<double>> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(parse_row(next_content_line(in, line_no), n, line_no));
  expect(next_content_line(in, line_no), "pi", line_no);
  auto pi = parse_row(next_content_line(in, line_no), n, line_no);
  expect(next_content_line(in, line_no), "end", line_no);
  return MarkovMeasure(std::move(p), std::move(pi));
}

MarkovMeasure MarkovMeasure::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, kModule, "cannot open " + path);
  return parse(in);
}

std::string MarkovMeasure::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "markov v1\nstates " << states() << "\nP\n";
  for (const auto& row : p_) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
  out << "pi\n";
  for (std::size_t j = 0; j < pi_.size(); ++j) out << (j ? " " : "") << pi_[j];
  out << "\nend\n";
  return out.str();
}

CylinderDistribution markov_cylinders(const MarkovMeasure& m, std::size_t depth) {
  const std::size_t k = m.states();
  CylinderDistribution d(k, depth);
  std::vector<double> cur(m.stationary());
  for (std::size_t t = 2; t <= depth; ++t) {
    std::vector<double> next(cur.size() * k);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const std::size_t last = i % k;
      for (std::size_t b = 0; b < k; ++b) next[i * k + b] = cur[i] * m.transition(last, b);
    }
    cur.swap(next);
  }
  for (std::size_t i = 0; i < cur.size(); ++i) d[i] = cur[i];
  return d;
}

double markov_entropy(const MarkovMeasure& m) {
  double h = 0;
  for (std::size_t i = 0; i < m.states(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < m.states(); ++j) row -= xlogx(m.transition(i, j));
    h += m.stationary()[i] * row;
  }
  return h;
}

PowerEntropy power_entropy_check(const MarkovMeasure& m, std::size_t n) {
  if (n == 0) fail(ErrorCode::parameter, kModule, "power must be >= 1");
  const std::size_t k = m.states();
  // The next n-block B depends on the current block only through its last
  // symbol a, with probability Π_{a B_0} Π_{B_0 B_1} ... Π_{B_{n-2} B_{n-1}}.
  // Row entropy is accumulated over the paths of length n leaving a.
  const auto blocks = markov_cylinders(m, n);
  std::vector<double> row_entropy(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<double> cur(k);
    for (std::size_t b = 0; b < k; ++b) cur[b] = m.transition(a, b);
    for (std::size_t step = 1; step < n; ++step) {
      std::vector<double> next(cur.size() * k);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        for (std::size_t b = 0; b < k; ++b) next[i * k + b] = cur[i] * m.transition(i % k, b);
      }
      cur.swap(next);
    }
    for (double p : cur) row_entropy[a] -= xlogx(p);
  }
  // Stationary law of the block chain is the depth-n cylinder law; weight by its last symbol.
  PowerEntropy out;
  for (std::size_t i = 0; i < blocks.cell_count(); ++i) out.entropy += blocks[i] * row_entropy[i % k];
  const double base = markov_entropy(m);
  out.ratio = base > 0 ? out.entropy / base : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// ---------------------------------------------------------------- MeasureSet

MeasureSet::MeasureSet(std::vector<CylinderDistribution> members) : members_(std::move(members)) {
  if (members_.empty()) fail(ErrorCode::empty_set, kModule, "measure set is empty");
  for (const auto& m : members_) {
    if (m.depth() != members_.front().depth() || m.alphabet_size() != members_.front().alphabet_size()) {
      fail(ErrorCode::depth, kModule, "measure set members differ in depth or alphabet");
    }
  }
}

double hausdorff_rho(const MeasureSet& a, const MeasureSet& b, std::size_t truncation) {
  auto directed = [&](const MeasureSet& from, const MeasureSet& to) {
    double worst = 0;
    for (const auto& x : from.members()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to.members()) best = std::min(best, rho_distance(x, y, truncation).value);
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace symdyn
