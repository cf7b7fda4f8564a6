#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/measures.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

struct CertificateLine {
  std::string name;
  double bound = 0.0;
  double achieved = 0.0;
  // true: the check is achieved > bound; false: achieved < bound.
  bool lower = false;

  bool pass() const { return lower ? achieved > bound : achieved < bound; }
};

class Certificate {
 public:
  void add(std::string name, double bound, double achieved, bool lower);
  void append(const Certificate& other, const std::string& prefix = "");
  const std::vector<CertificateLine>& lines() const noexcept { return lines_; }
  bool pass() const;
  // One "<name> <bound> <achieved> PASS|FAIL" line per check.
  std::string to_text() const;

 private:
  std::vector<CertificateLine> lines_;
};

// Exact extremes of μ_Q(P) over the language of an SFT.
struct DeviationBound {
  // max over Q of length in [r, 2r) and P of |μ_Q(P) - ν(P)|.
  double window_max = 0.0;
  // Bound valid for every Q of length >= r (window_max plus splitting slack).
  double all_lengths = 0.0;
  // min over P in `required` and Q of length r of the occurrence count of P.
  std::size_t min_occurrences = 0;
};

// `t` is the pattern depth; every block of length <= t is compared with ν.
DeviationBound deviation_bound(const Subshift& shift, const CylinderDistribution& nu, std::size_t t,
                               std::size_t r, const std::vector<Word>& required);

// Certified bounds on h(S) from Collatz-Wielandt ratios. Iteration stops once
// the bracket separates from `target` or closes.
struct EntropyBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
};
EntropyBracket entropy_bracket(const Subshift& shift, double target, std::size_t max_iterations = 5000);

// Keeps the blocks of the essential follower graph; when it splits into several
// components the one of largest entropy is kept.
Subshift essential_part(const Subshift& shift);

struct RestrictOptions {
  // 0 picks the smallest window >= max(order, min_window) that works.
  std::size_t window = 0;
  std::size_t min_window = 8;
  std::size_t max_window = 22;
  // Stops the window search when Bl_w(M) grows past this.
  std::size_t max_candidates = std::size_t{1} << 22;
  // Test length r̄; 0 picks ceil(4w/δ).
  std::size_t test_length = 0;
  std::size_t entropy_iterations = 5000;
  // Window blocks must be within tolerance·δ of ν. 0 tries 1/2 (the
  // typical-block bound), then 0.7 and 0.9 at each window length.
  double tolerance = 0;
  // Blocks that must occur in every window; empty means Bl_t(M).
  std::vector<Word> required;
};

struct Restricted {
  Subshift shift;
  Certificate certificate;
  std::size_t window = 0;
  std::size_t test_length = 0;
  // Certified lower bound on h(M̄).
  double entropy = 0.0;
  double deviation = 0.0;
};

// Sub-SFT of M whose defining blocks are the length-w blocks of M that are
// δ/2-typical for ν at depths <= t and contain every required block. The
// certificate checks syndeticity of the required blocks in words of length r̄,
// the frequency deviation of all words of length >= r̄, and h(M̄) > h̄.
Restricted restricted_subshift(const Subshift& ambient, const CylinderDistribution& nu, double h_bar,
                               std::size_t t, double delta, const RestrictOptions& options = {});

// Lexicographically least word U of the given length with P·U·Q in the
// language of an essential SFT, found on the follower graph.
std::optional<Word> connecting_word(const Subshift& shift, SymbolSpan prefix, SymbolSpan suffix,
                                    std::size_t length);

// Subshift with defining length r whose allowed r-blocks are the r-blocks of
// the components together with the r-windows of the bridge words S^s U^{st} S^t.
class GluedShift {
 public:
  GluedShift(std::vector<Subshift> components, std::vector<Word> anchors,
             std::map<std::pair<std::size_t, std::size_t>, Word> bridges, Word marker, std::size_t length);

  std::size_t alphabet_size() const { return components_.front().alphabet_size(); }
  std::size_t defining_length() const noexcept { return length_; }
  const std::vector<Subshift>& components() const noexcept { return components_; }
  const std::vector<Word>& anchors() const noexcept { return anchors_; }
  const std::map<std::pair<std::size_t, std::size_t>, Word>& bridges() const noexcept { return bridges_; }
  const Word& marker() const noexcept { return marker_; }
  // S^s U^{st} S^t.
  Word bridge_word(std::size_t s, std::size_t t) const;

  bool window_allowed(SymbolSpan window) const;
  bool admissible(SymbolSpan word) const;
  bool admissible(const Word& word) const { return admissible(word.span()); }
  // Blocks of length t occurring in the components or in the bridge words.
  std::vector<Word> blocks(std::size_t t) const;

  // "glued v1" descriptor; components are referenced by file name.
  std::string to_text(const std::vector<std::string>& component_files) const;
  // Reads a descriptor; component files resolve against its directory.
  static GluedShift load(const std::string& path);

 private:
  std::vector<Subshift> components_;
  std::vector<Word> anchors_;
  std::map<std::pair<std::size_t, std::size_t>, Word> bridges_;
  Word marker_;
  std::size_t length_;
};

struct MinimalOptions {
  double epsilon = 0.3;
  double eta = 0.15;
  std::size_t stages = 2;
  std::uint64_t seed = 0;
  std::size_t rho_truncation = 8;
  unsigned threads = 1;
};

struct StageArtifacts {
  std::size_t index = 0;
  double delta = 0.0;
  std::size_t depth = 0;  // t_{i-1}
  std::vector<Restricted> components;
  std::vector<double> entropy_floor;
  std::size_t test_length = 0;  // r̄_i
  std::size_t bridge_length = 0;  // L_i
  std::size_t defining_length = 0;  // r_i
  GluedShift glued;
  // Invariants checked while building the stage.
  Certificate invariants;
};

struct MinimalConstruction {
  std::vector<StageArtifacts> stages;
  // ν̂^j: Parry measures of the final components.
  std::vector<CylinderDistribution> measures;
  Certificate certificate;
};

// Builds M_1 ⊇ M_2 ⊇ ... ⊇ M_d from an ambient mixing SFT and k target
// Markov measures and certifies the final stage.
MinimalConstruction construct_minimal_k(const Subshift& ambient, const std::vector<MarkovMeasure>& targets,
                                        const MinimalOptions& options = {});

// Independent re-check of a final stage from its saved form, using only block
// enumeration, block frequencies and ρ. ν̂^j is estimated by the depth-T
// window frequencies pooled over the defining blocks of component j. Lines:
//   verify-syndetic-j    every defining block holds every depth-t block seen
//   verify-marker-j      the marker never occurs in a defining block
//   verify-bridge-s-t    the marker occurs once in the bridge word U^{st}
//   verify-separation-s-t, verify-hausdorff  as in the builder's certificate
Certificate reverify_minimal(const GluedShift& glued, const std::vector<MarkovMeasure>& targets, double epsilon,
                             std::size_t depth, std::size_t truncation = 8);

}  // namespace symdyn
