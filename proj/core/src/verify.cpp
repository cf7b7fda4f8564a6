#include <algorithm>
#include <string>

#include "symdyn/constructions.hpp"
#include "symdyn/error.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "verify";

// Depth-T window law pooled over the words, with every word weighted equally.
CylinderDistribution pooled(const std::vector<Word>& words, std::size_t k, std::size_t T) {
  const auto cells = all_words(k, T);
  std::vector<double> freq(cells.size(), 0.0);
  for (const Word& w : words) {
    for (std::size_t c = 0; c < cells.size(); ++c) freq[c] += block_frequency(w, cells[c]).value();
  }
  for (double& f : freq) f /= static_cast<double>(words.size());
  return CylinderDistribution(k, T, std::move(freq));
}
}  // namespace

Certificate reverify_minimal(const GluedShift& glued, const std::vector<MarkovMeasure>& targets, double epsilon,
                             std::size_t depth, std::size_t truncation) {
  const auto& comps = glued.components();
  if (targets.size() != comps.size()) fail(ErrorCode::parameter, kModule, "one target per component");
  const std::size_t k = glued.alphabet_size();
  Certificate cert;
  std::vector<CylinderDistribution> hats;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const auto words = enumerate_blocks(comps[j], comps[j].order());
    if (words.empty()) fail(ErrorCode::empty_language, kModule, "component " + std::to_string(j) + " has no blocks");
    std::vector<Word> seen;
    for (const Word& p : all_words(k, depth)) {
      for (const Word& w : words) {
        if (block_frequency(w, p).num > 0) {
          seen.push_back(p);
          break;
        }
      }
    }
    std::size_t fewest = seen.size();
    std::size_t marker_hits = 0;
    for (const Word& w : words) {
      std::size_t have = 0;
      for (const Word& p : seen) have += block_frequency(w, p).num > 0 ? 1 : 0;
      fewest = std::min(fewest, have);
      if (glued.marker().size() <= w.size()) marker_hits += block_frequency(w, glued.marker()).num;
    }
    const std::string id = std::to_string(j + 1);
    cert.add("verify-syndetic-" + id, static_cast<double>(seen.size()) - 0.5, static_cast<double>(fewest), true);
    cert.add("verify-marker-" + id, 0.5, static_cast<double>(marker_hits), false);
    hats.push_back(pooled(words, k, std::min(truncation, comps[j].order())));
  }
  for (const auto& [key, u] : glued.bridges()) {
    const Word full = glued.bridge_word(key.first, key.second);
    const bool once = block_frequency(full, glued.marker()).num == 1;
    cert.add("verify-bridge-" + std::to_string(key.first + 1) + "-" + std::to_string(key.second + 1), 0.5,
             once ? 1 : 0, true);
  }
  const std::size_t T = std::min_element(hats.begin(), hats.end(), [](const auto& a, const auto& b) {
                          return a.depth() < b.depth();
                        })->depth();
  std::vector<CylinderDistribution> est, tgt;
  for (std::size_t j = 0; j < hats.size(); ++j) {
    est.push_back(hats[j].marginal(T));
    tgt.push_back(markov_cylinders(targets[j], T));
  }
  for (std::size_t s = 0; s < est.size(); ++s) {
    for (std::size_t t = s + 1; t < est.size(); ++t) {
      cert.add("verify-separation-" + std::to_string(s + 1) + "-" + std::to_string(t + 1), epsilon / 3,
               rho_distance(est[s], est[t], T).value, true);
    }
  }
  cert.add("verify-hausdorff", epsilon / 2, hausdorff_rho(MeasureSet(est), MeasureSet(tgt), T), false);
  return cert;
}

}  // namespace symdyn
