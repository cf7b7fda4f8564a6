#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "symdyn/measures.hpp"
#include "symdyn/omega.hpp"
#include "symdyn/stream.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

// Point streams assembled from typical words of Markov measures. Every stream
// is admissible in its declared subshift: consecutive pieces are joined by the
// shortest (then lexicographically least) connecting word of that subshift.
// Pieces of length n are δ-typical at depth 2 with δ = 5/√n.

// Typical words of lengths 64, 128, 256, ... of ν.
SymbolStream synthesize_generic(const MarkovMeasure& nu, const Subshift& shift, std::uint64_t seed);

// Stages of length 64·3^s with μ₂-proportion α cycling 0, 1/2, 1, 1/2. Mixed
// stages interleave pieces of at most 1024 symbols. Equal measures give
// synthesize_generic.
SymbolStream synthesize_saturated(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Subshift& shift,
                                  std::uint64_t seed);

// Weight on μ₁ that puts the mixture's φ-integral at a.
double level_proportion(double integral1, double integral2, double a);

// Cycles of a μ₁ piece and a μ₂ piece in length ratio θ : (1−θ), θ from
// level_proportion. `a` must lie strictly between the two integrals.
SymbolStream synthesize_level(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Observable& phi,
                              double a, const Subshift& shift, std::uint64_t seed);

// Alternating μ₁ and μ₂ segments of lengths 64·3^j.
SymbolStream synthesize_irregular(const MarkovMeasure& mu1, const MarkovMeasure& mu2, const Observable& phi,
                                  const Subshift& shift, std::uint64_t seed);

// Shortest (then least) word in the language of `ambient` but not of `inner`,
// extended on the right to a full follower-graph context of `ambient`.
// Throws no_marker when none exists up to `max_length`.
Word marker_word(const Subshift& inner, const Subshift& ambient, std::size_t max_length = 12);

// marker · transition · inner, with the transition chosen so that the marker
// occurs only at position 0. `inner` must be admissible in `lambda`.
// An explicit marker must lie in the language of `ambient` and outside that of
// `lambda`, with length at least the ambient context length.
SymbolStream synthesize_nonrecurrent(const SymbolStream& inner, const Subshift& lambda, const Subshift& ambient,
                                     const std::optional<Word>& marker = std::nullopt);

// base with excursions (approach, marker, return) inserted before base
// positions 4, 4+2·4², 4+2·4²+3·4³, ... (gap_j = 4^j·j).
SymbolStream case2_wrapper(const SymbolStream& base, const Subshift& lambda, const Subshift& ambient,
                           const std::optional<Word>& marker = std::nullopt);

// Positions in `base` at which case2_wrapper inserts excursions, up to `limit`.
std::vector<std::uint64_t> excursion_positions(std::uint64_t limit);

// "indicator:<digits>" or "values:<depth>:<v0>,<v1>,..." (cells in lexicographic order).
Observable parse_observable_param(std::size_t alphabet_size, const std::string& value);

}  // namespace symdyn
