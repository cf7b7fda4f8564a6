#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/stream.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn::detail {

// Stream kinds implemented by the synthesizers.
std::vector<std::pair<std::string, StreamKind>> construction_stream_kinds();

// Lexicographically least U of the given length with prefix·U·suffix in the
// language and no occurrence of `pattern` ending inside U·suffix, except at
// the last symbol when `at_end` is set.
std::optional<Word> connect_avoiding(const Subshift& shift, const Word& prefix, const Word& suffix,
                                     std::size_t length, const Word& pattern, bool at_end);

}  // namespace symdyn::detail
