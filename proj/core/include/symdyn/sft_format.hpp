#pragma once

#include <iosfwd>
#include <string>

#include "symdyn/subshift.hpp"

namespace symdyn {

// Text form:
//   sft v1
//   alphabet <k>
//   order <N>
//   allowed
//   <one block per line, base-k digits>
//   end
// Version 1 supports alphabets of at most ten symbols.
Subshift parse_sft(std::istream& in);
Subshift load_sft(const std::string& path);
std::string to_sft_text(const Subshift& shift);
void save_sft(const Subshift& shift, const std::string& path);

// Shared by the text parsers: contiguous digits, each < k.
Word parse_digit_word(const std::string& text, std::size_t alphabet_size, const char* module);

}  // namespace symdyn
