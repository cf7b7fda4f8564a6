#include "symdyn/sft_format.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr const char* kModule = "sft-format";

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  std::string next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto a = line.find_first_not_of(" \t");
      if (a == std::string::npos || line[a] == '#') continue;
      const auto b = line.find_last_not_of(" \t");
      return line.substr(a, b - a + 1);
    }
    fail(ErrorCode::parse, kModule, "unexpected end of input after line " + std::to_string(line_no));
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": " + msg);
  }
};

std::size_t keyed_number(LineReader& r, const std::string& key) {
  std::istringstream ss(r.next());
  std::string k;
  long long v = 0;
  std::string rest;
  if (!(ss >> k >> v) || k != key || (ss >> rest) || v < 0) r.error("expected '" + key + " <n>'");
  return static_cast<std::size_t>(v);
}

}  // namespace

Word parse_digit_word(const std::string& text, std::size_t alphabet_size, const char* module) {
  if (text.empty()) fail(ErrorCode::parse, module, "empty word");
  std::vector<Symbol> s;
  s.reserve(text.size());
  for (char c : text) {
    if (c < '0' || c > '9') fail(ErrorCode::parse, module, "non-digit in word '" + text + "'");
    const auto d = static_cast<Symbol>(c - '0');
    if (d >= alphabet_size) {
      fail(ErrorCode::malformed_subshift, module,
           "symbol " + std::to_string(d) + " in '" + text + "' outside alphabet of size " + std::to_string(alphabet_size));
    }
    s.push_back(d);
  }
  return Word(std::move(s));
}

Subshift parse_sft(std::istream& in) {
  LineReader r{in};
  if (r.next() != "sft v1") r.error("expected header 'sft v1'");
  const std::size_t k = keyed_number(r, "alphabet");
  if (k < 2 || k > 10) r.error("alphabet size must be in [2, 10] for sft v1");
  const std::size_t order = keyed_number(r, "order");
  if (order == 0) r.error("order must be >= 1");
  if (r.next() != "allowed") r.error("expected 'allowed'");
  BlockSet::Builder builder(order);
  for (;;) {
    const std::string line = r.next();
    if (line == "end") break;
    const Word w = parse_digit_word(line, k, kModule);
    if (w.size() != order) {
      fail(ErrorCode::malformed_subshift, kModule,
           "line " + std::to_string(r.line_no) + ": block '" + line + "' has length " + std::to_string(w.size()) +
               ", expected " + std::to_string(order));
    }
    builder.add(w);
  }
  std::size_t dups = 0;
  BlockSet blocks = std::move(builder).finish(&dups);
  if (dups > 0) fail(ErrorCode::malformed_subshift, kModule, "duplicate defining block");
  return Subshift(k, std::move(blocks));
}

Subshift load_sft(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, kModule, "cannot open " + path);
  return parse_sft(in);
}

std::string to_sft_text(const Subshift& shift) {
  if (shift.alphabet_size() > 10) {
    fail(ErrorCode::parameter, kModule, "sft v1 cannot encode alphabets larger than 10");
  }
  std::string out = "sft v1\nalphabet " + std::to_string(shift.alphabet_size()) + "\norder " +
                    std::to_string(shift.order()) + "\nallowed\n";
  const auto& blocks = shift.blocks();
  out.reserve(out.size() + blocks.size() * (shift.order() + 1) + 4);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (Symbol s : blocks[i]) out.push_back(static_cast<char>('0' + s));
    out.push_back('\n');
  }
  out += "end\n";
  return out;
}

void save_sft(const Subshift& shift, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, kModule, "cannot write " + path);
  out << to_sft_text(shift);
}

}  // namespace symdyn
