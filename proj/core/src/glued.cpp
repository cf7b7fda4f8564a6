#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "symdyn/constructions.hpp"
#include "symdyn/error.hpp"
#include "symdyn/sft_format.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "glued";

using Hash = std::pair<std::uint64_t, std::uint64_t>;

struct HashOf {
  std::size_t operator()(const Hash& h) const noexcept { return h.first ^ (h.second * 0x9e3779b97f4a7c15ULL); }
};

// Two polynomial rolling hashes of every length-r window of `text`.
std::vector<Hash> window_hashes(SymbolSpan text, std::size_t r) {
  std::vector<Hash> out;
  if (text.size() < r || r == 0) return out;
  constexpr std::uint64_t b1 = 1000003, b2 = 0x100000001b3ULL;
  std::uint64_t p1 = 1, p2 = 1;
  for (std::size_t i = 1; i < r; ++i) p1 *= b1, p2 *= b2;
  std::uint64_t h1 = 0, h2 = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i >= r) h1 -= p1 * (text[i - r] + 1u), h2 -= p2 * (text[i - r] + 1u);
    h1 = h1 * b1 + (text[i] + 1u);
    h2 = h2 * b2 + (text[i] + 1u);
    if (i + 1 >= r) out.emplace_back(h1, h2);
  }
  return out;
}

// ok[i]: text[i, i+r) lies in the language of `shift` (assumed essential).
std::vector<bool> component_windows(const Subshift& shift, SymbolSpan text, std::size_t r) {
  std::vector<bool> ok(text.size() >= r ? text.size() - r + 1 : 0, false);
  const std::size_t n = shift.order();
  if (ok.empty()) return ok;
  if (r < n) {
    for (std::size_t i = 0; i < ok.size(); ++i) ok[i] = shift.admissible(text.subspan(i, r));
    return ok;
  }
  // bad order-windows, prefix-summed.
  std::vector<std::size_t> bad(text.size() - n + 2, 0);
  for (std::size_t i = 0; i + n <= text.size(); ++i) bad[i + 1] = bad[i] + (shift.allows(text.subspan(i, n)) ? 0 : 1);
  for (std::size_t i = 0; i < ok.size(); ++i) ok[i] = bad[i + r - n + 1] == bad[i];
  return ok;
}
}  // namespace

GluedShift::GluedShift(std::vector<Subshift> components, std::vector<Word> anchors,
                       std::map<std::pair<std::size_t, std::size_t>, Word> bridges, Word marker,
                       std::size_t length)
    : components_(std::move(components)),
      anchors_(std::move(anchors)),
      bridges_(std::move(bridges)),
      marker_(std::move(marker)),
      length_(length) {
  if (components_.empty()) fail(ErrorCode::parameter, kModule, "no components");
  if (anchors_.size() != components_.size()) fail(ErrorCode::parameter, kModule, "one anchor per component");
  for (const auto& c : components_) {
    if (c.alphabet_size() != components_.front().alphabet_size())
      fail(ErrorCode::parameter, kModule, "components use different alphabets");
  }
  for (std::size_t j = 0; j < anchors_.size(); ++j) {
    if (anchors_[j].size() != length_) fail(ErrorCode::parameter, kModule, "anchor length differs from r");
    if (!components_[j].admissible(anchors_[j])) fail(ErrorCode::parameter, kModule, "anchor outside its component");
  }
  for (const auto& [key, u] : bridges_) {
    if (key.first >= components_.size() || key.second >= components_.size() || key.first == key.second)
      fail(ErrorCode::parameter, kModule, "bridge indices out of range");
    (void)u;
  }
}

Word GluedShift::bridge_word(std::size_t s, std::size_t t) const {
  auto it = bridges_.find({s, t});
  if (it == bridges_.end()) fail(ErrorCode::parameter, kModule, "no bridge between these components");
  return anchors_[s] + it->second + anchors_[t];
}

bool GluedShift::window_allowed(SymbolSpan window) const {
  if (window.size() != length_) fail(ErrorCode::length, kModule, "window length differs from r");
  return admissible(window);
}

bool GluedShift::admissible(SymbolSpan word) const {
  const std::size_t r = std::min(length_, word.size());
  const std::size_t windows = word.size() - r + 1;
  std::vector<bool> ok(windows, false);
  for (const auto& c : components_) {
    const auto part = component_windows(c, word, r);
    for (std::size_t i = 0; i < windows; ++i) ok[i] = ok[i] || part[i];
  }
  if (std::all_of(ok.begin(), ok.end(), [](bool b) { return b; })) return true;
  // Windows of bridge words, compared by a 128-bit hash.
  std::unordered_set<Hash, HashOf> known;
  for (const auto& [key, u] : bridges_) {
    const Word w = bridge_word(key.first, key.second);
    for (const auto& h : window_hashes(w.span(), r)) known.insert(h);
  }
  const auto hs = window_hashes(word, r);
  for (std::size_t i = 0; i < windows; ++i) {
    if (!ok[i] && !known.count(hs[i])) return false;
  }
  return true;
}

std::vector<Word> GluedShift::blocks(std::size_t t) const {
  std::set<Word> out;
  for (const auto& c : components_) {
    for (auto& w : enumerate_blocks(c, t)) out.insert(std::move(w));
  }
  for (const auto& [key, u] : bridges_) {
    const Word w = bridge_word(key.first, key.second);
    for (std::size_t p = 0; p + t <= w.size(); ++p) out.insert(w.slice(p, t));
  }
  return {out.begin(), out.end()};
}

std::string GluedShift::to_text(const std::vector<std::string>& component_files) const {
  if (component_files.size() != components_.size()) fail(ErrorCode::parameter, kModule, "one file per component");
  std::ostringstream out;
  out << "glued v1\n";
  out << "alphabet " << alphabet_size() << "\n";
  out << "length " << length_ << "\n";
  out << "marker " << marker_.to_string() << "\n";
  for (std::size_t j = 0; j < components_.size(); ++j) out << "component " << j << ' ' << component_files[j] << "\n";
  for (std::size_t j = 0; j < anchors_.size(); ++j) out << "anchor " << j << ' ' << anchors_[j].to_string() << "\n";
  for (const auto& [key, u] : bridges_) out << "bridge " << key.first << ' ' << key.second << ' ' << u.to_string() << "\n";
  return out.str();
}

GluedShift GluedShift::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, kModule, "cannot open " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  std::string line;
  std::size_t line_no = 0, k = 0, length = 0;
  Word marker;
  std::map<std::size_t, Subshift> comps;
  std::map<std::size_t, Word> anchors;
  std::map<std::pair<std::size_t, std::size_t>, Word> bridges;
  auto error = [&](const std::string& msg) {
    fail(ErrorCode::parse, kModule, path + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto word = [&](const std::string& text) {
    if (k == 0) error("alphabet must come first");
    return parse_digit_word(text, k, kModule);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (line_no == 1) {
      if (line != "glued v1") error("expected header 'glued v1'");
      continue;
    }
    if (key == "alphabet") {
      ls >> k;
    } else if (key == "length") {
      ls >> length;
    } else if (key == "marker") {
      std::string m;
      ls >> m;
      marker = word(m);
    } else if (key == "component") {
      std::size_t j;
      std::string file;
      if (!(ls >> j >> file)) error("component needs an index and a file");
      comps.emplace(j, load_sft((dir / file).string()));
    } else if (key == "anchor") {
      std::size_t j;
      std::string w;
      if (!(ls >> j >> w)) error("anchor needs an index and a word");
      anchors[j] = word(w);
    } else if (key == "bridge") {
      std::size_t a, b;
      std::string w;
      if (!(ls >> a >> b >> w)) error("bridge needs two indices and a word");
      bridges[{a, b}] = word(w);
    } else {
      error("unknown key '" + key + "'");
    }
  }
  if (comps.empty()) error("no components");
  std::vector<Subshift> cv;
  std::vector<Word> av;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if (!comps.count(j) || !anchors.count(j)) error("components and anchors must be numbered 0.." + std::to_string(comps.size() - 1));
    cv.push_back(comps.at(j));
    av.push_back(anchors.at(j));
  }
  return GluedShift(std::move(cv), std::move(av), std::move(bridges), std::move(marker), length);
}

}  // namespace symdyn
