#include "symdyn/shadowing.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "symdyn/error.hpp"
#include "symdyn/sft_format.hpp"

namespace symdyn {

namespace {
constexpr const char* kModule = "shadowing";
}

PseudoOrbit::PseudoOrbit(const Subshift& shift, std::size_t depth, std::vector<Word> points)
    : shift_(&shift), depth_(depth), points_(std::move(points)) {
  if (depth_ < shift.order()) {
    fail(ErrorCode::resolution, kModule,
         "depth " + std::to_string(depth_) + " below the shift order " + std::to_string(shift.order()));
  }
  if (points_.empty()) fail(ErrorCode::parameter, kModule, "pseudo-orbit has no points");
  for (const auto& w : points_) {
    if (w.size() != depth_) fail(ErrorCode::length, kModule, "point '" + w.to_string() + "' does not have the declared depth");
    for (Symbol s : w) {
      if (s >= shift.alphabet_size()) fail(ErrorCode::parameter, kModule, "point symbol outside the alphabet");
    }
  }
}

double PseudoOrbit::delta() const { return std::ldexp(1.0, -static_cast<int>(depth_)); }

PseudoOrbitText parse_porbit(std::istream& in) {
  PseudoOrbitText out;
  std::string line;
  std::size_t line_no = 0;
  int stage = 0;
  auto error = [&](const std::string& msg) {
    fail(ErrorCode::parse, kModule, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto a = line.find_first_not_of(" \t");
    if (a == std::string::npos || line[a] == '#') continue;
    line = line.substr(a, line.find_last_not_of(" \t") - a + 1);
    if (stage == 0) {
      if (line != "porbit v1") error("expected header 'porbit v1'");
      stage = 1;
    } else if (stage == 1) {
      std::istringstream ss(line);
      std::string key;
      long long m = 0;
      if (!(ss >> key >> m) || key != "depth" || m < 1) error("expected 'depth <m>'");
      out.depth = static_cast<std::size_t>(m);
      stage = 2;
    } else if (line == "end") {
      stage = 3;
      break;
    } else {
      Word w = parse_digit_word(line, 10, kModule);
      if (w.size() != out.depth) error("word '" + line + "' does not have length " + std::to_string(out.depth));
      out.points.push_back(std::move(w));
    }
  }
  if (stage != 3) fail(ErrorCode::parse, kModule, "truncated porbit input");
  return out;
}

PseudoOrbitText load_porbit(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, kModule, "cannot open " + path);
  return parse_porbit(in);
}

std::string to_porbit_text(std::size_t depth, const std::vector<Word>& points) {
  std::string out = "porbit v1\ndepth " + std::to_string(depth) + "\n";
  for (const auto& w : points) out += w.to_string() + "\n";
  return out + "end\n";
}

PseudoOrbitCheck verify_pseudo_orbit(const PseudoOrbit& po) {
  const auto& pts = po.points();
  const std::size_t m = po.depth();
  for (std::size_t n = 0; n < pts.size(); ++n) {
    bool ok = po.shift().admissible(pts[n]);
    if (ok && n > 0) ok = spans_equal(pts[n].sub(0, m - 1), pts[n - 1].sub(1, m - 1));
    if (!ok) return {false, n};
  }
  return {};
}

Shadow shadow(const PseudoOrbit& po) {
  const std::size_t m = po.depth();
  if (m < po.shift().order() + 1) {
    fail(ErrorCode::resolution, kModule, "shadowing needs depth m >= order + 1");
  }
  const auto check = verify_pseudo_orbit(po);
  if (!check.valid) fail(ErrorCode::parameter, kModule, "not a pseudo-orbit at index " + std::to_string(*check.first_bad));
  const auto& pts = po.points();
  // y_n = first symbol of x_n, closed off by the whole last point.
  Word fixed;
  for (std::size_t n = 0; n + 1 < pts.size(); ++n) fixed.push_back(pts[n][0]);
  fixed += pts.back();
  if (!po.shift().admissible(fixed)) fail(ErrorCode::internal, kModule, "shadow prefix is not admissible");

  StreamSpec spec;
  spec.kind = "sft-walk";
  spec.params["prefix"] = fixed.to_string();
  spec.params["sft"] = "<inline>";
  Shadow out{sft_walk_stream(po.shift(), fixed, std::move(spec)), std::ldexp(1.0, -static_cast<int>(m - 1)), fixed};
  return out;
}

bool shadows(const PseudoOrbit& po, SymbolSpan y) {
  const auto& pts = po.points();
  const std::size_t m = po.depth();
  if (y.size() < pts.size() + m - 2) return false;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    if (!spans_equal(y.subspan(n, m - 1), pts[n].sub(0, m - 1))) return false;
  }
  return po.shift().admissible(y);
}

}  // namespace symdyn
