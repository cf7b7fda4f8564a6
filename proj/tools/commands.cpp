#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "symdyn/constructions.hpp"
#include "symdyn/densities.hpp"
#include "symdyn/error.hpp"
#include "symdyn/measures.hpp"
#include "symdyn/omega.hpp"
#include "symdyn/sft_format.hpp"
#include "symdyn/shadowing.hpp"
#include "symdyn/stream.hpp"
#include "symdyn/subshift.hpp"
#include "symdyn/synthesizers.hpp"

namespace symdyn::cli {

namespace {

namespace fs = std::filesystem;
constexpr const char* kModule = "cli";

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string count_text(long double v) {
  if (v < 1e18L) return std::to_string(static_cast<unsigned long long>(std::llround(static_cast<double>(v))));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6Lg", v);
  return buf;
}

const char* yes(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<Word>& words) {
  if (words.empty()) return "-";
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w.to_string();
  }
  return out;
}

unsigned workers(unsigned threads) {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Subshift load_shift(const std::string& v) { return parse_subshift_param(StreamSpec{}, v); }
MarkovMeasure load_measure(const std::string& v) { return parse_measure_param(StreamSpec{}, v); }

SymbolStream load_stream(const std::string& path, const std::optional<std::uint64_t>& seed) {
  StreamSpec spec = StreamSpec::load(path);
  if (seed) spec.seed = *seed;
  return SymbolStream(std::move(spec));
}

void require_positive(std::uint64_t v, const char* name) {
  if (v == 0) fail(ErrorCode::parameter, kModule, std::string(name) + " must be positive");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, kModule, "cannot write " + path.string());
  out << text;
}

struct Registry {
  CLI::App& app;
  const unsigned& threads;
  std::vector<std::pair<CLI::App*, std::function<int()>>> actions;

  void add(CLI::App* sub, std::function<int()> fn) { actions.emplace_back(sub, std::move(fn)); }
};

// ---------------------------------------------------------------- symbolic

void entropy_cmd(Registry& r) {
  auto o = std::make_shared<std::tuple<std::string, std::size_t, bool>>();
  auto* sub = r.app.add_subcommand("entropy", "Block count θ_r and log θ_r / r (nats)");
  sub->add_option("--sft", std::get<0>(*o), "SFT file, 'golden' or 'full:<k>'")->required();
  sub->add_option("--depth", std::get<1>(*o), "Block length r")->required()->check(CLI::PositiveNumber);
  sub->add_flag("--spectral", std::get<2>(*o), "Also print log of the Perron root");
  r.add(sub, [o] {
    const auto& [path, depth, spectral] = *o;
    const Subshift s = load_shift(path);
    const auto e = entropy_estimate(s, depth);
    std::cout << "# entropy of " << path << " at depth " << depth << ", nats\n";
    std::cout << "theta " << count_text(e.theta) << "  estimate " << g6(e.estimate) << "\n";
    if (spectral) std::cout << "spectral " << g6(spectral_entropy(s)) << "\n";
    return 0;
  });
}

void blocks_cmd(Registry& r) {
  auto o = std::make_shared<std::tuple<std::string, std::size_t, bool>>();
  auto* sub = r.app.add_subcommand("blocks", "List Bl_r(S) in lexicographic order");
  sub->add_option("--sft", std::get<0>(*o), "SFT file, 'golden' or 'full:<k>'")->required();
  sub->add_option("--length", std::get<1>(*o), "Block length r")->required()->check(CLI::PositiveNumber);
  sub->add_flag("--count", std::get<2>(*o), "Print only the number of blocks");
  r.add(sub, [o, &threads = r.threads] {
    const auto& [path, len, count_only] = *o;
    const Subshift s = load_shift(path);
    if (count_only) {
      std::cout << "theta " << count_text(count_blocks(s, len)) << "\n";
      return 0;
    }
    const auto words = enumerate_blocks(s, len, workers(threads));
    std::cout << "# " << words.size() << " blocks of length " << len << "\n";
    for (const auto& w : words) std::cout << w.to_string() << "\n";
    return 0;
  });
}

void transitions_cmd(Registry& r) {
  auto o = std::make_shared<std::pair<std::string, std::size_t>>();
  auto* sub = r.app.add_subcommand("transitions", "Transitivity, mixing and transition length");
  sub->add_option("--sft", o->first, "SFT file, 'golden' or 'full:<k>'")->required();
  sub->add_option("--cap", o->second, "Path-length search cap, 0 = 4·v^2")->capture_default_str();
  r.add(sub, [o] {
    const auto rep = analyze_transitions(load_shift(o->first), o->second);
    std::cout << "transitive " << yes(rep.transitive) << "  mixing "
              << (rep.undecided_at_cap ? "undecided" : yes(rep.mixing)) << "  transition-length "
              << (rep.transition_length ? std::to_string(*rep.transition_length) : "none") << "  period "
              << rep.period << "  essential-vertices " << rep.essential_vertices << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------- measures

struct RhoOpts {
  std::string mu, nu, stream;
  std::size_t length = 0, truncation = 8;
  std::optional<std::uint64_t> seed;
};

void rho_cmd(Registry& r) {
  auto o = std::make_shared<RhoOpts>();
  auto* sub = r.app.add_subcommand("rho", "Truncated cylinder distance between two laws");
  sub->add_option("--mu", o->mu, "Measure: bernoulli:..., markov:..., parry:<sft> or a markov file");
  sub->add_option("--stream", o->stream, "Use the empirical law of a stream instead of --mu");
  sub->add_option("--length", o->length, "Windows of the stream prefix");
  sub->add_option("--seed", o->seed, "Seed override for the stream");
  sub->add_option("--nu", o->nu, "Second measure")->required();
  sub->add_option("--truncation", o->truncation, "Depth T")->capture_default_str()->check(CLI::PositiveNumber);
  r.add(sub, [o] {
    const MarkovMeasure nu = load_measure(o->nu);
    CylinderDistribution a(nu.states(), 1);
    if (!o->stream.empty()) {
      require_positive(o->length, "--length");
      a = empirical_distribution(load_stream(o->stream, o->seed), o->length, o->truncation);
    } else if (!o->mu.empty()) {
      a = markov_cylinders(load_measure(o->mu), o->truncation);
    } else {
      fail(ErrorCode::parameter, kModule, "give --mu or --stream");
    }
    const auto v = rho_distance(a, markov_cylinders(nu, o->truncation), o->truncation);
    std::cout << "rho " << g6(v.value) << "  tail-bound " << g6(v.error_bound) << "\n";
    return 0;
  });
}

void markov_cmd(Registry& r) {
  auto o = std::make_shared<std::tuple<std::string, std::size_t, std::size_t>>();
  auto* sub = r.app.add_subcommand("markov", "Entropy, stationary law and cylinders of a Markov measure");
  sub->add_option("--measure", std::get<0>(*o), "bernoulli:..., markov:..., parry:<sft> or a markov file")->required();
  sub->add_option("--power", std::get<1>(*o), "Also check h(σ^n) = n·h for this n");
  sub->add_option("--depth", std::get<2>(*o), "Print the cylinder law at this depth");
  r.add(sub, [o] {
    const auto& [text, power, depth] = *o;
    const MarkovMeasure m = load_measure(text);
    std::cout << "# markov measure, entropy in nats\n";
    std::cout << "states " << m.states() << "\n";
    std::cout << "entropy " << g6(markov_entropy(m)) << "\n";
    std::cout << "stationary";
    for (double p : m.stationary()) std::cout << ' ' << g6(p);
    std::cout << "\n";
    if (power > 0) {
      const auto pe = power_entropy_check(m, power);
      std::cout << "power " << power << "  entropy " << g6(pe.entropy) << "  ratio " << g6(pe.ratio) << "\n";
    }
    if (depth > 0) {
      const auto c = markov_cylinders(m, depth);
      for (std::size_t i = 0; i < c.cell_count(); ++i) std::cout << c.word_at(i).to_string() << ' ' << g6(c[i]) << "\n";
    }
    return 0;
  });
}

// ---------------------------------------------------------------- orbits

struct OrbitOpts {
  std::string stream, block, phi;
  std::size_t depth = 1, checkpoints = 20;
  std::uint64_t horizon = 0, window = 0;
  double threshold = kDefaultThreshold;
  std::optional<std::uint64_t> seed;
};

void stream_options(CLI::App* sub, OrbitOpts& o) {
  sub->add_option("--stream", o.stream, "Stream spec file")->required();
  sub->add_option("--horizon", o.horizon, "Horizon N")->required()->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Seed override for sampled stream kinds");
}

void density_cmd(Registry& r) {
  auto o = std::make_shared<OrbitOpts>();
  auto* sub = r.app.add_subcommand("density", "Densities of the visiting set N(x, [P])");
  stream_options(sub, *o);
  sub->add_option("--block", o->block, "Block P")->required();
  sub->add_option("--window", o->window, "Banach window, 0 = default for N")->capture_default_str();
  r.add(sub, [o] {
    const SymbolStream x = load_stream(o->stream, o->seed);
    const Word p = parse_digit_word(o->block, x.alphabet_size(), kModule);
    const auto visits = visit_set(x, p, o->horizon);
    const auto w = o->window ? o->window : default_window(o->horizon);
    const auto rep = density_report(visits, w);
    std::cout << "# N(x,[" << o->block << "]) on [1," << o->horizon << "]\n";
    std::cout << "visits " << visits.size() << "\n";
    std::cout << "upper-density " << g6(rep.d_upper) << "\n";
    std::cout << "lower-density " << g6(rep.d_lower) << "\n";
    std::cout << "banach-upper " << g6(rep.banach_upper) << "\n";
    std::cout << "banach-lower " << g6(rep.banach_lower) << "\n";
    std::cout << "window " << rep.window_length << "\n";
    std::cout << "syndetic-gap " << (rep.syndetic_gap ? std::to_string(*rep.syndetic_gap) : "none") << "\n";
    if (rep.clamped) std::cout << "# banach estimates clamped to keep the density chain ordered\n";
    return 0;
  });
}

std::string recurrence_line(const RecurrenceReport& rec) {
  return std::string("recurrent ") + yes(rec.recurrent) + "  ap " + yes(rec.almost_periodic) + " gap " +
         (rec.gap ? std::to_string(*rec.gap) : "none");
}

void classify_cmd(Registry& r) {
  auto o = std::make_shared<OrbitOpts>();
  auto* sub = r.app.add_subcommand("classify", "Estimated ω-limit sets and the sixteen-case label");
  stream_options(sub, *o);
  sub->add_option("--depth", o->depth, "Cylinder depth t")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--window", o->window, "Banach window, 0 = default for N")->capture_default_str();
  sub->add_option("--threshold", o->threshold, "Positivity threshold θ_pos")->capture_default_str();
  r.add(sub, [o, &threads = r.threads] {
    const SymbolStream x = load_stream(o->stream, o->seed);
    const auto w = o->window ? o->window : default_window(o->horizon);
    const auto prof = omega_profile(x, o->depth, o->horizon, w, o->threshold, workers(threads));
    const auto label = classify_case(prof);
    const auto rec = recurrence_tests(x, o->depth, o->horizon);
    std::cout << "# depth " << o->depth << "  horizon " << o->horizon << "  window " << prof.window << "  threshold "
              << g6(prof.threshold) << "\n";
    std::cout << "banach-lower " << join(prof.banach_lower) << "\n";
    std::cout << "lower-density " << join(prof.d_lower) << "\n";
    std::cout << "upper-density " << join(prof.d_upper) << "\n";
    std::cout << "banach-upper " << join(prof.banach_upper) << "\n";
    std::cout << "limit " << join(prof.limit) << "\n";
    if (prof.clamped) std::cout << "# some banach estimates were clamped\n";
    std::cout << label.name() << "  " << recurrence_line(rec) << "\n";
    return 0;
  });
}

void recurrence_cmd(Registry& r) {
  auto o = std::make_shared<OrbitOpts>();
  auto* sub = r.app.add_subcommand("recurrence", "Recurrence and almost-periodicity tests");
  stream_options(sub, *o);
  sub->add_option("--depth", o->depth, "Cylinder depth t")->capture_default_str()->check(CLI::PositiveNumber);
  r.add(sub, [o] {
    std::cout << recurrence_line(recurrence_tests(load_stream(o->stream, o->seed), o->depth, o->horizon)) << "\n";
    return 0;
  });
}

void birkhoff_cmd(Registry& r) {
  auto o = std::make_shared<OrbitOpts>();
  auto* sub = r.app.add_subcommand("birkhoff", "Birkhoff averages of a locally constant observable");
  stream_options(sub, *o);
  sub->add_option("--phi", o->phi, "indicator:<block> or values:<depth>:<v0>,<v1>,...")->required();
  sub->add_option("--checkpoints", o->checkpoints, "Log-spaced checkpoints up to N")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  r.add(sub, [o] {
    const SymbolStream x = load_stream(o->stream, o->seed);
    const Observable phi = parse_observable_param(x.alphabet_size(), o->phi);
    const auto tr = birkhoff_trace(x, phi, log_checkpoints(o->horizon, o->checkpoints));
    std::cout << "# n  average of " << o->phi << "\n";
    for (std::size_t i = 0; i < tr.checkpoints.size(); ++i)
      std::cout << tr.checkpoints[i] << ' ' << g6(tr.averages[i]) << "\n";
    std::cout << "oscillation " << g6(tr.oscillation) << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------- shadowing and synthesis

void shadow_cmd(Registry& r) {
  auto o = std::make_shared<std::tuple<std::string, std::string, std::size_t>>();
  auto* sub = r.app.add_subcommand("shadow", "Shadow a pseudo-orbit by a true orbit");
  sub->add_option("--sft", std::get<0>(*o), "SFT file, 'golden' or 'full:<k>'")->required();
  sub->add_option("--porbit", std::get<1>(*o), "porbit v1 file")->required();
  sub->add_option("--length", std::get<2>(*o), "Also print this many symbols of the shadowing point");
  r.add(sub, [o] {
    const auto& [sft, path, len] = *o;
    const Subshift s = load_shift(sft);
    const auto text = load_porbit(path);
    const PseudoOrbit po(s, text.depth, text.points);
    const auto check = verify_pseudo_orbit(po);
    if (!check.valid) {
      fail(ErrorCode::parameter, kModule,
           "not a pseudo-orbit: point " + std::to_string(check.first_bad.value_or(0)) + " fails");
    }
    const Shadow sh = shadow(po);
    std::cout << "points " << text.points.size() << "  depth " << text.depth << "\n";
    std::cout << "delta " << g6(po.delta()) << "  epsilon " << g6(sh.epsilon) << "\n";
    std::cout << "determined " << sh.determined.to_string() << "\n";
    std::cout << "verified " << yes(shadows(po, sh.determined.span())) << "\n";
    if (len > 0) std::cout << "point " << sh.point.prefix_word(len).to_string() << "\n";
    return 0;
  });
}

void synthesize_cmd(Registry& r) {
  auto o = std::make_shared<std::tuple<std::string, std::size_t, std::optional<std::uint64_t>, std::string>>();
  auto* sub = r.app.add_subcommand("synthesize", "Print a prefix of a stream spec");
  sub->add_option("--spec", std::get<0>(*o), "Stream spec file")->required();
  sub->add_option("--length", std::get<1>(*o), "Number of symbols")->required()->check(CLI::PositiveNumber);
  sub->add_option("--seed", std::get<2>(*o), "Seed; required when the spec has none and samples");
  sub->add_option("--check", std::get<3>(*o), "Also report admissibility in this subshift");
  r.add(sub, [o] {
    const auto& [path, len, seed, check] = *o;
    const SymbolStream x = load_stream(path, seed);
    const Word w = x.prefix_word(len);
    std::cout << "# " << x.spec().kind << " stream, " << len << " symbols\n";
    std::cout << w.to_string() << "\n";
    if (!check.empty()) {
      const bool ok = load_shift(check).admissible(w);
      std::cout << "admissible " << yes(ok) << "\n";
      if (!ok) return 3;
    }
    return 0;
  });
}

// ---------------------------------------------------------------- constructions

struct MinimalOpts {
  std::string sft, out;
  std::vector<std::string> targets;
  double eta = 0.15, eps = 0.3;
  std::size_t stages = 2, truncation = 8;
  std::uint64_t seed = 0;
};

void construct_cmd(Registry& r) {
  auto o = std::make_shared<MinimalOpts>();
  auto* sub = r.app.add_subcommand("construct-minimal", "Staged minimal subshift with k separated measures");
  sub->add_option("--sft", o->sft, "Ambient mixing SFT")->required();
  sub->add_option("--targets", o->targets, "Target Markov measures, comma separated")->required()->delimiter(',');
  sub->add_option("--eta", o->eta, "Entropy slack η (nats)")->capture_default_str();
  sub->add_option("--eps", o->eps, "Separation ε")->capture_default_str();
  sub->add_option("--stages", o->stages, "Number of stages d")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--seed", o->seed, "Seed recorded with the run")->capture_default_str();
  sub->add_option("--truncation", o->truncation, "ρ truncation depth")->capture_default_str();
  sub->add_option("--out", o->out, "Output directory")->required();
  r.add(sub, [o, &threads = r.threads] {
    const Subshift ambient = load_shift(o->sft);
    std::vector<MarkovMeasure> targets;
    for (const auto& t : o->targets) targets.push_back(load_measure(t));
    MinimalOptions opt;
    opt.epsilon = o->eps;
    opt.eta = o->eta;
    opt.stages = o->stages;
    opt.seed = o->seed;
    opt.rho_truncation = o->truncation;
    opt.threads = workers(threads);
    const auto result = construct_minimal_k(ambient, targets, opt);

    const fs::path out(o->out);
    fs::create_directories(out);
    std::ostringstream manifest;
    manifest << "minimal v1\n"
             << "epsilon " << g6(o->eps) << "\n"
             << "eta " << g6(o->eta) << "\n"
             << "stages " << o->stages << "\n"
             << "truncation " << o->truncation << "\n"
             << "seed " << o->seed << "\n";
    for (const auto& st : result.stages) {
      const std::string dir = "stage" + std::to_string(st.index);
      fs::create_directories(out / dir);
      std::vector<std::string> files;
      for (std::size_t j = 0; j < st.components.size(); ++j) {
        files.push_back("component" + std::to_string(j + 1) + ".sft");
        save_sft(st.components[j].shift, (out / dir / files.back()).string());
      }
      write_file(out / dir / "glued.txt", st.glued.to_text(files));
    }
    const auto& last = result.stages.back();
    manifest << "depth " << last.depth << "\n"
             << "glued stage" << last.index << "/glued.txt\n";
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const std::string name = "target" + std::to_string(j + 1) + ".markov";
      write_file(out / name, targets[j].to_text());
      manifest << "target " << name << "\n";
    }
    write_file(out / "manifest.txt", manifest.str());
    write_file(out / "certificate.txt", result.certificate.to_text());

    std::cout << "# " << targets.size() << " targets, " << o->stages << " stages, entropies in nats\n";
    for (const auto& st : result.stages) {
      std::cout << "# stage " << st.index << "  delta " << g6(st.delta) << "  depth " << st.depth << "  test-length "
                << st.test_length << "  bridge-length " << st.bridge_length << "  defining-length "
                << st.defining_length << "  windows";
      for (const auto& c : st.components) std::cout << ' ' << c.window;
      std::cout << "  marker " << st.glued.marker().to_string() << "\n";
    }
    std::cout << result.certificate.to_text();
    return result.certificate.pass() ? 0 : 3;
  });
}

void certify_cmd(Registry& r) {
  auto o = std::make_shared<std::string>();
  auto* sub = r.app.add_subcommand("certify", "Re-verify a construct-minimal output directory independently");
  sub->add_option("--dir", *o, "Directory written by construct-minimal")->required();
  r.add(sub, [o] {
    const fs::path dir(*o);
    std::ifstream in(dir / "manifest.txt");
    if (!in) fail(ErrorCode::io, kModule, "cannot open " + (dir / "manifest.txt").string());
    std::string line, glued_file;
    double eps = 0;
    std::size_t depth = 0, truncation = 8;
    std::vector<MarkovMeasure> targets;
    std::getline(in, line);
    if (line != "minimal v1") fail(ErrorCode::parse, kModule, "manifest must start with 'minimal v1'");
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string key, value;
      ls >> key >> value;
      if (key == "epsilon") eps = std::stod(value);
      else if (key == "depth") depth = std::stoul(value);
      else if (key == "truncation") truncation = std::stoul(value);
      else if (key == "glued") glued_file = value;
      else if (key == "target") targets.push_back(MarkovMeasure::load((dir / value).string()));
    }
    if (glued_file.empty() || depth == 0 || targets.empty())
      fail(ErrorCode::parse, kModule, "manifest lacks glued, depth or target entries");
    const auto glued = GluedShift::load((dir / glued_file).string());
    const Certificate cert = reverify_minimal(glued, targets, eps, depth, truncation);

    std::size_t recorded = 0, recorded_fail = 0;
    std::ifstream cin_(dir / "certificate.txt");
    while (std::getline(cin_, line)) {
      if (line.empty()) continue;
      ++recorded;
      if (line.size() >= 4 && line.compare(line.size() - 4, 4, "FAIL") == 0) ++recorded_fail;
    }
    std::cout << "# independent re-check at depth " << depth << ", truncation " << truncation << "\n";
    std::cout << cert.to_text();
    std::cout << "recorded-lines " << recorded << "  recorded-fail " << recorded_fail << "\n";
    return cert.pass() && recorded > 0 && recorded_fail == 0 ? 0 : 3;
  });
}

}  // namespace

std::function<int()> register_commands(CLI::App& app, const unsigned& threads) {
  auto reg = std::make_shared<Registry>(Registry{app, threads, {}});
  entropy_cmd(*reg);
  blocks_cmd(*reg);
  transitions_cmd(*reg);
  rho_cmd(*reg);
  markov_cmd(*reg);
  density_cmd(*reg);
  classify_cmd(*reg);
  recurrence_cmd(*reg);
  birkhoff_cmd(*reg);
  shadow_cmd(*reg);
  synthesize_cmd(*reg);
  construct_cmd(*reg);
  certify_cmd(*reg);
  return [reg] {
    for (auto& [sub, fn] : reg->actions) {
      if (sub->parsed()) return fn();
    }
    fail(ErrorCode::parameter, kModule, "no subcommand");
  };
}

}  // namespace symdyn::cli
