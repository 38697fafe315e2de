#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fatoulab/arc_histogram.hpp"
#include "fatoulab/blaschke_baker.hpp"
#include "fatoulab/circle_dynamics.hpp"
#include "fatoulab/covering_models.hpp"
#include "fatoulab/errors.hpp"
#include "fatoulab/harmonic_measure.hpp"
#include "fatoulab/map_zoo.hpp"
#include "fatoulab/parallel.hpp"
#include "fatoulab/renderer.hpp"

namespace fatoulab::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

Error invalid(const std::string& msg) { return Error(ErrorKind::InvalidArgument, msg); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw invalid(fmt::format("not a number: '{}'", s));
  }
  if (used != s.size()) throw invalid(fmt::format("not a number: '{}'", s));
  return v;
}

std::vector<double> numbers(const std::string& s, char sep = ',') {
  std::vector<double> v;
  for (const auto& p : split(s, sep)) v.push_back(to_double(p));
  if (v.empty()) throw invalid(fmt::format("expected numbers, got '{}'", s));
  return v;
}

// "re" or "re,im"
Complex complex_arg(const std::string& s) {
  const auto v = numbers(s);
  if (v.size() > 2) throw invalid(fmt::format("expected re or re,im, got '{}'", s));
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

std::pair<std::string, std::string> kind_and_params(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

/// Outputs of one subcommand and the bookkeeping for its manifest.
struct Context {
  fs::path out_dir;
  std::vector<std::string> recorded;  // argv that reproduces the run
  std::vector<std::string> files;
  std::optional<std::uint64_t> seed;
  json result;

  std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
    if (given) {
      seed = *given;
    } else {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      recorded.push_back("--seed");
      recorded.push_back(std::to_string(*seed));
    }
    return *seed;
  }

  void write_file(const std::string& name, const std::string& bytes) {
    const fs::path p = out_dir / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", p.string()));
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", p.string()));
    files.push_back(name);
  }

  // replaces `--flag value` (or --flag=value) in the recorded argv
  void rewrite(const std::string& flag, const std::string& new_flag, const std::string& value) {
    for (std::size_t i = 0; i < recorded.size(); ++i) {
      if (recorded[i] == flag && i + 1 < recorded.size()) {
        recorded[i] = new_flag;
        recorded[i + 1] = value;
        return;
      }
      if (recorded[i].rfind(flag + "=", 0) == 0) {
        recorded[i] = new_flag;
        recorded.insert(recorded.begin() + static_cast<long>(i) + 1, value);
        return;
      }
    }
  }
};

// Maps --------------------------------------------------------------------

zoo::MapSpec plane_map(const std::string& s) {
  if (!s.empty() && s.front() == '{') {
    try {
      return zoo::map_from_json(json::parse(s));
    } catch (const json::exception& e) {
      throw invalid(fmt::format("bad map JSON: {}", e.what()));
    }
  }
  const auto [kind, params] = kind_and_params(s);
  if (kind == "exp_baker") return zoo::MapSpec::exp_baker(to_double(params));
  if (kind == "sine_model") return zoo::MapSpec::sine_model(to_double(params));
  if (kind == "mcmullen") {
    const auto v = numbers(params);
    if (v.size() < 3 || v.size() > 4) throw invalid("mcmullen needs m,l,c_re[,c_im]");
    return zoo::MapSpec::mcmullen(static_cast<int>(v[0]), static_cast<int>(v[1]),
                                  {v[2], v.size() == 4 ? v[3] : 0.0});
  }
  throw invalid(fmt::format("unknown plane map '{}' (exp_baker:A, sine_model:A, mcmullen:m,l,c)", s));
}

circle::CircleMap circle_map(const std::string& s) {
  const auto [kind, params] = kind_and_params(s);
  if (kind == "rotation") return circle::CircleMap::rotation(to_double(params));
  if (kind == "power") {
    const double d = to_double(params);
    if (d != std::floor(d)) throw invalid("power degree must be an integer");
    return circle::CircleMap::power(static_cast<int>(d));
  }
  if (kind == "hyperbolic") {
    const double t = to_double(params);
    if (!(t > -1.0 && t < 1.0) || t == 0.0) throw invalid("hyperbolic needs 0 < |t| < 1");
    return circle::CircleMap::mobius({1.0, t, t, 1.0});
  }
  if (kind == "blaschke") {
    auto product = std::make_shared<const baker::BlaschkeProduct>(
        baker::solve_tau(to_double(params)), baker::BlaschkeProduct::kDefaultCap, 1e-9);
    return circle::CircleMap::blaschke(product);
  }
  if (kind == "factor") return circle::CircleMap::single_zero_factor(complex_arg(params));
  throw invalid(fmt::format(
      "unknown circle map '{}' (rotation:T, power:D, hyperbolic:T, blaschke:A, factor:A)", s));
}

std::vector<circle::CircleMap> circle_sequence(const std::string& s, std::size_t n) {
  const auto [kind, params] = kind_and_params(s);
  std::vector<circle::CircleMap> seq;
  seq.reserve(n);
  if (kind == "pommerenke-summable") {
    // g_k′(0) = 1 − 1/(k + 1)²
    for (std::size_t k = 1; k <= n; ++k) {
      seq.push_back(circle::CircleMap::single_zero_factor(1.0 - 1.0 / static_cast<double>((k + 1) * (k + 1))));
    }
    return seq;
  }
  if (kind == "pommerenke-divergent") {
    const double a = params.empty() ? 0.5 : to_double(params);
    for (std::size_t k = 0; k < n; ++k) seq.push_back(circle::CircleMap::single_zero_factor(a));
    return seq;
  }
  const auto g = circle_map(s);
  for (std::size_t k = 0; k < n; ++k) seq.push_back(g);
  return seq;
}

std::vector<harmonic::Bubble> default_bubbles() {
  std::vector<harmonic::Bubble> b;
  for (int k = 0; k < 5; ++k) b.push_back({std::polar(0.5, kTwoPi * k / 5.0), 0.1});
  return b;
}

std::vector<harmonic::Bubble> bubbles_arg(const std::string& s) {
  std::vector<harmonic::Bubble> out;
  for (const auto& item : split(s, ';')) {
    const auto v = numbers(item);
    if (v.size() != 3) throw invalid(fmt::format("bubble '{}' needs x,y,r", item));
    out.push_back({{v[0], v[1]}, v[2]});
  }
  return out;
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

// Subcommands ---------------------------------------------------------------

struct TauArgs {
  double alpha = 0.0;
  double tol = 1e-12;
};

void cmd_tau(const TauArgs& a, Context& ctx) {
  const auto t = baker::solve_tau(a.alpha, a.tol);
  const auto m = baker::multiplier_check(a.alpha);
  ctx.result = baker::to_json(t);
  ctx.result["multipliers"] = m.to_json();
  ctx.result["multipliers"].erase("tau");
}

struct SemiconjArgs {
  double alpha = 0.0;
  std::size_t samples = 1000;
  double im_max = 3.0;
  std::optional<std::uint64_t> seed;
};

void cmd_semiconj(const SemiconjArgs& a, Context& ctx) {
  const auto r = baker::verify_semiconjugacy(a.alpha, a.samples, ctx.resolve_seed(a.seed), a.im_max);
  ctx.result = r.to_json();
  ctx.result["threshold"] = 1e-12;
  ctx.result["pass"] = r.max_residual < 1e-12;
}

struct BlaschkeArgs {
  double alpha = 0.0;
  std::vector<double> theta;
  double target_err = 1e-12;
  double exclusion = baker::BlaschkeProduct::kDefaultExclusion;
};

void cmd_blaschke(const BlaschkeArgs& a, Context& ctx) {
  const baker::BlaschkeProduct b(baker::solve_tau(a.alpha), baker::BlaschkeProduct::kDefaultCap, a.exclusion);
  json rows = json::array();
  for (double theta : a.theta) {
    const auto e = b.eval(std::polar(1.0, theta), a.target_err);
    rows.push_back({{"theta", theta},
                    {"arg", b.circle_eval(theta, a.target_err)},
                    {"value", {e.value.real(), e.value.imag()}},
                    {"modulus_defect", std::abs(e.value) - 1.0},
                    {"terms", e.terms},
                    {"error_bound", e.error_bound}});
  }
  ctx.result = {{"alpha", a.alpha},
                {"s", b.s()},
                {"derivative_at_zero", b.derivative_at_zero()},
                {"target_err", a.target_err},
                {"exclusion_radius", a.exclusion},
                {"values", rows}};
}

struct HarmonicArgs {
  std::string domain = "annulus";
  std::string method = "wos";
  double R = std::numbers::e;
  std::optional<std::string> base;
  std::optional<std::string> bubbles;
  std::uint64_t walks = 100000;
  std::size_t bins = 64;
  double epsilon = 0.0;
  double support_threshold = 1e-4;
  std::optional<std::uint64_t> seed;
};

void cmd_harmonic(const HarmonicArgs& a, Context& ctx) {
  const bool annulus = a.domain == "annulus";
  if (!annulus && a.domain != "champagne") throw invalid("--domain must be annulus or champagne");
  if (a.method != "wos" && a.method != "pushforward" && a.method != "closed-form") {
    throw invalid("--method must be wos, pushforward or closed-form");
  }
  if (!(a.R > 1.0)) throw invalid("--R must exceed 1");
  if (!annulus && a.method != "wos") {
    throw Error(ErrorKind::Unsupported, fmt::format("{} is only available for the annulus", a.method));
  }
  const Complex base = a.base ? complex_arg(*a.base) : Complex{annulus ? 1.0 : 0.0, 0.0};
  const auto domain = annulus ? harmonic::DomainOracle::annulus(1.0 / a.R, a.R)
                              : harmonic::DomainOracle::champagne(a.bubbles ? bubbles_arg(*a.bubbles)
                                                                             : default_bubbles());
  ctx.result = {{"domain", domain.kind_name()}, {"method", a.method}, {"base", {base.real(), base.imag()}}};
  if (annulus) {
    ctx.result["R"] = a.R;
    ctx.result["closed_form_outer_mass"] = harmonic::annulus_outer_mass(1.0 / a.R, a.R, std::abs(base));
  }
  if (domain.distance(base).distance <= 0.0) {
    throw Error(ErrorKind::BasePointOnBoundary, "base point must lie inside the domain");
  }

  if (a.method == "closed-form") {
    ctx.result["arc_masses"] = harmonic::annulus_arc_masses(1.0 / a.R, a.R, base, a.bins);
    return;
  }
  const std::uint64_t seed = ctx.resolve_seed(a.seed);
  std::vector<ArcHistogram> hists;
  double denominator = static_cast<double>(a.walks);
  if (a.method == "wos") {
    harmonic::WalkConfig cfg;
    cfg.n_bins = a.bins;
    cfg.epsilon_shell = a.epsilon;
    const auto r = harmonic::walk_on_spheres(domain, base, a.walks, seed, cfg);
    const auto support = harmonic::support_test(r, a.support_threshold);
    ctx.result["summary"] = harmonic::summary_json(r);
    ctx.result["mean_steps"] = static_cast<double>(r.total_steps) / static_cast<double>(r.walks);
    ctx.result["support"] = {{"pass", support.pass},
                             {"min_bin_mass", support.min_bin_mass},
                             {"smallest_observed", support.smallest_observed},
                             {"deficient_bins", support.deficient.size()}};
    hists = r.hits;
  } else {
    const auto model = cover::CoveringModel::annulus(a.R);
    const auto r = cover::pushforward_measure(model, a.walks, a.bins, seed, cover::cover_preimage(model, base));
    ctx.result["summary"] = {{"samples", r.n_samples}, {"seed", r.seed}, {"component_masses", r.component_masses}};
    hists = r.hists;
  }
  ctx.result["cell_masses"] = cell_masses(hists, denominator);
  ctx.write_file("harmonic.csv", histogram_csv(hists));
}

struct RadialArgs {
  double R = std::numbers::e;
  std::vector<double> xi;
  std::size_t equispaced = 0;
  int samples = cover::RadialConfig{}.samples;
};

void cmd_radial(const RadialArgs& a, Context& ctx) {
  if (!(a.R > 1.0)) throw invalid("--R must exceed 1");
  std::vector<double> angles = a.xi;
  for (std::size_t j = 0; j < a.equispaced; ++j) angles.push_back(kTwoPi * j / a.equispaced);
  if (angles.empty()) throw Error(ErrorKind::EmptyInput, "give --xi angles or --equispaced N");
  const auto model = cover::CoveringModel::annulus(a.R);
  cover::RadialConfig cfg;
  cfg.samples = a.samples;
  json rows = json::array();
  for (double t : angles) {
    const auto c = cover::radial_classify(model, std::polar(1.0, t), cfg);
    rows.push_back({{"xi", t},
                    {"verdict", cover::to_string(c.verdict)},
                    {"min_boundary_distance", c.min_boundary_distance},
                    {"last_boundary_distance", c.last_boundary_distance},
                    {"samples_used", c.samples_used}});
  }
  ctx.result = {{"R", a.R}, {"points", rows}};
}

struct CircleArgs {
  std::string map;
  std::size_t n = 10000;
  double theta0 = 1.0;
  std::size_t ks_samples = 10000;
  std::optional<std::uint64_t> seed;
};

void cmd_circle(const CircleArgs& a, Context& ctx) {
  const auto g = circle_map(a.map);
  const std::uint64_t seed = ctx.resolve_seed(a.seed);
  std::vector<double> orbit;
  const auto* power = std::get_if<circle::Power>(&g.kind());
  const bool typical = power && power->degree >= 2;
  // floating-point multiplication by d sends every orbit to 0; use the digit shift
  orbit = typical ? circle::power_typical_orbit(power->degree, a.n, seed) : circle::iterate(g, a.theta0, a.n);
  const auto upper = [](double t) { return t > 0.0 && t < kPi ? 1.0 : 0.0; };
  ctx.result = {{"map", g.to_json()},
                {"n", a.n},
                {"orbit", typical ? "typical (base-d digit shift)" : "iterated from theta0"},
                {"discrepancy", circle::discrepancy(orbit)},
                {"birkhoff_cos", circle::birkhoff_average(orbit, [](double t) { return std::cos(t); })},
                {"birkhoff_upper_half", circle::birkhoff_average(orbit, upper)}};
  if (!typical) ctx.result["theta0"] = a.theta0;
  if (g.fixes_origin()) {
    const auto inv = circle::invariance_test(g, a.ks_samples, seed);
    ctx.result["invariance"] = {{"ks", inv.ks},
                                {"critical_1pct", inv.critical_1pct},
                                {"pass", inv.pass},
                                {"n_samples", inv.n_samples},
                                {"redraws", inv.redraws}};
    ctx.result["derivative_at_zero_modulus"] = g.derivative_at_zero_modulus();
  }
  ctx.write_file("orbit.csv", circle::orbit_csv(orbit));
}

struct SpreadArgs {
  std::string map;
  std::vector<double> arc;
  std::size_t n = 1000;
  std::size_t grid = 4096;
};

void cmd_spread(const SpreadArgs& a, Context& ctx) {
  if (a.arc.size() != 2) throw invalid("--arc needs start,length");
  const circle::Arc arc{a.arc[0], a.arc[1]};
  const auto seq = circle_sequence(a.map, a.n);
  const auto rep = circle::arc_spread_sequence(seq, arc, a.grid);
  ctx.result = rep.to_json();
  ctx.result["map"] = a.map;
  const bool origin = std::all_of(seq.begin(), seq.end(), [](const auto& g) { return g.fixes_origin(); });
  if (origin) ctx.result["pommerenke_sum"] = circle::pommerenke_sum(seq);
}

struct RenderArgs {
  std::string map = "exp_baker:0.4";
  std::optional<std::string> config;
  std::optional<std::string> grid_json;
  std::string image = "render.ppm";
  std::optional<std::string> loop;
  bool symmetry = false;
};

void cmd_render(const RenderArgs& a, Context& ctx) {
  const auto map = plane_map(a.map);
  render::GridSpec spec;
  if (a.config && a.grid_json) throw invalid("give at most one of --config and --grid-json");
  if (a.config) {
    std::ifstream in(*a.config);
    if (!in) throw invalid(fmt::format("cannot read config '{}'", *a.config));
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw invalid(fmt::format("bad config '{}': {}", *a.config, e.what()));
    }
    spec = render::grid_from_json(j);
    ctx.rewrite("--config", "--grid-json", render::to_json(spec).dump());
  } else if (a.grid_json) {
    try {
      spec = render::grid_from_json(json::parse(*a.grid_json));
    } catch (const json::exception& e) {
      throw invalid(fmt::format("bad --grid-json: {}", e.what()));
    }
  }
  std::optional<std::vector<double>> loop;
  if (a.loop) {
    loop = numbers(*a.loop);
    if (loop->size() != 3) throw invalid("--loop needs cx,cy,r");
  }
  if (a.image.find('/') != std::string::npos) throw invalid("--image is a file name inside --out-dir");
  spec.validate();
  const auto grid = render::classify_grid(map, spec);
  const auto bytes = render::encode_ppm(grid);
  ctx.write_file(a.image, std::string(bytes.begin(), bytes.end()));
  json counts = json::object();
  for (auto v : {render::Verdict::Attracted, render::Verdict::EscapedToZero, render::Verdict::EscapedToInfinity,
                 render::Verdict::Singular, render::Verdict::Undecided}) {
    counts[render::to_string(v)] = std::count(grid.verdict.begin(), grid.verdict.end(), v);
  }
  ctx.result = {{"map", zoo::to_json(map)},
                {"grid", render::to_json(spec)},
                {"verdict_counts", counts},
                {"ppm_bytes", bytes.size()},
                {"ppm_fnv1a64", fmt::format("{:016x}", fnv1a(bytes))}};
  if (loop) {
    ctx.result["loop"] = render::loop_probe(grid, {(*loop)[0], (*loop)[1]}, (*loop)[2]).to_json();
  }
  if (a.symmetry) {
    const auto c = render::conjugation_symmetry(grid);
    ctx.result["conjugation_symmetry"] = {{"compared", c.compared}, {"mismatched", c.mismatched}};
    if (std::holds_alternative<zoo::ExpBaker>(map.kind())) {
      const auto s = render::inversion_symmetry(map, grid);
      ctx.result["inversion_symmetry"] = {{"compared", s.compared}, {"mismatched", s.mismatched}};
    }
  }
}

// Driver --------------------------------------------------------------------

// Drops the options that never change results, so the recorded argv replays
// anywhere.
std::vector<std::string> strip_run_options(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--threads" || a == "--out-dir") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0 || a.rfind("--out-dir=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

json manifest(const std::string& subcommand, const Context& ctx) {
  json m = {{"tool", "fatoulab"},
            {"versions",
             {{"fatoulab", kVersion},
              {"fmt", FMT_VERSION},
              {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                            NLOHMANN_JSON_VERSION_PATCH)},
              {"compiler", __VERSION__}}},
            {"subcommand", subcommand},
            {"argv", ctx.recorded},
            {"outputs", ctx.files},
            {"result", ctx.result}};
  m["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
  return m;
}

int replay(const std::string& manifest_path, const std::string& out_dir, bool check, std::ostream& out,
           std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw invalid(fmt::format("cannot read manifest '{}'", manifest_path));
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw invalid(fmt::format("bad manifest '{}': {}", manifest_path, e.what()));
  }
  if (!m.contains("argv") || !m.at("argv").is_array()) throw invalid("manifest has no argv");
  auto args = m.at("argv").get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw invalid("manifest records a replay");
  args.push_back("--out-dir");
  args.push_back(out_dir);
  std::ostringstream rerun_out;
  const int code = run(args, rerun_out, err);
  if (code != kOk) return code;
  if (!check) {
    out << rerun_out.str();
    return kOk;
  }
  const fs::path original = fs::path(manifest_path).parent_path();
  json files = json::object();
  bool identical = true;
  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  for (const auto& name : m.at("outputs").get<std::vector<std::string>>()) {
    const bool same = slurp(original / name) == slurp(fs::path(out_dir) / name);
    files[name] = same;
    identical = identical && same;
  }
  const bool manifest_same = slurp(manifest_path) == slurp(fs::path(out_dir) / "manifest.json");
  files["manifest.json"] = manifest_same;
  identical = identical && manifest_same;
  out << json{{"replayed", manifest_path}, {"identical", identical}, {"files", files}}.dump(2) << "\n";
  if (!identical) {
    err << "replay produced different bytes\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computational experiments on inner functions, harmonic measure and Baker's example", "fatoulab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  int threads = 0;
  std::string out_dir = ".";
  app.add_option("--threads", threads, "worker cap (also FATOULAB_THREADS); never changes results")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", out_dir, "directory for manifest.json and data files");

  const auto seed_opt = [](CLI::App* sub, std::optional<std::uint64_t>& seed) {
    sub->add_option("--seed", seed, "master seed (generated and recorded when absent)");
  };

  TauArgs tau;
  auto* s_tau = app.add_subcommand("tau", "solve for tau and compare the three multipliers");
  s_tau->add_option("--alpha", tau.alpha, "alpha in (0, 1/2)")->required();
  s_tau->add_option("--tol", tau.tol)->check(CLI::PositiveNumber);

  SemiconjArgs sc;
  auto* s_sc = app.add_subcommand("verify-semiconj", "max |f(e^{iz}) - e^{iF(z)}| over random z");
  s_sc->add_option("--alpha", sc.alpha)->required();
  s_sc->add_option("--samples", sc.samples)->check(CLI::PositiveNumber);
  s_sc->add_option("--im-max", sc.im_max)->check(CLI::NonNegativeNumber);
  seed_opt(s_sc, sc.seed);

  BlaschkeArgs bl;
  auto* s_bl = app.add_subcommand("blaschke-eval", "boundary values of the Blaschke product");
  s_bl->add_option("--alpha", bl.alpha)->required();
  s_bl->add_option("--theta", bl.theta, "angles, comma separated")->required()->delimiter(',');
  s_bl->add_option("--target-err", bl.target_err)->check(CLI::PositiveNumber);
  s_bl->add_option("--exclusion", bl.exclusion)->check(CLI::PositiveNumber);

  HarmonicArgs hm;
  auto* s_hm = app.add_subcommand("harmonic", "harmonic measure of an annulus or champagne domain");
  s_hm->add_option("--domain", hm.domain, "annulus | champagne");
  s_hm->add_option("--method", hm.method, "wos | pushforward | closed-form");
  s_hm->add_option("--R", hm.R, "annulus A(1/R, R)");
  s_hm->add_option("--base", hm.base, "re,im");
  s_hm->add_option("--bubbles", hm.bubbles, "x,y,r;x,y,r;...");
  s_hm->add_option("--walks", hm.walks)->check(CLI::PositiveNumber);
  s_hm->add_option("--bins", hm.bins)->check(CLI::PositiveNumber);
  s_hm->add_option("--epsilon", hm.epsilon, "WoS shell (default 1e-6 diameter)");
  s_hm->add_option("--support-threshold", hm.support_threshold);
  seed_opt(s_hm, hm.seed);

  RadialArgs rd;
  auto* s_rd = app.add_subcommand("classify-radial", "escaping/bounded/bungee verdicts on A(1/R, R)");
  s_rd->add_option("--R", rd.R);
  s_rd->add_option("--xi", rd.xi, "boundary angles, comma separated")->delimiter(',');
  s_rd->add_option("--equispaced", rd.equispaced, "also test 2 pi j / N, j < N");
  s_rd->add_option("--samples", rd.samples, "radii 1 - 2^-k, k <= samples")->check(CLI::Range(4, 60));

  CircleArgs cs;
  auto* s_cs = app.add_subcommand("circle-stats", "orbit statistics of a circle map");
  s_cs->add_option("--map", cs.map, "rotation:T | power:D | hyperbolic:T | blaschke:A | factor:A")->required();
  s_cs->add_option("--n", cs.n)->check(CLI::PositiveNumber);
  s_cs->add_option("--theta0", cs.theta0);
  s_cs->add_option("--ks-samples", cs.ks_samples)->check(CLI::PositiveNumber);
  seed_opt(s_cs, cs.seed);

  SpreadArgs sp;
  auto* s_sp = app.add_subcommand("spread", "arc spreading under a map or a Pommerenke sequence");
  s_sp->add_option("--map", sp.map, "circle map, pommerenke-divergent[:a] or pommerenke-summable")->required();
  s_sp->add_option("--arc", sp.arc, "start,length")->required()->delimiter(',');
  s_sp->add_option("--n", sp.n, "maximum iterations")->check(CLI::PositiveNumber);
  s_sp->add_option("--grid", sp.grid)->check(CLI::Range(std::size_t{1024}, std::size_t{1} << 24));

  RenderArgs rn;
  auto* s_rn = app.add_subcommand("render", "classify a grid of the dynamical plane and write a PPM");
  s_rn->add_option("--map", rn.map, "exp_baker:A | sine_model:A | mcmullen:m,l,c | JSON");
  s_rn->add_option("--config", rn.config, "grid JSON file");
  s_rn->add_option("--grid-json", rn.grid_json, "grid JSON text");
  s_rn->add_option("--image", rn.image);
  s_rn->add_option("--loop", rn.loop, "cx,cy,r");
  s_rn->add_flag("--symmetry", rn.symmetry, "check z -> conj z and z -> 1/z symmetry");

  std::string manifest_path;
  bool check = false;
  auto* s_rp = app.add_subcommand("replay", "rerun a manifest");
  s_rp->add_option("--manifest", manifest_path)->required();
  s_rp->add_flag("--check", check, "compare outputs byte for byte with the originals");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }
  if (threads > 0) set_worker_count(threads);

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Context ctx;
  ctx.out_dir = out_dir;
  ctx.recorded = strip_run_options(args);
  try {
    if (name == "replay") return replay(manifest_path, out_dir, check, out, err);
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, fmt::format("cannot create '{}': {}", out_dir, ec.message()));
    const std::map<std::string, std::function<void()>> handlers = {
        {"tau", [&] { cmd_tau(tau, ctx); }},
        {"verify-semiconj", [&] { cmd_semiconj(sc, ctx); }},
        {"blaschke-eval", [&] { cmd_blaschke(bl, ctx); }},
        {"harmonic", [&] { cmd_harmonic(hm, ctx); }},
        {"classify-radial", [&] { cmd_radial(rd, ctx); }},
        {"circle-stats", [&] { cmd_circle(cs, ctx); }},
        {"spread", [&] { cmd_spread(sp, ctx); }},
        {"render", [&] { cmd_render(rn, ctx); }},
    };
    handlers.at(name)();
    ctx.write_file("manifest.json", manifest(name, ctx).dump(2) + "\n");
    out << ctx.result.dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    if (is_validation(e.kind())) {
      err << "\n" << sub->help();
      return kInvalid;
    }
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace fatoulab::cli
