// leafcomm: command-line driver for the formula, polynomial, protocol, counting,
// generator, correlation and learning modules. Every command prints a JSON report.
// Exit codes: 0 success, 1 failed assertion, 2 invalid input.

#include "leafcomm/counting.hpp"
#include "leafcomm/formula.hpp"
#include "leafcomm/hardness.hpp"
#include "leafcomm/learning.hpp"
#include "leafcomm/polynomial.hpp"
#include "leafcomm/prg.hpp"
#include "leafcomm/protocols.hpp"
#include "leafcomm/suite.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace leafcomm;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex(u64 v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string bit_string(const Bits& b) {
  std::string s;
  for (auto v : b) s += v ? '1' : '0';
  return s;
}

Bits parse_bit_string(const std::string& text) {
  Bits b;
  for (char c : text) {
    if (c == '0' || c == '1')
      b.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw ValidationError("expected a 0/1 string");
  }
  return b;
}

// One report per command; checks that fail turn into exit code 1.
struct Report {
  std::string command;
  json parameters = json::object();
  json result = json::object();
  json checks = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  bool ok() const {
    for (const auto& [k, v] : checks.items())
      if (!v.get<bool>()) return false;
    return true;
  }

  json to_json() const {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {{"command", command},        {"version", library_version()},
            {"parameters", parameters},  {"result", result},
            {"checks", checks},          {"passed", ok()},
            {"timing", {{"finished_at", buf}, {"wall_ms", ms}}}};
  }
};

struct Common {
  std::string out;
  bool pretty = false;
};

struct FormulaInput {
  std::string text, file;
  int n = 0;

  void add(CLI::App* app, const std::string& what = "formula") {
    app->add_option(what == "gate" ? "--gate" : "--formula", text, what + " text, e.g. \"(and (xor 1 2) (var 3))\"");
    app->add_option("--file", file, "file holding the " + what + " text");
    app->add_option("--n,--nvars", n, "number of input variables")->required();
  }

  Formula load() const {
    if (text.empty() == file.empty()) throw ValidationError("give exactly one of --formula and --file");
    return parse_formula(text.empty() ? read_file(file) : text, n);
  }

  std::string source() const { return text.empty() ? file : text; }
};

// A truth table from a file: formula text (needs n) or a 0/1 string of length 2^n.
Table load_table(const std::string& path, int n) {
  std::string content = read_file(path);
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '(') {
    if (n <= 0) throw ValidationError("--n is required for formula files");
    return truth_table(parse_formula(content, n));
  }
  Bits b = parse_bit_string(content);
  if (b.empty() || (b.size() & (b.size() - 1)) != 0) throw ValidationError("truth table length must be a power of two");
  return b;
}

Distribution load_distribution(const std::string& path) {
  std::string content = read_file(path);
  std::vector<Rational> w;
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '[') {
    for (const auto& v : nlohmann::json::parse(content))
      w.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump()));
  } else {
    std::string tok;
    std::stringstream ss(content);
    while (ss >> tok) w.push_back(parse_rational(tok));
  }
  return make_distribution(std::move(w));
}

json poly_terms(const MultilinearPoly& p) {
  json t = json::array();
  for (const auto& [mask, c] : p.terms()) t.push_back({{"monomial", hex(mask)}, {"coefficient", to_string(c)}});
  return t;
}

// ---------------------------------------------------------------- commands

void cmd_parse(const FormulaInput& in, Report& rep) {
  Formula f = in.load();
  rep.parameters = {{"n", in.n}, {"input", in.source()}};
  json leaves = json::array();
  for (const auto& g : f.leaves()) leaves.push_back(unparse_gate(g));
  rep.result = {{"n", f.num_vars()}, {"size", f.size()}, {"formula", unparse(f)}, {"leaves", leaves}};
  if (f.num_vars() <= 24) rep.result["satisfying_assignments"] = to_string(count_sat_bruteforce(f));
}

void cmd_approx(const FormulaInput& in, const std::string& eps_text, bool terms, bool verify, Report& rep) {
  Formula f = in.load();
  Rational eps = parse_rational(eps_text);
  if (eps <= 0 || eps >= Rational(1, 2)) throw ValidationError("eps must be in (0, 1/2)");
  rep.parameters = {{"n", in.n}, {"input", in.source()}, {"eps", to_string(eps)}};
  ComposedApprox ca = build_approx(f, eps);
  rep.result = {{"size", f.size()},
                {"pieces", ca.pieces.size()},
                {"nominal_degree", ca.nominal_degree},
                {"error_bound", to_string(ca.error_bound)},
                {"lp_solves", ca.stats.lp_solves},
                {"degree_constant", degree_constant(ca.nominal_degree, f.size(), eps)}};
  if (f.size() <= 20) {
    MultilinearPoly p = ca.expand(20);
    rep.result["degree"] = p.degree();
    rep.result["support"] = p.support_size();
    if (terms) rep.result["terms"] = poly_terms(p);
  }
  if (verify) {
    if (f.num_vars() > 24) throw ValidationError("--verify enumerates inputs; n must be at most 24");
    Rational err = ca.max_input_error(f);
    rep.result["max_error"] = to_string(err);
    rep.checks["max_error_within_eps"] = err <= eps;
  }
}

void cmd_protocol(const FormulaInput& in, const std::string& delta_text, bool enumerate, Report& rep) {
  Formula f = in.load();
  if (f.size() != 1) throw ValidationError("protocol expects a single leaf gate");
  Rational delta = parse_rational(delta_text);
  rep.parameters = {{"n", in.n}, {"gate", in.source()}, {"delta", to_string(delta)}};
  const LeafGate& gate = f.leaves()[0];
  RandomizedPtr rp = protocol_for_gate(gate, delta);
  rep.result = {{"protocol", rp->name()},
                {"parties", rp->layout().parties()},
                {"cost", rp->cost()},
                {"randomness_bits", rp->randomness_bits()},
                {"error_bound", to_string(rp->error_bound())}};
  if (rp->randomness_bits() == 0) {
    ProtocolPtr p = rp->sample({});
    if (f.num_vars() <= 16) {
      auto rects = enumerate_leaves(*p);
      bool mono = true;
      for (const Rectangle& r : rects) {
        // every input of the rectangle must evaluate to its output
        std::vector<std::size_t> idx(r.sides.size(), 0);
        while (mono) {
          u64 x = 0;
          for (std::size_t j = 0; j < r.sides.size(); ++j)
            x |= r.sides[j][idx[j]] << p->layout().offsets[j];
          mono = gate.eval(x) == r.output;
          std::size_t j = 0;
          while (j < idx.size() && ++idx[j] == r.sides[j].size()) idx[j++] = 0;
          if (j == idx.size()) break;
        }
      }
      rep.result["rectangles"] = rects.size();
      if (enumerate) {
        json list = json::array();
        for (const Rectangle& r : rects) {
          json sides = json::array();
          for (const auto& side : r.sides) {
            json vals = json::array();
            for (u64 v : side) vals.push_back(hex(v));
            sides.push_back(vals);
          }
          list.push_back({{"sides", sides}, {"output", r.output}});
        }
        rep.result["leaves"] = list;
      }
      rep.checks["rectangles_monochromatic"] = mono;
    }
  } else if (rp->randomness_bits() <= 20 && f.num_vars() <= 10) {
    Rational worst = 0;
    for (u64 x = 0; x < (u64{1} << f.num_vars()); ++x)
      worst = std::max(worst, exact_error_at(*rp, [&](u64 y) { return gate.eval(y); }, x));
    rep.result["max_exact_error"] = to_string(worst);
    rep.checks["error_within_bound"] = worst <= rp->error_bound();
  }
}

struct SatArgs {
  std::string mode = "fast", delta = "1/1024", backend = "sparse", terms = "pruned";
  int nprime = 0;
  double confidence = 0.99;
  u64 seed = 0;
  bool check = false;
};

void cmd_sat(const FormulaInput& in, const SatArgs& a, Report& rep) {
  Formula f = in.load();
  Rational delta = parse_rational(a.delta);
  LeafDevice d = make_device(f, delta);
  int n = f.num_vars();
  int nprime = a.nprime > 0 ? a.nprime : std::max(1, std::min(n % 2 ? 1 : 2, n - 2));
  rep.parameters = {{"n", n}, {"input", in.source()}, {"mode", a.mode}, {"delta", to_string(delta)}};
  auto put_count = [&](const BigInt& c) {
    if (c.fits_ulong_p())
      rep.result["count"] = c.get_ui();
    else
      rep.result["count"] = to_string(c);
  };
  if (a.mode == "brute") {
    put_count(count_sat_bruteforce(d));
    return;
  }
  rep.parameters["nprime"] = nprime;
  if (a.mode == "fast") {
    FastCountOptions o;
    o.nprime = nprime;
    if (a.backend == "dense")
      o.backend = MatmulBackend::Dense;
    else if (a.backend != "sparse")
      throw ValidationError("backend must be sparse or dense");
    if (a.terms == "full")
      o.term_mode = TermMode::Full;
    else if (a.terms != "pruned")
      throw ValidationError("terms must be pruned or full");
    rep.parameters["backend"] = a.backend;
    rep.parameters["terms"] = a.terms;
    FastCountResult r = count_sat_fast(d, o);
    put_count(r.count);
    rep.result["terms"] = r.terms;
    rep.result["candidates"] = r.candidates;
    rep.result["degree"] = r.degree;
    rep.result["nominal_degree"] = r.nominal_degree;
    rep.result["support"] = r.support;
    rep.result["approx_eps"] = to_string(r.approx_eps);
    rep.result["max_gap"] = to_string(r.max_gap);
    rep.checks["rounding_gap_below_one_third"] = r.max_gap <= Rational(1, 3);
    if (a.check) rep.checks["matches_bruteforce"] = r.count == count_sat_bruteforce(d);
  } else if (a.mode == "randomized" || a.mode == "rand") {
    rep.parameters["confidence"] = a.confidence;
    rep.parameters["seed"] = a.seed;
    RandomizedCountResult r = count_sat_randomized(d, nprime, a.confidence, a.seed);
    put_count(r.count);
    rep.result["repetitions"] = r.repetitions;
    rep.result["eps_prime"] = to_string(r.eps_prime);
    rep.result["run_failure"] = to_string(r.run_failure);
    rep.result["leaf_repetitions"] = r.leaf_reps;
    rep.result["terms"] = r.terms;
    if (a.check) rep.checks["matches_bruteforce"] = r.count == count_sat_bruteforce(d);
  } else {
    throw ValidationError("mode must be brute, fast or randomized");
  }
}

struct PrgArgs {
  std::string generator = "small_bias", delta = "1/8", backend = "toeplitz_hash", seed_bits, model, eps = "1/4";
  int n = 0, ell = 0, k = 2, dprime = 1, m = 0, t = 0, s = 1, halfspaces = 0;
  double R = 1, c = 1;
  std::vector<int> hash_bits;
  FormulaInput fool;
  u64 samples = 1000000, seed = 0;
};

Generator build_generator(const PrgArgs& a, json& params) {
  params["generator"] = a.generator;
  if (a.generator == "small_bias" || a.generator == "smallbias") {
    params["n"] = a.n;
    if (a.ell > 0) {
      params["ell"] = a.ell;
      return small_bias_generator_ell(a.n, a.ell);
    }
    params["delta"] = to_string(parse_rational(a.delta));
    return small_bias_generator(a.n, parse_rational(a.delta));
  }
  if (a.generator == "inw") {
    ExtractorBackend be = parse_extractor_backend(a.backend);
    params["n"] = a.n;
    params["k"] = a.k;
    params["dprime"] = a.dprime;
    params["backend"] = extractor_backend_name(be);
    if (!a.hash_bits.empty()) {
      params["hash_bits"] = a.hash_bits;
      return inw_generator(inw_config_with_hash_bits(a.n, a.k, a.dprime, a.hash_bits, be));
    }
    params["delta"] = to_string(parse_rational(a.delta));
    return inw_generator(inw_config(a.n, a.k, a.dprime, parse_rational(a.delta), be));
  }
  if (a.generator == "gip") {
    params["m"] = a.m;
    params["t"] = a.t;
    params["k"] = a.k;
    return gip_stretch_generator(a.m, a.t, a.k);
  }
  throw ValidationError("generator must be small_bias, inw or gip");
}

void cmd_prg(const PrgArgs& a, Report& rep) {
  if (!a.model.empty()) {
    SeedLengthParams p;
    p.n = a.n;
    p.s = a.s;
    p.k = a.k;
    p.R = a.R;
    p.halfspaces = a.halfspaces;
    p.eps = parse_rational(a.eps);
    p.c = a.c;
    SeedModel model = parse_seed_model(a.model);
    rep.parameters = {{"model", seed_model_name(model)}, {"n", p.n}, {"s", p.s}, {"k", p.k}, {"R", p.R},
                      {"halfspaces", p.halfspaces}, {"eps", to_string(p.eps)}, {"c", p.c}};
    SeedLengthReport r = seed_length_report(model, p);
    rep.result = {{"theoretical", r.theoretical}, {"expression", r.expression}, {"label", "up to constants"}};
    rep.result["implemented"] = r.implemented ? json(*r.implemented) : json(nullptr);
    rep.result["note"] = r.note;
    return;
  }
  Generator g = build_generator(a, rep.parameters);
  rep.result = {{"kind", generator_kind_name(g.kind)}, {"seed_len", g.seed_len}, {"out_len", g.out_len}};
  if (g.kind == GeneratorKind::SmallBias) {
    rep.result["ell"] = g.ell;
    rep.result["bias_bound"] = to_string(g.delta);
  }
  if (g.inw) {
    rep.result["levels"] = g.inw->t;
    rep.result["delta_prime"] = to_string(g.inw->delta_prime);
    rep.result["delta"] = to_string(g.inw->delta);
    json levels = json::array();
    for (const auto& e : g.inw->levels)
      levels.push_back({{"r", e.r}, {"hash_bits", e.hash_bits}, {"seed_bits", e.seed_bits()},
                        {"error_bound", to_string(e.error_bound())}});
    rep.result["extractors"] = levels;
  }
  if (!a.seed_bits.empty()) {
    Bits seed = parse_bit_string(a.seed_bits);
    rep.parameters["seed_bits"] = a.seed_bits;
    rep.result["output"] = bit_string(g.expand(seed));
  }
  if (!a.fool.text.empty() || !a.fool.file.empty()) {
    FormulaInput fi = a.fool;
    fi.n = g.out_len;
    Formula f = fi.load();
    rep.parameters["fool"] = fi.source();
    rep.parameters["sample_seed"] = a.seed;
    FoolingGap gap = fooling_gap(g, [&](u64 x) { return f.eval(x); }, a.seed, a.samples);
    rep.result["exact"] = gap.exact;
    if (gap.exact) {
      rep.result["gap"] = to_string(gap.gap);
      rep.result["p_generator"] = to_string(gap.p_generator);
      rep.result["p_uniform"] = to_string(gap.p_uniform);
    } else {
      rep.result["gap_estimate"] = gap.estimate;
      rep.result["half_width_99"] = gap.half_width;
      rep.result["samples"] = gap.samples;
    }
  }
}

void cmd_corr(const std::string& f_path, const std::string& g_path, const std::string& d_path, int n, Report& rep) {
  Table f = load_table(f_path, n);
  int bits = std::countr_zero(f.size());
  Distribution d = d_path.empty() ? uniform_distribution(bits) : load_distribution(d_path);
  rep.parameters = {{"f", f_path}, {"distribution", d_path.empty() ? "uniform" : d_path}};
  rep.result["n"] = bits;
  if (!g_path.empty()) {
    Table g = load_table(g_path, n);
    rep.parameters["g"] = g_path;
    CorrelationReport c = correlation(f, g, d);
    rep.result["correlation"] = to_string(c.correlation);
    rep.result["agreement"] = to_string(c.agreement);
    rep.checks["correlation_is_twice_agreement_minus_one"] = c.correlation == 2 * c.agreement - 1;
  }
  if (bits <= 20) {
    ParityFit best = best_parity_correlation(f, d);
    rep.result["best_parity"] = {{"mask", hex(best.mask)}, {"negated", best.negated},
                                 {"correlation", to_string(best.correlation)}};
  }
}

void cmd_lbcalc(double n, int k, const std::string& eps_text, double R, Report& rep) {
  Rational eps = parse_rational(eps_text);
  rep.parameters = {{"n", n}, {"k", k}, {"eps", to_string(eps)}, {"R", R}};
  rep.result = {{"bound", lb_size_bound(n, k, eps, R)},
                {"expression", "n^2 / (k^2 16^k (R + log2 n)^2 log2(1/eps)^2)"},
                {"label", "up to constants"}};
}

struct LearnArgs {
  FormulaInput target;
  int s = 0, max_rounds = 256;
  std::string eps = "1/10", delta = "1/10";
  u64 seed = 0;
};

void cmd_learn(const LearnArgs& a, Report& rep) {
  Formula f = a.target.load();
  Rational eps = parse_rational(a.eps), delta = parse_rational(a.delta);
  int s = a.s > 0 ? a.s : f.size();
  rep.parameters = {{"n", a.target.n}, {"target", a.target.source()}, {"s", s}, {"eps", to_string(eps)},
                    {"delta", to_string(delta)}, {"seed", a.seed}, {"max_rounds", a.max_rounds}};
  ExampleOracle o(a.target.n, [&f](u64 x) { return f.eval(x); }, a.seed);
  BoostReport r = pac_learn_formula_xor(o, s, eps, delta, a.max_rounds);
  json h = json::array();
  if (r.hypothesis.is_vote) {
    for (const auto& v : r.hypothesis.votes)
      h.push_back({{"mask", hex(v.h.mask)}, {"sign", v.h.negated ? "-" : "+"}, {"weight", to_string(v.weight)}});
  } else {
    h.push_back({{"mask", hex(r.hypothesis.single.mask)}, {"sign", r.hypothesis.single.negated ? "-" : "+"},
                 {"weight", "1"}});
  }
  rep.result = {{"hypothesis", h},
                {"rounds", r.rounds.size()},
                {"train_size", r.train_size},
                {"holdout_size", r.holdout_size},
                {"training_error", to_string(r.training_error)},
                {"holdout_error", to_string(r.holdout_error)},
                {"min_weak_advantage", r.min_advantage},
                {"advantage_floor", formula_xor_advantage_floor(s)},
                {"floor_violations", r.floor_violations}};
  if (a.target.n <= 20)
    rep.result["exact_error"] = to_string(uniform_error(r.hypothesis, a.target.n, [&f](u64 x) { return f.eval(x); }));
  rep.checks["holdout_error_within_eps"] = r.holdout_error <= eps;
}

void emit(const json& j, const Common& c) {
  std::string text = c.pretty ? j.dump(2) : j.dump();
  if (c.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(c.out);
    if (!out) throw ValidationError("cannot write '" + c.out + "'");
    out << text << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formulas over leaf gates: approximation, counting, generators, correlation and learning."};
  app.set_config("--config", "", "read options from a TOML or INI file");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  Common common;
  app.add_option("--out", common.out, "write the JSON report to a file");
  app.add_flag("--pretty", common.pretty, "indent the JSON report");
  bool json_flag = false;
  app.add_flag("--json", json_flag, "JSON output (always on)");

  FormulaInput parse_in, approx_in, proto_in, sat_in;
  auto* parse = app.add_subcommand("parse", "parse a formula and report its shape");
  parse_in.add(parse);

  auto* approx = app.add_subcommand("approx", "build an approximating polynomial");
  approx_in.add(approx);
  std::string approx_eps = "1/3";
  bool approx_terms = false;
  approx->add_option("--eps", approx_eps, "pointwise error, A/B");
  approx->add_flag("--terms", approx_terms, "list the expanded polynomial's terms");
  bool approx_verify = false;
  approx->add_flag("--verify", approx_verify, "check the pointwise error on every input");

  auto* proto = app.add_subcommand("protocol", "describe the protocol of a single leaf gate");
  proto_in.add(proto, "gate");
  std::string proto_delta = "1/1024";
  proto->add_option("--delta", proto_delta, "error of randomized protocols, A/B");
  bool proto_enumerate = false;
  proto->add_flag("--enumerate", proto_enumerate, "list the leaf rectangles of deterministic protocols");

  auto* sat = app.add_subcommand("sat", "count satisfying assignments");
  sat_in.add(sat);
  SatArgs sat_args;
  sat->add_option("--mode", sat_args.mode, "brute, fast or randomized (rand)");
  sat->add_option("--nprime", sat_args.nprime, "restriction variables (default 1 for odd n, else 2)");
  sat->add_option("--delta", sat_args.delta, "leaf protocol error for LTF gates");
  sat->add_option("--backend", sat_args.backend, "sparse or dense matrix product");
  sat->add_option("--terms", sat_args.terms, "pruned or full term enumeration");
  sat->add_option("--confidence", sat_args.confidence, "randomized mode confidence");
  sat->add_option("--seed", sat_args.seed, "randomized mode seed");
  sat->add_flag("--check", sat_args.check, "compare with brute force");

  auto* prg = app.add_subcommand("prg", "build a generator, expand a seed, measure a fooling gap or report seed lengths");
  PrgArgs prg_args;
  prg->add_option("--generator,--kind", prg_args.generator, "small_bias (smallbias), inw or gip");
  prg->add_option("--n", prg_args.n, "output length (small_bias, inw) or input length (seed-length report)");
  prg->add_option("--delta", prg_args.delta, "target error, A/B");
  prg->add_option("--ell", prg_args.ell, "small-bias field degree (overrides --delta)");
  prg->add_option("--k", prg_args.k, "parties (inw, gip, nih, nof)");
  prg->add_option("--dprime", prg_args.dprime, "communication cost fooled by inw");
  prg->add_option("--backend", prg_args.backend, "inw extractor: toeplitz_hash or field_hash");
  prg->add_option("--hash-bits", prg_args.hash_bits, "explicit inw hash lengths per level");
  prg->add_option("--m", prg_args.m, "gip block length");
  prg->add_option("--t", prg_args.t, "gip block count");
  prg->add_option("--seed-bits", prg_args.seed_bits, "expand this 0/1 seed");
  prg->add_option("--fool", prg_args.fool.text, "formula over the output bits to measure the gap against");
  prg->add_option("--fool-file,--test-against", prg_args.fool.file, "file holding that formula");
  prg->add_option("--samples", prg_args.samples, "samples per side when the gap is not exhaustive");
  prg->add_option("--seed", prg_args.seed, "sampling seed");
  prg->add_option("--model", prg_args.model, "seed-length report: formula_xor, formula_ltf, formula_sym, formula_nih, formula_nof");
  prg->add_option("--s", prg_args.s, "formula size");
  prg->add_option("--R", prg_args.R, "leaf protocol cost");
  prg->add_option("--halfspaces", prg_args.halfspaces, "number of halfspaces (formula_ltf)");
  prg->add_option("--eps", prg_args.eps, "fooling error, A/B");
  prg->add_option("--c", prg_args.c, "constant in the closed forms");

  auto* corr = app.add_subcommand("corr", "correlation of two functions and the best parity of the first");
  std::string corr_f, corr_g, corr_d;
  int corr_n = 0;
  corr->add_option("--f", corr_f, "truth table (0/1 string) or formula file")->required();
  corr->add_option("--g", corr_g, "second function");
  corr->add_option("--dist", corr_d, "weights: JSON array or whitespace-separated A/B values");
  corr->add_option("--n", corr_n, "variables for formula files");

  auto* lb = app.add_subcommand("lbcalc", "size lower bound, constants set to 1");
  double lb_n = 0, lb_R = 1;
  int lb_k = 2;
  std::string lb_eps = "1/4";
  lb->add_option("--n", lb_n, "input length")->required();
  lb->add_option("--k", lb_k, "parties");
  lb->add_option("--eps", lb_eps, "correlation, A/B");
  lb->add_option("--R", lb_R, "leaf protocol cost");

  auto* learn = app.add_subcommand("learn", "PAC-learn a formula over XOR leaves from examples");
  LearnArgs learn_args;
  learn->add_option("--target", learn_args.target.file, "file holding the target formula")->required();
  learn->add_option("--n", learn_args.target.n, "number of input variables")->required();
  learn->add_option("--s", learn_args.s, "size used for the advantage floor (default: target size)");
  learn->add_option("--eps", learn_args.eps, "accuracy, A/B");
  learn->add_option("--delta", learn_args.delta, "confidence, A/B");
  learn->add_option("--seed", learn_args.seed, "example oracle seed");
  learn->add_option("--max-rounds", learn_args.max_rounds, "boosting round budget");

  auto* suite = app.add_subcommand("suite", "run the regression suite");
  SuiteOptions suite_opts;
  suite->add_option("--seed", suite_opts.seed, "root seed");
  suite->add_option("--criteria", suite_opts.criteria, "criteria to run (default: all)")->delimiter(',');
  suite->add_option("--fixtures", suite_opts.fixture_dir, "directory with calculator_rows.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (suite->parsed()) {
      SuiteReport rep = run_suite(suite_opts);
      for (const auto& r : rep.results) std::cerr << criterion_line(r) << "\n";
      emit(rep.to_json(suite_opts), common);
      return rep.passed() ? 0 : 1;
    }
    Report rep;
    if (parse->parsed()) {
      rep.command = "parse";
      cmd_parse(parse_in, rep);
    } else if (approx->parsed()) {
      rep.command = "approx";
      cmd_approx(approx_in, approx_eps, approx_terms, approx_verify, rep);
    } else if (proto->parsed()) {
      rep.command = "protocol";
      cmd_protocol(proto_in, proto_delta, proto_enumerate, rep);
    } else if (sat->parsed()) {
      rep.command = "sat";
      cmd_sat(sat_in, sat_args, rep);
    } else if (prg->parsed()) {
      rep.command = "prg";
      cmd_prg(prg_args, rep);
    } else if (corr->parsed()) {
      rep.command = "corr";
      cmd_corr(corr_f, corr_g, corr_d, corr_n, rep);
    } else if (lb->parsed()) {
      rep.command = "lbcalc";
      cmd_lbcalc(lb_n, lb_k, lb_eps, lb_R, rep);
    } else if (learn->parsed()) {
      rep.command = "learn";
      cmd_learn(learn_args, rep);
    }
    emit(rep.to_json(), common);
    return rep.ok() ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
