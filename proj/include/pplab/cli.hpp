#pragma once

// Command-line front end: flat key = value configuration (file and flags
// share one key table), subcommand dispatch and reproducible JSON/CSV output.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pplab/arith.hpp"
#include "pplab/certified_real.hpp"
#include "pplab/dioph.hpp"
#include "pplab/error.hpp"
#include "pplab/experiments.hpp"
#include "pplab/exponents.hpp"
#include "pplab/expsum.hpp"
#include "pplab/heath_brown.hpp"
#include "pplab/pseudopoly.hpp"
#include "pplab/rational.hpp"

#ifndef PPLAB_VERSION
#define PPLAB_VERSION "0.0.0"
#endif

namespace pplab {

enum class Subcommand {
  Exponents,
  Primes,
  HbParams,
  Dioph,
  ExpSum,
  SearchMin,
  FitDecay,
  SieveWitness,
  MultipleSearch,
  Claims,
  Case1Demo,
};

struct SubcommandName {
  std::string_view name;
  Subcommand sub;
};

inline constexpr SubcommandName kSubcommands[] = {
    {"exponents", Subcommand::Exponents},
    {"primes", Subcommand::Primes},
    {"hbparams", Subcommand::HbParams},
    {"dioph", Subcommand::Dioph},
    {"expsum", Subcommand::ExpSum},
    {"search-min", Subcommand::SearchMin},
    {"fit-decay", Subcommand::FitDecay},
    {"sieve-witness", Subcommand::SieveWitness},
    {"multiple-search", Subcommand::MultipleSearch},
    {"claims", Subcommand::Claims},
    {"case1-demo", Subcommand::Case1Demo},
};

constexpr std::string_view to_string(Subcommand s) {
  for (const auto& e : kSubcommands) {
    if (e.sub == s) return e.name;
  }
  return "?";
}

enum class ValueKind { Integer, Rational, Real, Poly, Text, IntList, RealList, Switch };

struct KeySpec {
  std::string_view name;
  ValueKind kind;
};

inline constexpr KeySpec kKeys[] = {
    {"k", ValueKind::Integer},          {"theta", ValueKind::Rational},
    {"eps", ValueKind::Rational},       {"limit", ValueKind::Integer},
    {"Y", ValueKind::Integer},          {"c1", ValueKind::Rational},
    {"c2", ValueKind::Rational},        {"c3", ValueKind::Rational},
    {"x", ValueKind::Real},             {"Q", ValueKind::Rational},
    {"claim", ValueKind::Text},         {"samples", ValueKind::Integer},
    {"seed", ValueKind::Integer},       {"f", ValueKind::Poly},
    {"y", ValueKind::Real},             {"y-exp", ValueKind::Rational},
    {"X", ValueKind::IntList},          {"xi", ValueKind::Real},
    {"out", ValueKind::Text},           {"format", ValueKind::Text},
    {"in", ValueKind::Text},            {"threads", ValueKind::Integer},
    {"precision", ValueKind::Integer},  {"cap", ValueKind::Integer},
    {"m", ValueKind::Integer},          {"M", ValueKind::Integer},
    {"N", ValueKind::Integer},          {"values", ValueKind::RealList},
    {"coefficient", ValueKind::Real},   {"strategy", ValueKind::Text},
    {"C", ValueKind::Rational},         {"rho-tilde", ValueKind::Rational},
    {"relax", ValueKind::Switch},       {"primes-only", ValueKind::Switch},
    {"vonmangoldt", ValueKind::Switch}, {"sanity", ValueKind::Switch},
    {"strict", ValueKind::Switch},      {"config", ValueKind::Text},
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Exponents;
  std::string action;  ///< dioph: approx | claims
  std::map<std::string, std::string> values;
  std::set<std::string> switches;
  std::uint64_t seed = 0x5EED;
  unsigned threads = 1;
  Precision precision = kDefaultSumPrecision;
  std::string format;  ///< json | csv; empty picks the subcommand default
  std::string out;     ///< empty writes to stdout

  bool has(const std::string& key) const { return values.count(key) != 0; }
  bool flag(const std::string& key) const { return switches.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) fail(ErrorCode::UnknownFlag, "missing required --" + key);
    return it->second;
  }
  std::string text_or(const std::string& key, const std::string& def) const { return has(key) ? text(key) : def; }
  BigInt integer(const std::string& key) const { return parse_integer(text(key)); }
  BigInt integer_or(const std::string& key, long def) const { return has(key) ? integer(key) : BigInt(def); }
  std::uint64_t u64(const std::string& key) const { return to_u64(integer(key)); }
  std::uint64_t u64_or(const std::string& key, std::uint64_t def) const { return has(key) ? u64(key) : def; }
  Rational rational(const std::string& key) const { return parse_rational(text(key)); }
  Rational rational_or(const std::string& key, const Rational& def) const { return has(key) ? rational(key) : def; }
  CertifiedReal real(const std::string& key) const { return parse_real(text(key)); }
  PseudoPolynomial poly() const { return parse_pseudo(text("f"), !flag("relax")); }

  std::vector<std::uint64_t> u64_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& part : split_list(text(key))) out.push_back(to_u64(parse_integer(part)));
    return out;
  }
  std::vector<double> double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& part : split_list(text(key))) out.push_back(parse_real(part).approx());
    return out;
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
      cur.erase(0, cur.find_first_not_of(" \t"));
      cur.erase(cur.find_last_not_of(" \t") + 1);
      if (!cur.empty()) out.push_back(cur);
    }
    return out;
  }
};

namespace detail {

inline const KeySpec* find_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

inline void validate_value(const KeySpec& k, const std::string& v) {
  switch (k.kind) {
    case ValueKind::Integer: parse_integer(v); break;
    case ValueKind::Rational: parse_rational(v); break;
    case ValueKind::Real: parse_real(v); break;
    case ValueKind::Poly: parse_pseudo(v, false); break;
    case ValueKind::IntList: {
      auto parts = RunConfig::split_list(v);
      if (parts.empty()) fail(ErrorCode::MalformedNumber, "empty list for --" + std::string(k.name));
      for (const auto& p : parts) parse_integer(p);
      break;
    }
    case ValueKind::RealList: {
      auto parts = RunConfig::split_list(v);
      if (parts.empty()) fail(ErrorCode::MalformedNumber, "empty list for --" + std::string(k.name));
      for (const auto& p : parts) parse_real(p);
      break;
    }
    case ValueKind::Text:
    case ValueKind::Switch: break;
  }
}

inline void assign(RunConfig& cfg, const std::string& key, const std::string& value, bool from_switch) {
  const KeySpec* spec = find_key(key);
  if (!spec) fail(ErrorCode::UnknownFlag, "unknown key '" + key + "'");
  if (spec->kind == ValueKind::Switch) {
    bool on = true;
    if (!from_switch) {
      if (value == "true" || value == "1" || value == "yes") {
        on = true;
      } else if (value == "false" || value == "0" || value == "no") {
        on = false;
      } else {
        fail(ErrorCode::MalformedNumber, "switch '" + key + "' expects true or false");
      }
    }
    if (on) {
      cfg.switches.insert(key);
    } else {
      cfg.switches.erase(key);
    }
    return;
  }
  validate_value(*spec, value);
  cfg.values[key] = value;
}

inline Subcommand parse_subcommand(std::string_view s) {
  for (const auto& e : kSubcommands) {
    if (e.name == s) return e.sub;
  }
  fail(ErrorCode::UnknownFlag, "unknown subcommand '" + std::string(s) + "'");
}

}  // namespace detail

/// Builds a validated config. The optional file text is flat key = value
/// lines ('#' starts a comment; `subcommand` and `action` are allowed keys);
/// command-line flags override file values.
inline RunConfig parse_config(const std::vector<std::string>& args,
                              const std::optional<std::string>& file_text = std::nullopt) {
  RunConfig cfg;
  std::optional<std::string> sub;
  if (file_text) {
    std::istringstream in(*file_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string t = detail::trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        fail(ErrorCode::MalformedNumber, "config line " + std::to_string(lineno) + " has no '='");
      }
      const std::string key = detail::trim(std::string_view(t).substr(0, eq));
      const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
      if (key == "subcommand") {
        sub = value;
      } else if (key == "action") {
        cfg.action = value;
      } else {
        detail::assign(cfg, key, value, false);
      }
    }
  }

  std::vector<std::string> positional;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) {
      positional.push_back(a);
      continue;
    }
    std::string key = a.substr(2);
    std::optional<std::string> value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    }
    const KeySpec* spec = detail::find_key(key);
    if (!spec) fail(ErrorCode::UnknownFlag, "unknown flag '--" + key + "'");
    if (spec->kind == ValueKind::Switch) {
      detail::assign(cfg, key, value.value_or("true"), !value.has_value());
      continue;
    }
    if (!value) {
      if (i + 1 >= args.size()) fail(ErrorCode::MalformedNumber, "flag '--" + key + "' needs a value");
      value = args[++i];
    }
    detail::assign(cfg, key, *value, false);
  }
  if (!positional.empty()) sub = positional[0];
  if (positional.size() > 1) cfg.action = positional[1];
  if (positional.size() > 2) fail(ErrorCode::UnknownFlag, "unexpected argument '" + positional[2] + "'");
  if (!sub) fail(ErrorCode::UnknownFlag, "missing subcommand");
  cfg.subcommand = detail::parse_subcommand(*sub);

  if (cfg.subcommand == Subcommand::Dioph) {
    if (cfg.action != "approx" && cfg.action != "claims") {
      fail(ErrorCode::UnknownFlag, "dioph needs an action: approx or claims");
    }
  } else if (!cfg.action.empty()) {
    fail(ErrorCode::UnknownFlag, "unexpected argument '" + cfg.action + "'");
  }
  if (cfg.has("seed")) cfg.seed = cfg.u64("seed");
  if (cfg.has("threads")) cfg.threads = static_cast<unsigned>(cfg.u64("threads"));
  if (cfg.has("precision")) {
    cfg.precision = static_cast<Precision>(cfg.u64("precision"));
    if (cfg.precision < 64) fail(ErrorCode::MalformedNumber, "precision must be at least 64 bits");
  }
  if (cfg.has("format")) {
    cfg.format = cfg.text("format");
    if (cfg.format != "json" && cfg.format != "csv") fail(ErrorCode::UnknownFlag, "format must be json or csv");
  }
  if (cfg.has("out")) cfg.out = cfg.text("out");
  if (cfg.has("f")) cfg.poly();  // strictness depends on --relax, known only now
  return cfg;
}

/// Reads the file named by --config (if any) and parses everything.
inline RunConfig load_config(const std::vector<std::string>& args) {
  std::optional<std::string> file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    file = ss.str();
  }
  return parse_config(args, file);
}

namespace detail {

using Json = nlohmann::ordered_json;

/// Output document: metadata plus either a JSON result or CSV rows.
struct Output {
  Json result = Json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool csv_comment_only_header = false;  ///< rows without a column header line
  std::string default_format = "json";
};

inline Json metadata(const RunConfig& cfg) {
  Json m;
  m["tool"] = "pplab";
  m["version"] = PPLAB_VERSION;
  m["subcommand"] = std::string(to_string(cfg.subcommand));
  if (!cfg.action.empty()) m["action"] = cfg.action;
  m["seed"] = cfg.seed;
  m["precision"] = cfg.precision;
  Json inputs = Json::object();
  for (const auto& [k, v] : cfg.values) {
    if (k == "threads" || k == "out" || k == "config" || k == "format") continue;
    inputs[k] = v;
  }
  m["inputs"] = inputs;
  m["switches"] = Json(std::vector<std::string>(cfg.switches.begin(), cfg.switches.end()));
  return m;
}

inline std::string json_scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline std::string render(const RunConfig& cfg, const Output& o) {
  const std::string fmt = cfg.format.empty() ? o.default_format : cfg.format;
  const Json meta = metadata(cfg);
  if (fmt == "json") {
    Json doc;
    doc["metadata"] = meta;
    doc["result"] = o.result;
    return doc.dump(2) + "\n";
  }
  std::ostringstream s;
  for (const auto& [k, v] : meta.items()) {
    if (v.is_object()) {
      for (const auto& [ik, iv] : v.items()) s << "# " << k << "." << ik << ": " << json_scalar_text(iv) << "\n";
    } else {
      s << "# " << k << ": " << json_scalar_text(v) << "\n";
    }
  }
  if (o.csv_header.empty() && o.csv_rows.empty()) {
    // flat result rendered as key,value rows
    s << "key,value\n";
    for (const auto& [k, v] : o.result.items()) s << k << "," << json_scalar_text(v) << "\n";
    return s.str();
  }
  if (!o.csv_comment_only_header) {
    for (std::size_t i = 0; i < o.csv_header.size(); ++i) s << (i ? "," : "") << o.csv_header[i];
    s << "\n";
  }
  for (const auto& row : o.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << row[i];
    s << "\n";
  }
  return s.str();
}

inline std::string q(const Rational& r) { return to_fraction_text(r); }

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Output cmd_exponents(const RunConfig& cfg) {
  const long k = cfg.integer("k").get_si();
  const Rational theta = cfg.rational("theta");
  const Rational eps = cfg.rational_or("eps", Rational(0));
  if (sgn(eps) < 0) fail(ErrorCode::MalformedNumber, "eps must be nonnegative");
  const ExponentBundle b = compute_bundle(k, theta);
  Output o;
  Json& r = o.result;
  r["k"] = k;
  r["theta"] = q(theta);
  r["eps"] = q(eps);
  r["tau1"] = q(b.tau1);
  r["rho_star"] = q(b.rho_star);
  r["rho"] = q(b.rho);
  r["rho_lemma"] = q(b.rho_lemma);
  r["c_split"] = q(b.c_split);
  r["b_threshold"] = q(b.b_threshold(eps));
  r["tau_typeI_smallM"] = q(b.tau_typeI_smallM);
  r["tau_typeI_largeM"] = q(b.tau_typeI_largeM);
  r["tau_typeII_low"] = q(b.tau_typeII_low);
  r["tau_typeII_high_base"] = q(b.tau_typeII_high_base);
  r["tau_typeII_transition"] = q(b.tau_typeII_transition);
  r["window_low"] = q(b.window_low());
  r["window_high"] = q(b.window_high());
  r["saving_type1_total"] = q(b.savings.type1_total);
  r["saving_type1_mid"] = q(b.savings.type1_mid);
  r["saving_type2_total"] = q(b.savings.type2_total);
  r["saving_type2_high"] = q(b.savings.type2_high);
  r["saving_type2_transition"] = q(b.savings.type2_transition);
  r["saving_type2_low"] = q(b.savings.type2_low);
  r["degrees_allow_f"] = b.degrees_allow_f;
  r["all_positive"] = b.all_positive;
  return o;
}

inline Output cmd_primes(const RunConfig& cfg) {
  const std::uint64_t limit = cfg.u64("limit");
  const PrimeTable t = sieve(limit);
  Output o;
  o.default_format = "csv";
  o.result["limit"] = limit;
  o.result["count"] = t.size();
  o.result["primes"] = Json(std::vector<std::uint32_t>(t.primes().begin(), t.primes().end()));
  o.csv_comment_only_header = true;
  o.csv_header = {"p"};
  for (std::uint32_t p : t.primes()) o.csv_rows.push_back({std::to_string(p)});
  return o;
}

inline Output cmd_hbparams(const RunConfig& cfg) {
  const BigInt Y = cfg.integer("Y");
  HBConstants c;
  c.c1 = cfg.rational_or("c1", c.c1);
  c.c2 = cfg.rational_or("c2", c.c2);
  c.c3 = cfg.rational_or("c3", c.c3);
  const HBParams p = hb_params(Y, c);
  const HBSumSkeleton s = hb_skeleton(Y, p);
  Output o;
  Json& r = o.result;
  r["Y"] = Y.get_str();
  r["c1"] = q(c.c1);
  r["c2"] = q(c.c2);
  r["c3"] = q(c.c3);
  r["U"] = p.U;
  r["V"] = p.V;
  r["Z"] = q(p.Z);
  r["holds"] = p.holds;
  Json cons = Json::array();
  for (const auto& x : p.constraint_report) {
    cons.push_back({{"name", x.name}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"pass", x.pass}});
  }
  r["constraints"] = cons;
  auto ranges = [](const std::vector<std::pair<Range, Range>>& v) {
    Json a = Json::array();
    for (const auto& [m, n] : v) a.push_back({{"M", {m.lo, m.hi}}, {"N", {n.lo, n.hi}}});
    return a;
  };
  r["dyadic_levels"] = s.dyadic_levels;
  r["type1_ranges"] = ranges(s.type1_ranges);
  r["type2_ranges"] = ranges(s.type2_ranges);
  return o;
}

inline Json approx_json(const RationalApprox& a) {
  return {{"a", a.a.get_str()}, {"q", a.q.get_str()}, {"err", a.err}};
}

inline Json claim_json(const ClaimReport& r) {
  return {{"X", r.instance.X.get_str()},
          {"m", r.instance.m.get_str()},
          {"h", r.instance.h.get_str()},
          {"y_exponent", q(r.instance.y_exponent)},
          {"j", r.j},
          {"alpha_target", r.alpha_target},
          {"a", r.approx.a.get_str()},
          {"q", r.approx.q.get_str()},
          {"err", r.approx.err},
          {"Q_bits", bit_length(floor_of(r.Q_used))},
          {"scaled_down", r.scaled_down},
          {"lower_ok", r.lower_ok},
          {"dirichlet_ok", r.dirichlet_ok},
          {"ratio", r.ratio}};
}

inline Json run_claim_batch(const RunConfig& cfg, ClaimId id, std::size_t samples, bool with_instances,
                            bool& dirichlet_all_ok) {
  ClaimSampling s;
  s.k = cfg.integer_or("k", 12).get_si();
  s.theta = cfg.rational_or("theta", Rational(9, 2));
  if (cfg.has("coefficient")) s.coefficient = cfg.real("coefficient");
  const auto instances = sample_claims(id, samples, cfg.seed, s);
  std::size_t lower = 0, dir = 0, scaled = 0;
  Json list = Json::array();
  for (const auto& inst : instances) {
    const ClaimReport r = verify_claim(inst);
    lower += r.lower_ok;
    dir += r.dirichlet_ok;
    scaled += r.scaled_down;
    if (with_instances) list.push_back(claim_json(r));
  }
  dirichlet_all_ok = dirichlet_all_ok && dir == instances.size();
  Json out;
  out["claim"] = std::string(to_string(id));
  out["samples"] = instances.size();
  out["lower_ok"] = lower;
  out["lower_ok_ratio"] = instances.empty() ? 0.0 : static_cast<double>(lower) / instances.size();
  out["dirichlet_ok"] = dir;
  out["scaled_down"] = scaled;
  if (with_instances) out["instances"] = list;
  return out;
}

inline Output cmd_dioph(const RunConfig& cfg, bool& ok) {
  Output o;
  if (cfg.action == "approx") {
    const CertifiedReal x = cfg.real("x");
    const Rational Q = cfg.rational("Q");
    const auto cf = continued_fraction(x, floor_of(Q));
    const RationalApprox& best = cf.back();
    o.result["x"] = x.text();
    o.result["Q"] = q(Q);
    o.result["a"] = best.a.get_str();
    o.result["q"] = best.q.get_str();
    o.result["err"] = best.err;
    Json conv = Json::array();
    for (const auto& c : cf) conv.push_back(approx_json(c));
    o.result["convergents"] = conv;
    return o;
  }
  const ClaimId id = parse_claim_id(cfg.text_or("claim", "C41"));
  o.result = run_claim_batch(cfg, id, cfg.u64_or("samples", 100), true, ok);
  return o;
}

inline Output cmd_claims(const RunConfig& cfg, bool& ok) {
  Output o;
  Json arr = Json::array();
  for (ClaimId id : {ClaimId::C41, ClaimId::C42, ClaimId::C53, ClaimId::C54}) {
    arr.push_back(run_claim_batch(cfg, id, cfg.u64_or("samples", 100), false, ok));
  }
  o.result["claims"] = arr;
  return o;
}

inline Output cmd_expsum(const RunConfig& cfg, bool& ok) {
  const PseudoPolynomial f = cfg.poly();
  const CertifiedReal y = cfg.has("y") ? cfg.real("y") : CertifiedReal(Rational(0));
  const auto Xs = cfg.u64_list("X");
  if (Xs.size() != 1) fail(ErrorCode::MalformedNumber, "expsum takes a single X");
  const std::uint64_t X = Xs.front();
  if (cfg.flag("primes-only") && cfg.flag("vonmangoldt")) {
    fail(ErrorCode::UnknownFlag, "--primes-only and --vonmangoldt are exclusive");
  }
  ExpSumResult s;
  std::string kind = "all";
  if (cfg.flag("primes-only")) {
    kind = "primes";
    s = prime_exp_sum(f, y, X, sieve(X), cfg.precision, cfg.threads);
  } else if (cfg.flag("vonmangoldt")) {
    kind = "vonmangoldt";
    s = vonmangoldt_exp_sum(f, y, X, cfg.precision, cfg.threads);
  } else {
    s = exp_sum(make_phase(f, y), 1, X, cfg.precision, cfg.threads);
  }
  ok = ok && s.magnitude <= s.weight_mass + s.rounding_error_bound + 1e-9 * s.weight_mass;
  Output o;
  Json& r = o.result;
  r["f"] = f.to_string();
  r["y"] = y.text();
  r["X"] = X;
  r["kind"] = kind;
  r["value_re"] = s.re.to_string(30);
  r["value_im"] = s.im.to_string(30);
  r["magnitude"] = s.magnitude;
  r["terms"] = s.term_count;
  r["weight_mass"] = s.weight_mass;
  r["err_bound"] = s.rounding_error_bound;
  r["working_precision"] = s.working_precision;
  return o;
}

inline SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions opt;
  opt.threads = cfg.threads;
  opt.strict = cfg.flag("strict");
  if (cfg.has("cap")) opt.cap = static_cast<Precision>(cfg.u64("cap"));
  return opt;
}

inline Output cmd_search_min(const RunConfig& cfg, bool& ok) {
  const PseudoPolynomial f = cfg.poly();
  const CertifiedReal xi = cfg.real("xi");
  auto Xs = cfg.u64_list("X");
  std::sort(Xs.begin(), Xs.end());
  const PrimeTable primes = sieve(Xs.back());
  const auto results = min_fracpart_grid(xi, f, Xs, primes, search_options(cfg));
  const bool sanity = cfg.flag("sanity");
  Rational rho;
  if (sanity) {
    const PropertyFReport pf = check_property_f(f);
    if (!pf.holds) fail(ErrorCode::PreconditionFailed, "--sanity needs f with property (F)");
    rho = compute_bundle(pf.k, pf.theta).rho;
  }
  Output o;
  o.default_format = "csv";
  o.csv_header = {"X", "p_argmin", "min_distance", "ambiguous_floors"};
  if (sanity) {
    o.csv_header.push_back("threshold");
    o.csv_header.push_back("sanity_holds");
  }
  Json rows = Json::array();
  for (const auto& r : results) {
    std::vector<std::string> row = {std::to_string(r.X), std::to_string(r.argmin_prime), r.min_distance_text,
                                    std::to_string(r.ambiguous_floors)};
    Json jr = {{"X", r.X},
               {"p_argmin", r.argmin_prime},
               {"min_distance", r.min_distance_text},
               {"floor_at_argmin", r.floor_at_argmin.get_str()},
               {"evaluations", r.evaluations},
               {"ambiguous_floors", r.ambiguous_floors},
               {"precision_used", r.precision_used}};
    if (sanity) {
      if (r.X < 100) fail(ErrorCode::PreconditionFailed, "--sanity needs X >= 100");
      const double threshold = power_of_x(r.X, -rho);
      const bool holds = r.min_distance <= threshold;
      ok = ok && holds;
      row.push_back(fmt_double(threshold));
      row.push_back(holds ? "true" : "false");
      jr["threshold"] = threshold;
      jr["sanity_holds"] = holds;
    }
    o.csv_rows.push_back(std::move(row));
    rows.push_back(jr);
  }
  o.result["xi"] = xi.text();
  o.result["f"] = f.to_string();
  o.result["rows"] = rows;
  return o;
}

inline std::vector<std::pair<double, double>> read_decay_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  std::vector<std::pair<double, double>> pts;
  long xcol = -1, dcol = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = RunConfig::split_list(line);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "X") xcol = static_cast<long>(i);
        if (header[i] == "min_distance") dcol = static_cast<long>(i);
      }
      if (xcol < 0 || dcol < 0) fail(ErrorCode::MalformedNumber, "CSV needs X and min_distance columns");
      continue;
    }
    if (static_cast<long>(cells.size()) <= std::max(xcol, dcol)) fail(ErrorCode::MalformedNumber, "short CSV row");
    pts.emplace_back(parse_rational(cells[static_cast<std::size_t>(xcol)]).get_d(),
                     parse_rational(cells[static_cast<std::size_t>(dcol)]).get_d());
  }
  return pts;
}

inline Output cmd_fit_decay(const RunConfig& cfg) {
  const auto pts = read_decay_csv(cfg.text("in"));
  std::optional<Rational> rho;
  if (cfg.has("k") && cfg.has("theta")) rho = compute_bundle(cfg.integer("k").get_si(), cfg.rational("theta")).rho;
  const DecayFit fit = decay_fit(pts, rho);
  Output o;
  Json& r = o.result;
  r["slope"] = fit.slope;
  r["intercept"] = fit.intercept;
  r["r_squared"] = fit.r_squared;
  if (fit.rho_predicted) r["rho_predicted"] = q(*fit.rho_predicted);
  Json g = Json::array();
  for (const auto& [X, d] : fit.grid) g.push_back({X, d});
  r["points"] = g;
  return o;
}

inline Output cmd_sieve_witness(const RunConfig& cfg) {
  const std::uint64_t M = cfg.u64("M");
  std::vector<double> x;
  if (cfg.has("values")) {
    x = cfg.double_list("values");
  } else {
    std::mt19937_64 rng(cfg.seed);
    x = random_sieve_points(cfg.u64_or("N", 50), M, rng);
  }
  const LargeSieveWitness w = large_sieve_witness(x, M);
  Output o;
  o.result["N"] = x.size();
  o.result["M"] = M;
  o.result["m"] = w.m;
  o.result["magnitude"] = w.magnitude;
  o.result["threshold"] = w.threshold;
  o.result["hypothesis_ok"] = w.hypothesis_ok;
  return o;
}

inline Output cmd_multiple_search(const RunConfig& cfg) {
  const PseudoPolynomial f = cfg.poly();
  const std::uint64_t m = cfg.u64("m");
  const std::uint64_t limit = cfg.u64("limit");
  SearchOptions opt = search_options(cfg);
  const MultipleSearchResult r = multiple_search(m, f, limit, nullptr, opt.cap);
  Output o;
  o.result["m"] = m;
  o.result["limit"] = limit;
  o.result["found"] = r.found;
  o.result["status"] = r.found ? "found" : std::string(to_string(ErrorCode::NotFoundWithinLimit));
  o.result["p"] = r.p;
  o.result["floor"] = r.floor_value.get_str();
  o.result["primes_checked"] = r.primes_checked;
  return o;
}

inline Output cmd_case1(const RunConfig& cfg) {
  const PseudoPolynomial f = cfg.poly();
  const CertifiedReal xi = cfg.real("xi");
  const auto Xs = cfg.u64_list("X");
  if (Xs.size() != 1) fail(ErrorCode::MalformedNumber, "case1-demo takes a single X");
  ExperimentConfig ec;
  if (cfg.has("rho-tilde")) ec.contradiction_exponent = cfg.rational("rho-tilde");
  ec.seed = cfg.seed;
  const PrimeTable primes = sieve(Xs.front());
  const Case1Report r = case1_demo(xi, f, Xs.front(), cfg.u64_or("m", 1), primes, ec, cfg.threads);
  Output o;
  Json& j = o.result;
  j["X"] = r.X;
  j["m"] = r.m;
  j["M"] = r.M.get_str();
  j["H"] = r.H.get_str();
  j["q"] = r.q.get_str();
  j["rho_lemma"] = q(r.rho_lemma);
  j["prime_count"] = r.prime_count;
  j["main_sum"] = r.main_sum;
  j["sum1"] = r.sum1;
  j["sum2"] = r.sum2;
  j["sum3"] = r.sum3;
  return o;
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace detail

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitIo = 4;

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::AmbiguousFloor:
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::PrecisionUnrepresentable: return kExitPrecision;
    case ErrorCode::IoError: return kExitIo;
    case ErrorCode::HypothesisViolated:
    case ErrorCode::WitnessNotFound: return kExitAssertion;
    default: return kExitUsage;
  }
}

/// Executes the configured subcommand. Exit codes: 0 success, 1 invalid
/// input, 2 a checked assertion failed, 3 precision exhausted, 4 I/O error.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    bool ok = true;
    detail::Output o;
    switch (cfg.subcommand) {
      case Subcommand::Exponents: o = detail::cmd_exponents(cfg); break;
      case Subcommand::Primes: o = detail::cmd_primes(cfg); break;
      case Subcommand::HbParams: o = detail::cmd_hbparams(cfg); break;
      case Subcommand::Dioph: o = detail::cmd_dioph(cfg, ok); break;
      case Subcommand::ExpSum: o = detail::cmd_expsum(cfg, ok); break;
      case Subcommand::SearchMin: o = detail::cmd_search_min(cfg, ok); break;
      case Subcommand::FitDecay: o = detail::cmd_fit_decay(cfg); break;
      case Subcommand::SieveWitness: o = detail::cmd_sieve_witness(cfg); break;
      case Subcommand::MultipleSearch: o = detail::cmd_multiple_search(cfg); break;
      case Subcommand::Claims: o = detail::cmd_claims(cfg, ok); break;
      case Subcommand::Case1Demo: o = detail::cmd_case1(cfg); break;
    }
    detail::write_output(detail::render(cfg, o), cfg.out, out);
    if (!ok) {
      err << "pplab: assertion failed in " << to_string(cfg.subcommand) << "\n";
      return kExitAssertion;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "pplab: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

/// Parses argv-style arguments and runs; usable directly from main().
inline int run_main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = load_config(args);
  } catch (const Error& e) {
    err << "pplab: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return run(cfg, out, err);
}

}  // namespace pplab
