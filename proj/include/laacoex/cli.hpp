// Command-line front end: solve, simulate, sweep, validate and presets
// subcommands over a strict JSON configuration with inline overrides.
// Output is deterministic given the same invocation (seed included), so
// re-runs reproduce result files byte for byte.
#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "rng.hpp"

namespace laacoex::cli {

inline constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Rate expressions: absolute numbers or "k*mu_w" strings
// ---------------------------------------------------------------------------

// Parses "12.5", "0.5*mu_w" or "mu_w" against a resolved mu_w value.
inline double parse_rate_expr(const std::string& text, double mu_w) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("empty rate expression");
  double factor = 1.0;
  std::string num = s;
  if (s == "mu_w") {
    num.clear();
  } else if (const auto star = s.find("*mu_w");
             star != std::string::npos && star + 5 == s.size()) {
    num = s.substr(0, star);
  } else if (s.find("mu_w") != std::string::npos) {
    throw ConfigError("bad rate expression '" + text +
                      "' (expected a number, 'mu_w' or 'k*mu_w')");
  } else {
    // plain number
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(num, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad rate expression '" + text + "'");
    }
    if (used != num.size())
      throw ConfigError("bad rate expression '" + text + "'");
    return v;
  }
  if (!num.empty()) {
    std::size_t used = 0;
    try {
      factor = std::stod(num, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad rate expression '" + text + "'");
    }
    if (used != num.size())
      throw ConfigError("bad rate expression '" + text + "'");
  }
  return factor * mu_w;
}

// ---------------------------------------------------------------------------
// Strict JSON configuration
// ---------------------------------------------------------------------------

namespace detail {

inline void reject_unknown(const nlohmann::json& obj,
                           std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok)
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

inline double json_rate(const nlohmann::json& v, double mu_w,
                        const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_rate_expr(v.get<std::string>(), mu_w);
  throw ConfigError("field '" + field + "' must be a number or a rate string");
}

}  // namespace detail

struct LoadedConfig {
  Scenario scenario;
  std::optional<SweepSpec> sweep;  // present when the file has a sweep block
};

// Loads and fully validates a configuration file. Unknown keys are rejected
// at every level. Rates may be absolute numbers or "k*mu_w" strings, which
// resolve against the file's mu_w (default 1 when unset).
inline LoadedConfig load_config(const std::string& path,
                                const Scenario& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  detail::reject_unknown(
      j, {"scheme", "d", "q", "q_theta", "rates", "solver", "sim", "sweep"},
      "config root");

  LoadedConfig out;
  out.scenario = defaults;
  Scenario& s = out.scenario;
  s.name = path;
  if (j.contains("scheme"))
    s.scheme.scheme = parse_scheme(j.at("scheme").get<std::string>());
  if (j.contains("d")) s.scheme.D = j.at("d").get<int>();
  if (j.contains("q")) s.scheme.Q = j.at("q").get<int>();
  if (j.contains("q_theta")) s.scheme.q_theta = j.at("q_theta").get<int>();

  if (j.contains("rates")) {
    const nlohmann::json& r = j.at("rates");
    if (!r.is_object()) throw ConfigError("'rates' must be an object");
    detail::reject_unknown(r,
                           {"lambda_l", "lambda_w", "mu_lu", "mu_w", "mu_s",
                            "mu_on", "mu_off"},
                           "'rates'");
    if (r.contains("mu_w")) {
      if (!r.at("mu_w").is_number())
        throw ConfigError("'mu_w' must be an absolute number");
      s.rates.mu_w = r.at("mu_w").get<double>();
    }
    const double mw = s.rates.mu_w;
    if (r.contains("lambda_l"))
      s.rates.lambda_l = detail::json_rate(r.at("lambda_l"), mw, "lambda_l");
    if (r.contains("lambda_w"))
      s.rates.lambda_w = detail::json_rate(r.at("lambda_w"), mw, "lambda_w");
    if (r.contains("mu_lu"))
      s.rates.mu_lu = detail::json_rate(r.at("mu_lu"), mw, "mu_lu");
    if (r.contains("mu_s"))
      s.rates.mu_s = detail::json_rate(r.at("mu_s"), mw, "mu_s");
    if (r.contains("mu_on"))
      s.rates.mu_on = detail::json_rate(r.at("mu_on"), mw, "mu_on");
    if (r.contains("mu_off"))
      s.rates.mu_off = detail::json_rate(r.at("mu_off"), mw, "mu_off");
  }

  if (j.contains("solver")) {
    const nlohmann::json& v = j.at("solver");
    detail::reject_unknown(v, {"alpha", "max_iterations"}, "'solver'");
    if (v.contains("alpha")) s.solver.alpha = v.at("alpha").get<double>();
    if (v.contains("max_iterations"))
      s.solver.max_iterations = v.at("max_iterations").get<std::uint64_t>();
  }

  if (j.contains("sim")) {
    const nlohmann::json& v = j.at("sim");
    detail::reject_unknown(v, {"sessions", "seed", "batches"}, "'sim'");
    if (v.contains("sessions"))
      s.sessions = v.at("sessions").get<std::uint64_t>();
    if (v.contains("seed")) s.seed = v.at("seed").get<std::uint64_t>();
    if (v.contains("batches")) s.batches = v.at("batches").get<int>();
  }

  if (j.contains("sweep")) {
    const nlohmann::json& v = j.at("sweep");
    detail::reject_unknown(v, {"axis", "values", "schemes"}, "'sweep'");
    SweepSpec sw;
    sw.base = s;
    sw.axis = v.at("axis").get<std::string>();
    for (const auto& x : v.at("values")) sw.axis_values.push_back(x.get<double>());
    if (v.contains("schemes"))
      for (const auto& x : v.at("schemes"))
        sw.schemes.push_back(parse_scheme(x.get<std::string>()));
    else
      sw.schemes = {s.scheme.scheme};
    sw.validate();
    out.sweep = std::move(sw);
  }

  try {
    s.scheme.validate();
    s.rates.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invocation plumbing
// ---------------------------------------------------------------------------

struct Options {
  std::string scheme;
  std::string preset;
  std::string config;
  std::string out;
  std::string format = "pretty";  // csv | pretty
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::uint64_t sessions = 1'000'000;
  bool sessions_set = false;
  double tolerance = 0.0;
  bool tolerance_set = false;
  // rate/shape overrides as expressions
  std::string lambda_l, lambda_w, mu_lu, mu_w, mu_s, mu_on, mu_off;
  int q = 0, q_theta = 0, d = 0;  // 0 = unset
};

namespace detail {

inline void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--scheme", o.scheme, "Scheme: ufa, uta, ufab or utab");
  cmd->add_option("--preset", o.preset,
                  "Named parameter preset (see the presets subcommand)");
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format: csv or pretty")
      ->check(CLI::IsMember({"csv", "pretty"}));
  cmd->add_option("--seed", o.seed, "Simulation seed")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--sessions", o.sessions,
                  "Simulated packet arrivals (sessions)")
      ->each([&o](const std::string&) { o.sessions_set = true; });
  cmd->add_option("--tolerance", o.tolerance,
                  "Solver tolerance alpha (solve/simulate/sweep) or "
                  "simulation-cell tolerance (validate)")
      ->each([&o](const std::string&) { o.tolerance_set = true; });
  cmd->add_option("--lambda-l", o.lambda_l, "LAA arrival rate (number or k*mu_w)");
  cmd->add_option("--lambda-w", o.lambda_w, "Wi-Fi arrival rate (number or k*mu_w)");
  cmd->add_option("--mu-lu", o.mu_lu, "LAA service rate (number or k*mu_w)");
  cmd->add_option("--mu-w", o.mu_w, "Wi-Fi service rate (absolute number)");
  cmd->add_option("--mu-s", o.mu_s, "Sensing completion rate (number or k*mu_w)");
  cmd->add_option("--mu-on", o.mu_on, "On-phase expiry rate (number or k*mu_w)");
  cmd->add_option("--mu-off", o.mu_off, "Off-phase expiry rate (number or k*mu_w)");
  cmd->add_option("--q", o.q, "Queue capacity Q")->check(CLI::PositiveNumber);
  cmd->add_option("--q-theta", o.q_theta, "Buffer threshold Q_theta")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--d", o.d, "Unlicensed channels D")
      ->check(CLI::PositiveNumber);
}

// Builds the effective scenario: preset base, then config file, then
// inline flag overrides (highest precedence).
inline Scenario effective_scenario(const Options& o,
                                   std::optional<SweepSpec>* sweep_out) {
  Scenario s;
  if (!o.preset.empty()) {
    const Preset* p = find_preset(o.preset);
    if (!p) throw ConfigError("unknown preset: " + o.preset);
    s = p->sweeps.front().base;
    if (sweep_out) {
      // presets with a single curve family expose their sweep directly
      if (p->sweeps.size() == 1) *sweep_out = p->sweeps.front();
    }
  }
  if (!o.config.empty()) {
    LoadedConfig lc = load_config(o.config, s);
    s = lc.scenario;
    if (sweep_out && lc.sweep) *sweep_out = lc.sweep;
  }
  if (!o.scheme.empty()) s.scheme.scheme = parse_scheme(o.scheme);
  if (o.d > 0) s.scheme.D = o.d;
  if (o.q > 0) s.scheme.Q = o.q;
  if (o.q_theta > 0) s.scheme.q_theta = o.q_theta;
  if (!o.mu_w.empty()) s.rates.mu_w = parse_rate_expr(o.mu_w, 1.0);
  const double mw = s.rates.mu_w;
  if (!o.lambda_l.empty()) s.rates.lambda_l = parse_rate_expr(o.lambda_l, mw);
  if (!o.lambda_w.empty()) s.rates.lambda_w = parse_rate_expr(o.lambda_w, mw);
  if (!o.mu_lu.empty()) s.rates.mu_lu = parse_rate_expr(o.mu_lu, mw);
  if (!o.mu_s.empty()) s.rates.mu_s = parse_rate_expr(o.mu_s, mw);
  if (!o.mu_on.empty()) s.rates.mu_on = parse_rate_expr(o.mu_on, mw);
  if (!o.mu_off.empty()) s.rates.mu_off = parse_rate_expr(o.mu_off, mw);
  if (o.seed_set) s.seed = o.seed;
  if (o.sessions_set) s.sessions = o.sessions;
  if (o.tolerance_set) s.solver.alpha = o.tolerance;
  s.scheme.validate();
  s.rates.validate();
  return s;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Run metadata echoed with every result so the invocation can be replayed.
inline void write_metadata(std::ostream& os, const Scenario& s,
                           bool with_sim) {
  os << "# tool = laacoex " << kVersion << '\n';
  os << "# scheme = " << scheme_name(s.scheme.scheme) << '\n';
  os << "# d = " << s.scheme.D << '\n';
  os << "# q = " << s.scheme.Q << '\n';
  if (scheme_has_threshold(s.scheme.scheme))
    os << "# q_theta = " << s.scheme.q_theta << '\n';
  os << "# lambda_l = " << fmt(s.rates.lambda_l) << '\n';
  os << "# lambda_w = " << fmt(s.rates.lambda_w) << '\n';
  os << "# mu_lu = " << fmt(s.rates.mu_lu) << '\n';
  os << "# mu_w = " << fmt(s.rates.mu_w) << '\n';
  os << "# mu_s = " << fmt(s.rates.mu_s) << '\n';
  os << "# mu_on = " << fmt(s.rates.mu_on) << '\n';
  os << "# mu_off = " << fmt(s.rates.mu_off) << '\n';
  os << "# alpha = " << fmt(s.solver.alpha) << '\n';
  if (with_sim) {
    os << "# sessions = " << s.sessions << '\n';
    os << "# seed = " << s.seed << '\n';
    os << "# batches = " << s.batches << '\n';
    os << "# rng = " << kRngName << '\n';
  }
}

struct OutputSink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file: " + path);
      os = &file;
    }
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand bodies; each returns the process exit code.
// ---------------------------------------------------------------------------

inline int cmd_solve(const Options& o) {
  Scenario s = detail::effective_scenario(o, nullptr);
  s.engines = Engines::Analytic;
  if (s.name.empty()) s.name = "solve";
  const ResultRow row = run_scenario(s);
  detail::OutputSink sink(o.out);
  std::ostream& os = *sink.os;
  detail::write_metadata(os, s, false);
  if (o.format == "csv") {
    write_csv({row}, os);
  } else {
    char buf[128];
    std::snprintf(buf, sizeof buf, "P_b,l = %.6f\nP_b,w = %.6f\n",
                  *row.p_bl_analytic, *row.p_bw_analytic);
    os << buf;
  }
  return 0;
}

inline int cmd_simulate(const Options& o) {
  Scenario s = detail::effective_scenario(o, nullptr);
  s.engines = Engines::Simulation;
  if (s.name.empty()) s.name = "simulate";
  const ResultRow row = run_scenario(s);
  detail::OutputSink sink(o.out);
  std::ostream& os = *sink.os;
  detail::write_metadata(os, s, true);
  if (o.format == "csv") {
    write_csv({row}, os);
  } else {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "P_b,l = %.6f (ci95 +/- %.6f)\n"
                  "P_b,w = %.6f (ci95 +/- %.6f)\n",
                  *row.p_bl_sim, *row.ci_bl, *row.p_bw_sim, *row.ci_bw);
    os << buf;
  }
  return 0;
}

inline int cmd_sweep(const Options& o) {
  std::optional<SweepSpec> from_cfg;
  Scenario base = detail::effective_scenario(o, &from_cfg);

  std::vector<ResultRow> rows;
  if (!o.preset.empty() && o.config.empty()) {
    const Preset* p = find_preset(o.preset);
    if (!p) throw ConfigError("unknown preset: " + o.preset);
    // Apply CLI overrides (seed/sessions/engine knobs) to every family.
    std::vector<SweepSpec> sweeps = p->sweeps;
    for (SweepSpec& sw : sweeps) {
      if (o.seed_set) sw.base.seed = o.seed;
      if (o.sessions_set) sw.base.sessions = o.sessions;
      if (o.tolerance_set) sw.base.solver.alpha = o.tolerance;
      std::vector<ResultRow> part = sweep(sw);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  } else if (from_cfg) {
    from_cfg->base = base;
    rows = sweep(*from_cfg);
  } else {
    throw ConfigError(
        "sweep needs --preset or a config file with a 'sweep' block");
  }

  detail::OutputSink sink(o.out);
  std::ostream& os = *sink.os;
  if (o.format == "pretty") {
    os << "# tool = laacoex " << kVersion << '\n';
    for (const ResultRow& r : rows) {
      os << r.scenario << " " << scheme_name(r.scheme) << " " << r.axis << "="
         << detail::fmt(r.axis_value);
      if (!r.note.empty()) os << " [" << r.note << "]";
      if (!r.ok()) {
        os << " ERROR: " << r.error << '\n';
        continue;
      }
      if (r.p_bl_analytic)
        os << " p_bl=" << detail::fmt(*r.p_bl_analytic)
           << " p_bw=" << detail::fmt(*r.p_bw_analytic);
      if (r.p_bl_sim)
        os << " p_bl_sim=" << detail::fmt(*r.p_bl_sim)
           << " p_bw_sim=" << detail::fmt(*r.p_bw_sim);
      os << '\n';
    }
  } else {
    write_csv(rows, os);
  }
  for (const ResultRow& r : rows)
    if (!r.ok()) return 1;
  return 0;
}

inline int cmd_validate(const Options& o) {
  ValidationSettings vs;
  if (o.seed_set) vs.seed = o.seed;
  if (o.sessions_set) {
    vs.sessions = o.sessions;
    vs.run_simulation = o.sessions > 0;
  }
  if (o.tolerance_set) vs.tol_sim = o.tolerance;
  const ValidationReport rep = validate_reference(vs);

  detail::OutputSink sink(o.out);
  std::ostream& os = *sink.os;
  os << "# tool = laacoex " << kVersion << '\n';
  os << "# rng = " << kRngName << '\n';
  os << "# seed = " << rep.seed << '\n';
  os << "# sessions = " << rep.sessions << '\n';
  os << "# checksum = " << (rep.checksum_ok ? "ok" : "MISMATCH") << '\n';
  for (const ValidationCell& c : rep.cells) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%-7s lambda_l=%-5g %-10s computed=%.6f reference=%.6f "
                  "tol=%g %s%s\n",
                  c.row.c_str(), c.lambda_l, c.kind.c_str(), c.computed,
                  c.reference, c.tolerance,
                  c.flagged ? "FLAGGED" : (c.pass ? "PASS" : "FAIL"),
                  c.flagged ? " (known-anomalous cell, excluded)" : "");
    os << buf;
  }
  os << (rep.passed() ? "validation: PASS\n" : "validation: FAIL\n");
  return rep.passed() ? 0 : 1;
}

inline int cmd_presets(const Options& o) {
  detail::OutputSink sink(o.out);
  std::ostream& os = *sink.os;
  for (const Preset& p : preset_catalog()) {
    os << p.name << "\n    " << p.description << '\n';
    std::size_t rows = 0;
    for (const SweepSpec& sw : p.sweeps)
      rows += sw.axis_values.size() * sw.schemes.size();
    os << "    rows: " << rows << '\n';
  }
  return 0;
}

// Entry point shared by the binary and the CLI tests.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "laacoex - unlicensed-band LAA/Wi-Fi coexistence analysis: exact "
      "stationary solver and discrete-event simulation for the UFA, UTA, "
      "UFAB and UTAB allocation schemes"};
  app.require_subcommand(1);
  Options o;
  CLI::App* solve = app.add_subcommand(
      "solve", "Analytic stationary dropping probabilities");
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Seeded discrete-event simulation estimates");
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Parameter sweep over a preset or config");
  CLI::App* validate = app.add_subcommand(
      "validate", "Check solver and simulation against the reference table");
  CLI::App* presets =
      app.add_subcommand("presets", "List the named parameter presets");
  for (CLI::App* c : {solve, simulate, sweep_cmd, validate, presets})
    detail::add_common_flags(c, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (validate->parsed()) return cmd_validate(o);
    if (presets->parsed()) return cmd_presets(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace laacoex::cli
