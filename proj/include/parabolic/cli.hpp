#pragma once

// Run configuration, its parsing from key=value settings, and the command
// dispatcher that turns a configuration into a report.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parabolic/errors.hpp"
#include "parabolic/report.hpp"
#include "parabolic/suites.hpp"

namespace parabolic {

enum class Command { Basis, Roots, ConnectionCheck, KksCheck, Pair, OrbitAnchor, VerifyAll };

inline constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::Basis, "basis"},         {Command::Roots, "roots"},
    {Command::ConnectionCheck, "connection-check"}, {Command::KksCheck, "kks-check"},
    {Command::Pair, "pair"},           {Command::OrbitAnchor, "orbit-anchor"},
    {Command::VerifyAll, "verify-all"},
};

inline std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "?";
}

inline Command parse_command(std::string_view s) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (s == name) return cmd;
  }
  throw ConfigError("unknown command '" + std::string(s) + "'");
}

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ConfigError("unknown format '" + std::string(s) + "' (expected json or csv)");
}

inline std::string to_string(Format f) { return f == Format::Json ? "json" : "csv"; }

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class T>
T parse_number(std::string_view s, const std::string& what) {
  s = trim(s);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(what + ": cannot parse '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace detail

inline MultiIndex parse_alpha(std::string_view s) {
  std::vector<unsigned> exps;
  for (auto part : detail::split(s, ',')) exps.push_back(detail::parse_number<unsigned>(part, "alpha"));
  return MultiIndex(std::move(exps));
}

/// "unit" or "volume:<float>:<w1,w2,...>".
struct C1Mode {
  bool from_volume = false;
  double volume = 0.0;
  TorusWeight reference;

  std::string text() const {
    if (!from_volume) return "unit";
    std::string s = "volume:" + format_double(volume) + ":";
    for (std::size_t i = 0; i < reference.a.size(); ++i) {
      s += (i ? "," : "") + format_double(reference.a[i]);
    }
    return s;
  }

  NormalizationConstant resolve(Index n) const {
    if (!from_volume) return NormalizationConstant::user_supplied(1.0);
    return c1_from_orbit_volume(n, reference, volume);
  }
};

inline C1Mode parse_c1_mode(std::string_view s) {
  s = detail::trim(s);
  if (s == "unit") return {};
  constexpr std::string_view prefix = "volume:";
  if (s.substr(0, prefix.size()) != prefix) {
    throw ConfigError("c1-mode: expected 'unit' or 'volume:<float>:<weights>', got '" + std::string(s) + "'");
  }
  const std::string_view rest = s.substr(prefix.size());
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw ConfigError("c1-mode: missing reference weights");
  C1Mode m;
  m.from_volume = true;
  m.volume = detail::parse_number<double>(rest.substr(0, colon), "c1-mode volume");
  for (auto part : detail::split(rest.substr(colon + 1), ',')) {
    m.reference.a.push_back(detail::parse_number<double>(part, "c1-mode weight"));
  }
  return m;
}

struct RunConfig {
  Command command = Command::VerifyAll;
  std::optional<Index> n;
  Index g = 1;
  std::optional<MultiIndex> alpha;
  std::uint64_t seed = 0;
  std::map<std::string, double> tol;
  std::string output;  // empty: standard output
  Format format = Format::Json;
  C1Mode c1;
  int points = 3;  // solver points per (n, g) in connection-check
  SolverConfig solver;
  double solver_tol = 1e-9;
};

using Settings = std::map<std::string, std::string>;

/// key=value lines; blank lines and lines starting with '#' are ignored.
inline Settings read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Settings out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    out[std::string(detail::trim(t.substr(0, eq)))] = std::string(detail::trim(t.substr(eq + 1)));
  }
  return out;
}

/// Entries of `top` replace those of `base`.
inline Settings overlay(Settings base, const Settings& top) {
  for (const auto& [k, v] : top) base[k] = v;
  return base;
}

/// Collects `--tol.<name> <value>` and `--tol.<name>=<value>` arguments.
inline Settings parse_tol_arguments(const std::vector<std::string>& args) {
  Settings out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--tol.", 0) != 0) throw ConfigError("unrecognised argument '" + arg + "'");
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      out[arg.substr(2, eq - 2)] = arg.substr(eq + 1);
    } else if (i + 1 < args.size()) {
      out[arg.substr(2)] = args[++i];
    } else {
      throw ConfigError("missing value for '" + arg + "'");
    }
  }
  return out;
}

inline RunConfig config_from_settings(const Settings& settings) {
  RunConfig c;
  for (const auto& [key, value] : settings) {
    if (key == "command") c.command = parse_command(value);
    else if (key == "n") c.n = detail::parse_number<Index>(value, "n");
    else if (key == "g") c.g = detail::parse_number<Index>(value, "g");
    else if (key == "alpha") c.alpha = parse_alpha(value);
    else if (key == "seed") c.seed = detail::parse_number<std::uint64_t>(value, "seed");
    else if (key == "out") c.output = value;
    else if (key == "format") c.format = parse_format(value);
    else if (key == "c1-mode") c.c1 = parse_c1_mode(value);
    else if (key == "points") c.points = detail::parse_number<int>(value, "points");
    else if (key == "solver-tol") c.solver_tol = detail::parse_number<double>(value, key);
    else if (key == "solver-step") c.solver.initial_step = detail::parse_number<double>(value, key);
    else if (key == "solver-budget") c.solver.max_iterations = detail::parse_number<int>(value, key);
    else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
      c.tol[key.substr(4)] = detail::parse_number<double>(value, key);
    } else {
      throw ConfigError("unknown setting '" + key + "'");
    }
  }
  return c;
}

inline void validate(const RunConfig& c) {
  auto need_n = [&](Index min) {
    if (!c.n) throw ConfigError(to_string(c.command) + ": --n is required");
    if (*c.n < min) {
      throw ConfigError(to_string(c.command) + ": n must be >= " + std::to_string(min));
    }
  };
  switch (c.command) {
    case Command::Basis:
    case Command::Roots:
      need_n(1);
      break;
    case Command::KksCheck:
      need_n(2);
      break;
    case Command::ConnectionCheck:
      need_n(2);
      if (c.g < 1) throw ConfigError("connection-check: g must be >= 1");
      break;
    case Command::Pair:
      need_n(1);
      if (!c.alpha) throw ConfigError("pair: --alpha is required");
      break;
    case Command::OrbitAnchor:
      if (c.n && *c.n != 2) throw ConfigError("orbit-anchor: only n = 2 is supported");
      if (c.c1.from_volume && c.c1.reference.size() != 2) {
        throw ConfigError("orbit-anchor: reference weight must have two entries");
      }
      break;
    case Command::VerifyAll:
      break;
  }
  if (c.points < 1) throw ConfigError("points must be >= 1");
  if (!(c.solver_tol > 0.0)) throw ConfigError("solver-tol must be positive");
  if (!(c.solver.initial_step > 0.0)) throw ConfigError("solver-step must be positive");
  if (c.solver.max_iterations < 1) throw ConfigError("solver-budget must be >= 1");
  if (c.n && *c.n > 8 && c.command != Command::Pair) throw ConfigError("n must be <= 8");
}

inline nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = to_string(c.command);
  if (c.n) j["n"] = *c.n;
  j["g"] = c.g;
  if (c.alpha) j["alpha"] = c.alpha->exponents();
  j["seed"] = c.seed;
  j["points"] = c.points;
  j["solver_tol"] = c.solver_tol;
  j["solver_step"] = c.solver.initial_step;
  j["solver_budget"] = c.solver.max_iterations;
  j["c1_mode"] = c.c1.text();
  j["format"] = to_string(c.format);
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [name, value] : c.tol) tol[name] = value;
  j["tol"] = std::move(tol);
  return j;
}

namespace detail {

/// Runs a suite; a numerical failure inside it becomes a failing check.
template <class Fn>
void guarded(SuiteContext& ctx, const std::string& name, const std::string& tag, Fn&& fn) {
  try {
    fn();
  } catch (const NonConvergence&) {
    ctx.report.add(Check{name + "_error[" + tag + "]", NAN, 0.0, false});
  } catch (const DegenerateFrame&) {
    ctx.report.add(Check{name + "_error[" + tag + "]", NAN, 0.0, false});
  }
}

inline TorusWeight anchor_weight(const RunConfig& c) {
  return c.c1.from_volume ? c.c1.reference : TorusWeight{{1.0, -1.0}};
}

}  // namespace detail

inline Report run(const RunConfig& config) {
  validate(config);
  Report report;
  report.command = to_string(config.command);
  report.config = config_echo(config);
  const Tolerances tol(config.tol);
  SuiteContext ctx{report, tol, config.seed};

  switch (config.command) {
    case Command::Basis:
      basis_suite(ctx, *config.n);
      break;
    case Command::Roots:
      roots_suite(ctx, *config.n);
      break;
    case Command::KksCheck:
      kks_suite(ctx, *config.n);
      break;
    case Command::ConnectionCheck:
      detail::guarded(ctx, "connection", rank_genus_tag(*config.n, config.g),
                      [&] { connection_suite(ctx, *config.n, config.g, config.points, config.solver, config.solver_tol); });
      break;
    case Command::Pair: {
      const auto number = intersection_number(*config.n, *config.alpha, config.c1.resolve(*config.n));
      report.pairing = pairing_section(number);
      pair_suite(ctx, number);
      break;
    }
    case Command::OrbitAnchor:
      anchor_suite(ctx, detail::anchor_weight(config));
      break;
    case Command::VerifyAll:
      for (Index n = 1; n <= 8; ++n) basis_suite(ctx, n);
      for (Index n = 1; n <= 4; ++n) roots_suite(ctx, n);
      for (Index n = 2; n <= 3; ++n) kks_suite(ctx, n);
      for (Index n = 2; n <= 3; ++n) {
        for (Index g = 1; g <= 2; ++g) {
          detail::guarded(ctx, "connection", rank_genus_tag(n, g),
                          [&] { connection_suite(ctx, n, g, config.points, config.solver, config.solver_tol); });
        }
      }
      for (Index n = 2; n <= 3; ++n) exactness_suite(ctx, n);
      {
        const auto unit = NormalizationConstant::user_supplied(1.0);
        pair_suite(ctx, intersection_number(2, MultiIndex({1, 0}), unit));
        pair_suite(ctx, intersection_number(3, MultiIndex({3, 0, 0}), unit));
      }
      anchor_suite(ctx, detail::anchor_weight(config));
      weyl_suite(ctx, 6);
      break;
  }
  return report;
}

/// 0 iff every check passed.
inline int exit_status(const Report& report) { return report.passed() ? 0 : 1; }

}  // namespace parabolic
