#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "parabolic/cli.hpp"

namespace {

constexpr int kConfigFailure = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag-manifold pairings and torus-connection checks for U(n)"};
  app.allow_extras();

  std::string command;
  std::string config_file;
  parabolic::Settings flags;
  auto option = [&](const char* name, const char* key, const char* help) {
    app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  app.add_option("command", command,
                 "basis | roots | connection-check | kks-check | pair | orbit-anchor | verify-all");
  app.add_option("--config", config_file, "key=value settings file (flags take precedence)");
  option("--n", "n", "rank");
  option("--g", "g", "genus");
  option("--alpha", "alpha", "comma-separated exponents");
  option("--seed", "seed", "random seed");
  option("--c1-mode", "c1-mode", "unit | volume:<float>:<w1,w2,...>");
  option("--out", "out", "output path (default: stdout)");
  option("--format", "format", "json | csv");
  option("--points", "points", "solver points per (n, g)");
  option("--solver-tol", "solver-tol", "relation defect target of the solver");
  option("--solver-step", "solver-step", "initial line-search step");
  option("--solver-budget", "solver-budget", "solver iteration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    parabolic::Settings settings;
    if (!config_file.empty()) settings = parabolic::read_settings_file(config_file);
    if (!command.empty()) settings["command"] = command;
    settings = parabolic::overlay(std::move(settings), flags);
    settings = parabolic::overlay(std::move(settings), parabolic::parse_tol_arguments(app.remaining()));
    if (!settings.count("command")) throw parabolic::ConfigError("no command given");

    const parabolic::RunConfig config = parabolic::config_from_settings(settings);
    const parabolic::Report report = parabolic::run(config);
    if (config.output.empty()) {
      std::cout << parabolic::emit(report, config.format);
    } else {
      parabolic::write_report(report, config.format, config.output);
    }
    return parabolic::exit_status(report);
  } catch (const parabolic::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigFailure;
  } catch (const parabolic::DegreeMismatch& e) {
    std::fprintf(stderr, "degree mismatch: %s\n", e.what());
    return kConfigFailure;
  } catch (const parabolic::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigFailure;
  }
}
