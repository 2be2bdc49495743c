// Copyright 2026 The floquet-lab Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floquet/error.hpp"
#include "floquet/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bloch solutions and principal eigenvalues of periodic elliptic operators"};
  std::string command;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  const std::vector<std::string> commands(std::begin(floquet::kCommands), std::end(floquet::kCommands));
  app.add_option("command", command, "bands | lambda | xi | synth | verify")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--grid", grid, "collocation points per axis")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "positivity tolerance for the principal eigenvalue maximum")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : floquet::kExitConfigError;
  }

  floquet::Overrides overrides;
  if (out) overrides.out = *out;
  overrides.grid = grid;
  overrides.tol = tol;
  overrides.seed = seed;

  floquet::RunConfig config;
  try {
    config = floquet::load_config(config_path, overrides);
  } catch (const floquet::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return floquet::kExitConfigError;
  }

  const floquet::RunResult result = floquet::run(config, command);
  for (const auto& path : result.artifacts) std::cout << path.string() << '\n';
  if (result.exit_code != floquet::kExitOk) std::cerr << "error: " << result.message << '\n';
  return result.exit_code;
}
