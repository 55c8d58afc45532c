// Batch driver: kdvlab --config run.json [--out DIR] [--seed N] [--quiet]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kdv/errors.hpp"
#include "kdv/run_config.hpp"
#include "kdv/trajectory_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Damped forced KdV experiment runner"};
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output root, overrides out_dir");
  auto* seed_opt = app.add_option("--seed", seed, "base seed, overrides seed");
  app.add_flag("--quiet", quiet, "print nothing on success");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cout << kdv::failure_json("", "io", "cannot read " + config_path);
    return 2;
  }
  std::stringstream text;
  text << in.rdbuf();

  kdv::RunConfig cfg;
  try {
    cfg = kdv::parse_config(text.str());
    if (*out_opt) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
  } catch (const kdv::ConfigError& e) {
    std::cout << kdv::failure_json("", "config", e.what());
    return 2;
  }

  const auto result = kdv::dispatch(cfg);
  if (!quiet || result.exit_code != 0) std::cout << result.summary;
  return result.exit_code;
}
