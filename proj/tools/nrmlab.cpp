#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nrm/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Network revenue management simulation laboratory"};
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  int workers = -1;
  app.add_option("--config", config_path, "Experiment configuration document (JSON)")
      ->required();
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--workers", workers, "Override the configured worker count (0 = all cores)");
  app.add_option("--out", out_dir, "Output directory for results.csv and meta.json");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  nrm::RunConfig cfg;
  try {
    cfg = nrm::parse_config(buf.str());
  } catch (const nrm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (workers >= 0) cfg.workers = workers;
  return nrm::run(cfg, out_dir);
}
