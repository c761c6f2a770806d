// gausson_cli <command> [--config file] [--out dir] [--set key=value ...]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  using namespace gausson::cli;
  CLI::App app{"Gaussons of the logarithmic Schrodinger equation with a repulsive harmonic potential"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
  };
  std::vector<Options> opts(commands().size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands().size(); ++i) {
    auto* sub = app.add_subcommand(commands()[i].name, commands()[i].description);
    sub->add_option("--config", opts[i].config, "key=value configuration file");
    sub->add_option("--out", opts[i].out, "output directory");
    sub->add_option("--set", opts[i].sets, "override key=value (repeatable)")->take_all();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    ExperimentConfig cfg;
    try {
      if (!opts[i].config.empty()) cfg.load_file(opts[i].config);
      for (const auto& s : opts[i].sets) cfg.set(s, "--set");
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
    std::optional<std::filesystem::path> out;
    if (!opts[i].out.empty()) out = opts[i].out;
    const int code = run_command(commands()[i], cfg, out);
    std::cout << commands()[i].name << ": " << (code == 0 ? "pass" : code == 1 ? "tolerance failure" : "config error")
              << "\n";
    return code;
  }
  return 2;
}
