// iwv command-line front end.
//
//   iwv <subcommand> --config <path> [--out <path>] [--seed <u64>]
//
// Subcommands: fisher-scan, noise-scan, jitter-scan, mc-estimate, frequency.
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.
// IWV_THREADS sets the sweep-point thread count unless the config says
// otherwise.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "iwv/errors.hpp"
#include "iwv/scan.hpp"
#include "iwv/version.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw iwv::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(iwv::Subcommand sub, const SubArgs& args) {
  iwv::ScanConfig cfg;
  try {
    cfg = iwv::parse_config(read_file(args.config_path), sub);
    if (!args.out_path.empty()) cfg.output_path = args.out_path;
    if (args.seed_given) cfg.seed = args.seed;
    if (cfg.threads == 1) {
      if (const char* env = std::getenv("IWV_THREADS")) {
        const int t = std::atoi(env);
        if (t > 1) cfg.threads = t;
      }
    }
  } catch (const iwv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    iwv::run_scan_to_path(cfg);
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse-weak-value phase/frequency metrology workbench"};
  app.set_version_flag("--version", std::string(iwv::kVersion));
  app.require_subcommand(1);

  const std::pair<std::string, iwv::Subcommand> subs[] = {
      {"fisher-scan", iwv::Subcommand::fisher_scan},
      {"noise-scan", iwv::Subcommand::noise_scan},
      {"jitter-scan", iwv::Subcommand::jitter_scan},
      {"mc-estimate", iwv::Subcommand::mc_estimate},
      {"frequency", iwv::Subcommand::frequency},
  };

  SubArgs args[5];
  int idx = 0;
  for (const auto& [name, sub] : subs) {
    CLI::App* s = app.add_subcommand(name, std::string(iwv::subcommand_name(sub)) + " CSV scan");
    s->add_option("--config", args[idx].config_path, "flat key=value config file")->required();
    s->add_option("--out", args[idx].out_path, "output CSV path (default: config 'out' or stdout)");
    s->add_option("--seed", args[idx].seed, "master seed override")
        ->each([&, idx](const std::string&) { args[idx].seed_given = true; });
    ++idx;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (int i = 0; i < 5; ++i) {
    if (app.get_subcommands().at(0)->get_name() == subs[i].first) {
      return run(subs[i].second, args[i]);
    }
  }
  return 2;
}
