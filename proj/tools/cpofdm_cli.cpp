// cpofdm: run CP-OFDM MIMO radar experiments from a JSON config.
//
//   cpofdm run --config <file> --out <dir> [--seed <u64>] [--trials <n>]
//   cpofdm validate --config <file>
//   cpofdm design --config <file> [--out <dir>]
//
// Exit codes: 0 success, 2 invalid config, 3 numerical guard, 4 I/O.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cpofdm/analysis.hpp"
#include "cpofdm/config.hpp"
#include "cpofdm/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Loaded {
  std::optional<cpofdm::RunConfig> config;
  int exit_code = 0;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot open config\n";
    return {std::nullopt, kExitIo};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto result = cpofdm::load_config(buf.str());
  for (const auto& d : result.diagnostics) std::cerr << d.format(path) << "\n";
  if (!result.config) return {std::nullopt, kExitConfig};
  return {std::move(result.config), 0};
}

// Re-validates after command-line overrides and refreshes the config hash.
int apply_overrides(cpofdm::RunConfig& cfg, const std::string& path) {
  const auto diags = cpofdm::validate(cfg);
  for (const auto& d : diags) std::cerr << d.format(path) << "\n";
  if (!diags.empty()) return kExitConfig;
  cfg.canonical = cpofdm::canonical_json(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CP-OFDM co-located MIMO radar: waveform design and IRCI-free range reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  auto* run_cmd = app.add_subcommand("run", "Run the configured experiment");
  run_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the noise seed");
  auto* trials_opt = run_cmd->add_option("--trials", trials, "Override the Monte-Carlo trial count");

  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration");
  validate_cmd->add_option("--config", config_path, "JSON run configuration")->required();

  auto* design_cmd = app.add_subcommand("design", "Emit the transmit waveforms as CSV");
  design_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  design_cmd->add_option("--out", out_dir, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto loaded = load(config_path);
  if (!loaded.config) return loaded.exit_code;
  auto& cfg = *loaded.config;

  if (*validate_cmd) {
    std::cout << config_path << ": ok (config_hash=" << cfg.hash_hex() << ")\n";
    return 0;
  }

  try {
    if (*design_cmd) {
      const auto csv = cpofdm::waveform_csv(cfg);
      if (out_dir.empty()) {
        std::cout << csv;
        return 0;
      }
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      const auto path = std::filesystem::path(out_dir) / "waveforms.csv";
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << csv;
      out.close();
      if (ec || !out) throw cpofdm::IoError("cannot write " + path.string());
      std::cout << path.string() << "\n";
      return 0;
    }

    if (*seed_opt) cfg.seed = seed;
    if (*trials_opt) cfg.trials = trials;
    if (const int rc = apply_overrides(cfg, config_path); rc != 0) return rc;
    for (const auto& f : cpofdm::run(cfg, out_dir)) std::cout << f.string() << "\n";
    return 0;
  } catch (const cpofdm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cpofdm::SpectrumSingularError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const cpofdm::DegenerateError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
}
