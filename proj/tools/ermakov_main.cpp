#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ermakov/scenario.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gaussian wave packets of damped quantum systems: closed-form trajectories, "
      "widths, uncertainties, energies, Wigner grids, and a self-verification suite."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string suite = "all";
  bool inject_flip = false;
  bool fp_residual = false;
  int refine = 1;

  auto* sim =
      app.add_subcommand("simulate", "Sample one run into <name>.csv plus a JSON sidecar");
  sim->add_option("--config", config_path, "Run configuration JSON")->required();
  sim->add_option("--out", out_dir, "Output directory");

  auto* scan =
      app.add_subcommand("scan-gamma", "Initial branch energies across damping values");
  scan->add_option("--config", config_path, "Run configuration JSON with a scan block")
      ->required();
  scan->add_option("--out", out_dir, "Output directory");

  auto* verify =
      app.add_subcommand("verify", "Cross-check the closed forms against the integrators");
  verify->add_option("--suite", suite, "all or fast")
      ->check(CLI::IsMember({"all", "fast"}));
  verify->add_flag("--inject-sigma-xp-flip", inject_flip)->group("");

  auto* wig = app.add_subcommand(
      "wigner", "Dump Wigner grids and optional transport-equation residuals");
  wig->add_option("--config", config_path, "Run configuration JSON")->required();
  wig->add_option("--out", out_dir, "Output directory");
  wig->add_flag("--fp-residual", fp_residual, "Also write the residual grid");
  wig->add_option("--refine", refine, "Convergence check: divide the spacings by this factor")
      ->check(CLI::Range(1, 8));

  auto* dump = app.add_subcommand("dump-presets", "Write every bundled preset config");
  dump->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed())
    return guarded([&] {
      const auto side = ermakov::run_simulate(ermakov::load_config(config_path), out_dir);
      std::cout << side.dump(2) << "\n";
      return 0;
    });
  if (scan->parsed())
    return guarded([&] {
      const auto side = ermakov::run_scan(ermakov::load_config(config_path), out_dir);
      std::cout << side.dump(2) << "\n";
      return 0;
    });
  if (verify->parsed())
    return guarded([&] {
      ermakov::VerifyOptions options;
      options.suite = suite;
      options.inject_sigma_xp_flip = inject_flip;
      const ermakov::VerifyReport report = ermakov::run_verify(options);
      std::cout << ermakov::verify_to_json(report).dump(2) << "\n";
      return report.pass ? 0 : 1;
    });
  if (wig->parsed())
    return guarded([&] {
      ermakov::WignerOptions options;
      options.fp_residual = fp_residual;
      options.refine = refine;
      const auto report =
          ermakov::run_wigner(ermakov::load_config(config_path), options, out_dir);
      std::cout << report.dump(2) << "\n";
      return 0;
    });
  if (dump->parsed())
    return guarded([&] {
      std::filesystem::create_directories(out_dir);
      for (const auto& name : ermakov::preset_names()) {
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / (name + ".json");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << ermakov::config_to_json(ermakov::preset(name)).dump(2) << "\n";
      }
      std::cout << "wrote " << ermakov::preset_names().size() << " preset configs to "
                << out_dir << "\n";
      return 0;
    });
  return 2;
}
