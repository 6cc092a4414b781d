// fpsop: evaluate norms, products and boundedness certificates for weighted
// formal power series. Reports are JSON on stdout (or --out).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fpsop/cli.hpp"
#include "fpsop/errors.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kInvalid = 3, kResource = 4 };

int fail(int code, const std::string& what) {
  std::cerr << "fpsop: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted formal power series and substitution operators"};
  app.set_version_flag("--version", "fpsop 0.1.0");

  std::string command;
  std::string config_path;
  std::string out_path;
  std::string theorem;
  std::uint64_t seed = 0;
  bool quiet = false;
  bool timing = false;

  app.add_option("command", command, "norm | product | compose | theta | bound | estimate | check-algebra")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--theorem", theorem, "thm21 | thm22 | thm23 | cor24 | thm25 | cor26 (bound only)");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--quiet", quiet, "omit the config echo from the report");
  app.add_flag("--timing", timing, "include elapsed_ms in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const auto cmd = fpsop::cli::parse_command(command);
    const auto config = fpsop::cli::load_config(config_path);
    fpsop::cli::RunOptions options;
    if (!theorem.empty()) options.theorem = theorem;
    options.quiet = quiet;
    options.timing = timing;
    if (*seed_opt) options.seed = seed;

    const std::string report = fpsop::cli::run(cmd, config, options);
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) return fail(kOther, "cannot write '" + out_path + "'");
      out << report;
    }
    return kOk;
  } catch (const fpsop::cli::UsageError& e) {
    return fail(kUsage, e.what());
  } catch (const fpsop::cli::ParseError& e) {
    return fail(kInvalid, e.what());
  } catch (const fpsop::ValidationError& e) {
    return fail(kInvalid, e.what());
  } catch (const fpsop::ResourceError& e) {
    return fail(kResource, e.what());
  } catch (const std::exception& e) {
    return fail(kOther, e.what());
  }
}
