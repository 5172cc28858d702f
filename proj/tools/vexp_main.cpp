// vexp <command> --config <path> [--out <dir>] [--format json|csv|svg]
//
// Exit codes: 0 all verdicts passed, 1 a verdict failed or the computation
// failed numerically, 2 usage or schema error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "vexp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent weight toolkit"};
  std::string command, config_path, out_dir, format = "json";
  std::string commands;
  for (const auto& c : vexp::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--config,-c", config_path, "JSON run configuration")->required();
  app.add_option("--out,-o", out_dir, "Output directory (default $VEXP_OUT_DIR, else .)");
  app.add_option("--format,-f", format, "json, csv or svg")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (out_dir.empty()) {
    const char* env = std::getenv("VEXP_OUT_DIR");
    out_dir = env && *env ? env : ".";
  }

  try {
    const vexp::RunConfig cfg = vexp::load_config(config_path);
    const vexp::Report rep = vexp::run_command(command, cfg);
    const std::string path = vexp::emit(rep, out_dir, vexp::parse_format(format));
    std::cout << rep.command << ": " << rep.summary.dump() << "\n";
    for (const auto& v : rep.verdicts)
      std::cout << (v.passed ? "PASS " : "FAIL ") << v.name
                << (v.passed || v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
    std::cout << "wrote " << path << " in " << rep.wall_seconds << " s\n";
    return rep.passed() ? 0 : 1;
  } catch (const vexp::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const vexp::QuadratureFailure& e) {
    std::cerr << "quadrature failure: " << e.what() << " (estimates " << e.previous_estimate
              << ", " << e.last_estimate << ")\n";
    return 1;
  } catch (const vexp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
