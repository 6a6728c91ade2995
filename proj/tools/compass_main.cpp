#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "compass/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bipartite compass states: construction, Wigner slices, tiles, protocol and sensitivity."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string method;
  bool quiet = false;

  for (auto name : compass::kCommands) {
    auto* sub = app.add_subcommand(std::string(name));
    sub->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides the config's \"output\")");
    sub->add_option("--method", method, "Wigner evaluation method")
        ->check(CLI::IsMember({"analytic", "numeric", "mesoscopic"}));
    sub->add_flag("--quiet", quiet, "do not print the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    auto cfg = compass::load_config(config_path);
    if (!method.empty()) cfg.method = compass::parse_method(method);
    const auto out = compass::run_command(command, cfg);
    compass::write_outputs(out, out_dir.empty() ? cfg.output : out_dir);
    if (!quiet) std::cout << out.report;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "compass " << command << ": " << e.what() << "\n";
    return compass::exit_code_for(e);
  }
}
