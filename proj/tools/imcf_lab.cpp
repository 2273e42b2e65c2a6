// imcf_lab: run configured IMCF experiments and built-in identity suites.
// Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage or config error.

#include <iostream>

#include "CLI11.hpp"
#include "imcf/experiment.hpp"

namespace {

int finish(const imcf::lab::ExperimentResult& res, bool quiet) {
  const auto files = imcf::lab::write_outputs(res);
  if (!quiet) std::cout << imcf::lab::emit_report(res);
  std::cout << "wrote " << files.size() << " files to " << imcf::lab::output_directory(res.config).string() << "\n";
  return res.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMCF numerical laboratory"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int threads = -1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "override the config's output directory");
  run->add_option("-j,--threads", threads, "worker threads (0: all cores)");
  run->add_flag("-q,--quiet", quiet, "only print the output location");

  std::string suite_name = "all";
  auto* suite = app.add_subcommand("suite", "run the built-in identity suites");
  suite->add_option("name", suite_name, "euclidean | schwarzschild | rotsym | all")
      ->check(CLI::IsMember({"euclidean", "schwarzschild", "rotsym", "all"}));
  suite->add_option("-o,--output-dir", output_dir, "output directory");
  suite->add_flag("-q,--quiet", quiet, "only print the output location");

  app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("version")) {
      std::cout << "imcf_lab " << imcf::lab::kVersion << " (csv schema " << imcf::lab::kCsvSchema << ")\n";
      return 0;
    }
    if (app.got_subcommand("run")) {
      auto cfg = imcf::lab::load_config(config_path);
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      if (threads >= 0) cfg.threads = threads;
      return finish(imcf::lab::run_experiment(cfg), quiet);
    }
    int code = 0;
    for (auto cfg : imcf::lab::builtin_suite(suite_name)) {
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      code = std::max(code, finish(imcf::lab::run_experiment(cfg), quiet));
    }
    return code;
  } catch (const imcf::lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
