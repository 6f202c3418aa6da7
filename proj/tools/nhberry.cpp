#include <CLI11.hpp>

#include "nhb/run.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void print_error_record(const nhb::Error& e) {
  // Machine-readable error on stderr, one JSON object per line.
  std::cerr << "{\"error\":{\"kind\":\"" << nhb::error_kind_name(e.kind())
            << "\",\"message\":\"" << e.what() << "\"}}" << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nhberry: geometry of non-Hermitian eigenbundles - metric, covariant "
      "Berry connection, curvature, holonomies, Chern numbers"};

  std::string config_path;
  std::string output_path;
  std::string format;
  int workers = -1;
  long long seed = -1;
  bool verbose = false;

  app.add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  app.add_option("--output", output_path, "output file path (overrides config)");
  app.add_option("--format", format, "output format: json|csv (overrides config)");
  app.add_option("--workers", workers, "worker count (overrides config)");
  app.add_option("--seed", seed, "seed (overrides config)");
  app.add_flag("--verbose", verbose, "chatty progress on stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in.good())
      throw nhb::Error(nhb::ErrorKind::ParseError,
                       "cannot open config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto cfg = nhb::config::parse_config(buf.str());

    if (!output_path.empty()) cfg.output.path = output_path;
    if (!format.empty()) {
      if (format == "json") cfg.output.format = nhb::config::OutputFormat::Json;
      else if (format == "csv") cfg.output.format = nhb::config::OutputFormat::Csv;
      else throw nhb::Error(nhb::ErrorKind::ValidationError,
                            "--format expects json or csv");
    }
    if (workers >= 0) cfg.workers = workers;
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);

    return nhb::run::execute(cfg, std::cout, verbose);
  } catch (const nhb::Error& e) {
    print_error_record(e);
    return e.is_config_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":{\"kind\":\"Internal\",\"message\":\"" << e.what()
              << "\"}}" << std::endl;
    return 3;
  }
}
