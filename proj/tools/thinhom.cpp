// thinhom <command> --config <path> [--out <dir>] [--format csv|gnuplot]
//
// Thread count for epsilon sweeps comes from THINHOM_THREADS.

#include "thinhom/commands.hpp"
#include "thinhom/config.hpp"
#include "thinhom/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int thread_count() {
  const char* env = std::getenv("THINHOM_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1 || n > 1024)
    throw thinhom::ConfigError("cli", "THINHOM_THREADS must be a positive integer");
  return static_cast<int>(n);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw thinhom::ConfigError("cli", "cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenization of thin domains with oscillating boundaries"};
  app.require_subcommand(1, 1);

  std::string config;
  thinhom::CommandFlags flags;
  std::string out, format;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"solve2d", "Solve the rescaled thin-domain problem at study.eps"},
      {"solve1d", "Solve the homogenized 1D problem"},
      {"homogenize", "Write the limit coefficients a, c and fhat"},
      {"cell", "Fourier cell solution: decay profile and energies"},
      {"eigen", "First mixed eigenvalue of the reference cell"},
      {"converge", "Epsilon sweep against the homogenized solution"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Configuration file")->required();
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "gnuplot"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli: " << e.what() << '\n';
    return 2;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    if (!out.empty()) flags.out = out;
    if (!format.empty()) flags.format = format;
    flags.threads = thread_count();
    const thinhom::RunConfig cfg = thinhom::parse_config(read_text(config));
    return thinhom::dispatch(command, cfg, flags, std::cerr);
  } catch (const thinhom::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: cli: " << e.what() << '\n';
  }
  return 1;
}
