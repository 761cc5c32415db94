#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "towpde/runner.hpp"

namespace {

// Exit codes: 0 success, 2 validation/config error, 3 numerical failure.
int dispatch(const std::string& subcommand, const std::string& config_path,
             const std::string& out_dir, uint64_t seed, bool seed_given, int threads,
             bool quiet) {
  towpde::RunRequest request;
  request.config.subcommand = subcommand;
  request.config.config_path = config_path;
  request.config.out_dir = out_dir;
  request.config.seed = seed;
  request.config.threads = threads;
  request.config.quiet = quiet;
  request.seed_from_cli = seed_given;
  try {
    request.config.ini = towpde::IniDoc::parse_file(config_path);
    towpde::run(request);
  } catch (const towpde::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const towpde::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"towpde - tug-of-war with noise: DPP solvers, game simulation, analysis"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  uint64_t seed = 42;
  int threads = 0;
  bool quiet = false;

  if (const char* env = std::getenv("TOWPDE_THREADS")) {
    threads = std::atoi(env);
    if (threads < 0) threads = 0;
  }

  bool seed_given = false;
  const char* names[] = {"solve", "elliptic", "simulate", "exit-time",
                         "asymptotics", "converge", "scan"};
  const char* blurbs[] = {
      "march the parabolic dynamic programming principle",
      "solve the time-independent dynamic programming principle",
      "Monte Carlo game values with greedy strategies",
      "expected exit step count of the radial annulus game",
      "long-time comparison against the time-independent solution",
      "sup-error table against a reference solution over a step-size list",
      "boundary modulus constants from sampled point pairs"};
  for (int i = 0; i < 7; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--seed", seed, "override the Monte Carlo master seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "worker thread cap (0 = hardware)");
    sub->add_flag("--quiet", quiet, "suppress the completion line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  return dispatch(app.get_subcommands().front()->get_name(), config_path, out_dir, seed,
                  seed_given, threads, quiet);
}
