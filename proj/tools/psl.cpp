#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "psl/error.hpp"
#include "psl/parallel.hpp"
#include "psl/scenario.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string output_dir(const std::string& flag, const psl::ScenarioConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output.empty()) return c.output;
  if (const char* env = std::getenv("PSL_OUT_DIR"); env && *env) return env;
  return ".";
}

int do_validate(const std::string& path) {
  nlohmann::json j;
  try {
    j = psl::read_config_file(path);
  } catch (const psl::FormatError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  const auto errors = psl::validate_config(j);
  for (const auto& e : errors) std::cout << path << ": " << e << '\n';
  if (errors.empty()) std::cout << path << ": ok\n";
  return errors.empty() ? 0 : kExitConfig;
}

int do_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out) {
  psl::ScenarioConfig config;
  try {
    auto j = psl::read_config_file(path);
    if (seed) j["seed"] = *seed;
    config = psl::parse_config(j);
  } catch (const psl::FormatError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const psl::ConfigError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const psl::RunResult r = psl::run(config);
    for (const auto& f : psl::write_outputs(r, output_dir(out, config))) std::cout << "wrote " << f << '\n';
    for (const auto& row : r.rows)
      if (!row.pass) std::cout << "FAIL " << row.param() << " measured " << row.measured
                               << " predicted " << row.predicted << '\n';
    std::cout << config.scenario << ": " << (r.passed ? "pass" : "fail") << " in " << std::fixed
              << std::setprecision(2) << r.wall_seconds << " s\n";
    return r.passed ? 0 : kExitFail;
  } catch (const psl::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space concentration experiments"};
  app.require_subcommand(1);
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  auto* run = app.add_subcommand("run", "run one scenario config");
  std::string run_path;
  run->add_option("config", run_path)->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out, "output directory (else config output, $PSL_OUT_DIR, .)");
  run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  auto* validate = app.add_subcommand("validate", "list schema violations");
  std::string validate_path;
  validate->add_option("config", validate_path)->required();

  app.add_subcommand("list-scenarios", "print the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  psl::set_thread_count(threads);

  if (*run) return do_run(run_path, seed, out);
  if (*validate) return do_validate(validate_path);
  for (const auto& name : psl::scenario_names()) std::cout << name << '\n';
  return 0;
}
