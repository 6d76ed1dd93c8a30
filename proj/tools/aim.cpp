// Command-line front end: aim <task> [--config file.json] [overrides]

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "aim/runner.hpp"

namespace {

std::pair<int, int> parse_sites(const std::string& s) {
  std::istringstream is(s);
  int i = 0, b = 0;
  char comma = 0;
  if (!(is >> i >> comma >> b) || comma != ',' || !is.eof()) throw aim::ConfigError("sites: expected I,B");
  return {i, b};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson impurity model toolkit"};
  app.require_subcommand(1, 1);

  std::string config_path, sites, out;
  std::uint64_t seed = 0, shots = 0;
  int depth = 0, jobs = 0;
  double delta = 0, eta = 0;
  bool post_select = false;

  for (const char* name : {"gen", "ed", "vqe", "sweep", "greens", "correlator", "measure-plan"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "single seed, replaces the seed list");
    sub->add_option("--sites", sites, "impurity and bath counts as I,B");
    sub->add_option("--depth", depth, "fixed ansatz depth");
    sub->add_option("--delta", delta, "overlap-error target");
    sub->add_option("--eta", eta, "broadening");
    sub->add_option("--shots", shots, "shots per circuit");
    sub->add_flag("--post-select", post_select, "discard shots outside the symmetry sector");
    sub->add_option("--jobs", jobs, "worker threads");
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    aim::ExperimentConfig config;
    if (!config_path.empty()) config = aim::config_from_json(aim::read_json(config_path));
    config.task = aim::task_from_string(sub->get_name());
    if (sub->count("--seed")) config.seeds = {seed};
    if (sub->count("--sites")) std::tie(config.n_imp, config.n_bath) = parse_sites(sites);
    if (sub->count("--depth")) config.depth = depth;
    if (sub->count("--delta")) config.delta_targets = {delta};
    if (sub->count("--eta")) config.eta = eta;
    if (sub->count("--shots")) config.shots = shots;
    if (post_select) config.post_select = true;
    if (sub->count("--jobs")) config.jobs = jobs;
    if (sub->count("--out")) config.out = out;
    config.validate();

    const aim::RunReport report = aim::run(config);
    for (const auto& s : report.seeds)
      if (!s.ok) std::cerr << "seed " << s.seed << ": " << s.error << '\n';
    std::cout << report.directory.string() << "/summary.csv (" << report.seeds.size() - report.failures << "/"
              << report.seeds.size() << " seeds)\n";
    return report.exit_code();
  } catch (const aim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    // unreadable or malformed config file
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
