// Command-line front end: runs the oscillator experiments and writes CSV/JSON data files.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcs/app/commands.hpp"
#include "pcs/app/config.hpp"
#include "pcs/integrator.hpp"

namespace {

struct Flag {
  const char* key;
  const char* help;
};

const std::vector<Flag> kFlags{
    {"g2", "scaled two-photon loss g^2 = kappa^2/(gamma_3 gamma)"},
    {"ratio", "pump ratio lambda/g^2 (exclusive with --lambda)"},
    {"lambda", "scaled pump lambda = epsilon kappa/(gamma_3 gamma)"},
    {"preset", "crystal preset: AgGaSe2 or KTP (needs --gamma3 and --epsilon)"},
    {"gamma3", "pump-mode decay rate in s^-1, used with --preset"},
    {"epsilon", "pump field amplitude in s^-1, used with --preset"},
    {"nmax", "highest Fock level per mode (default 20)"},
    {"t-end", "final scaled time tau (default 0.2)"},
    {"dt", "fixed RK4 step (default: stability bound of the generator)"},
    {"rel-tol", "use step doubling with this local tolerance instead of a fixed step"},
    {"record-every", "observer sampling interval (default t-end/200)"},
    {"grid-min", "lowest quadrature sample (default -6)"},
    {"grid-max", "highest quadrature sample (default 6)"},
    {"grid-points", "number of quadrature samples (default 241)"},
    {"out", "output directory (default .)"},
    {"experiment", "name prefix for output files (default run)"},
    {"mapping", "lambda/g^2 to circle radius: dark-state (r0^2 = lambda/g^2, default) or linear"},
    {"r0", "reference circle radius, overrides the mapping"},
    {"reference", "fidelity reference: circle or cat"},
    {"max-leakage", "abort when the top-shell population exceeds this (default 1e-6)"},
    {"g2-list", "comma-separated g^2 values for sweep"},
};

struct Subcommand {
  CLI::App* app;
  std::string config_file;
  std::map<std::string, std::string> values;
};

void add_flags(Subcommand& s) {
  s.app->add_option("--config", s.config_file, "key = value configuration file; flags override it");
  for (const auto& f : kFlags) s.app->add_option(std::string("--") + f.key, s.values[f.key], f.help);
}

pcs::app::RunConfig resolve(const Subcommand& s) {
  pcs::app::RunConfig config = s.config_file.empty() ? pcs::app::RunConfig{} : pcs::app::load_config(s.config_file);
  for (const auto& f : kFlags) {
    if (s.app->count(std::string("--") + f.key) > 0) config.set(f.key, s.values.at(f.key));
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pair-coherent state generation in the non-degenerate parametric oscillator"};
  app.require_subcommand(1);

  std::vector<std::pair<std::string, std::string>> specs{
      {"ideal-distributions", "conditional quadrature distributions of the ideal circle state"},
      {"evolve", "evolve from vacuum and write conditional distributions and diagnostics"},
      {"fidelity", "evolve from vacuum and write the fidelity against a circle or cat reference"},
      {"sweep", "fidelity runs for every g^2 in --g2-list, concurrently"},
      {"export-liouvillian", "write the sparse generator as row/col/value triples"},
  };
  std::vector<Subcommand> subs;
  subs.reserve(specs.size());
  for (const auto& [name, help] : specs) {
    subs.push_back({app.add_subcommand(name, help), {}, {}});
    add_flags(subs.back());
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& s : subs) {
      if (!s.app->parsed()) continue;
      const auto config = resolve(s);
      nlohmann::json summary;
      const std::string name = s.app->get_name();
      if (name == "ideal-distributions") summary = pcs::app::cmd_ideal_distributions(config);
      else if (name == "evolve") summary = pcs::app::cmd_evolve(config);
      else if (name == "fidelity") summary = pcs::app::cmd_fidelity(config);
      else if (name == "sweep") summary = pcs::app::cmd_sweep(config);
      else summary = pcs::app::cmd_export_liouvillian(config);
      summary.erase("metadata");
      std::cout << summary.dump() << "\n";
    }
  } catch (const pcs::EvolutionAborted& e) {
    std::cerr << "evolution aborted at tau=" << e.tau() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
