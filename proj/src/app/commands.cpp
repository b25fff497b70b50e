#include "pcs/app/commands.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pcs/app/output.hpp"
#include "pcs/build_id.hpp"
#include "pcs/fidelity.hpp"
#include "pcs/integrator.hpp"
#include "pcs/measurement.hpp"

namespace pcs::app {

namespace {

using nlohmann::json;

constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct Setup {
  OscillatorParams params;
  Cutoff cutoff;
  SuperOperator L;
  EvolveControls controls;
  std::string scheme;
};

Setup prepare(const RunConfig& config) {
  const OscillatorParams params = config.oscillator();
  const Cutoff cutoff(config.n_max);
  // Every run starts from the two-mode vacuum, which lives in the pair-difference sector.
  SuperOperator L = build(params, cutoff, Sector::pair_difference);
  EvolveControls controls;
  controls.t_end = config.t_end;
  controls.record_every = config.record_interval();
  controls.max_leakage = config.max_leakage;
  std::string scheme;
  if (config.rel_tol) {
    controls.stepping = AdaptiveStep{*config.rel_tol};
    scheme = "rk4-step-doubling rel_tol=" + format_number(*config.rel_tol);
  } else {
    const double dt = config.dt.value_or(stable_time_step(L));
    controls.stepping = FixedStep{dt};
    scheme = "rk4-fixed dt=" + format_number(dt);
  }
  return {params, cutoff, std::move(L), controls, scheme};
}

Metadata metadata(const RunConfig& config, const std::string& scheme, const Cutoff& cutoff) {
  Metadata m = config.echo();
  m.emplace_back("basis", "two-mode Fock n_max=" + std::to_string(cutoff.n_max()) + " (" +
                              std::to_string(cutoff.pair_dim()) + " pair states)");
  m.emplace_back("scheme", scheme);
  m.emplace_back("time_unit", "tau = gamma t");
  m.emplace_back("build_id", kBuildId);
  return m;
}

json metadata_json(const Metadata& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

TwoModeDensityMatrix vacuum(const Cutoff& cutoff) {
  TwoModeDensityMatrix rho(cutoff);
  rho(0, 0, 0, 0) = 1.0;
  return rho;
}

QuadratureGrid make_grid(const RunConfig& config) {
  return QuadratureGrid::uniform(config.grid.min, config.grid.max, config.grid.points);
}

double argmax_x(const DistributionSeries& p) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.values.size(); ++k)
    if (p.values[k] > p.values[best]) best = k;
  return p.grid.points[best];
}

double mean_signal_photons(const TwoModeDensityMatrix& rho) {
  const int d = rho.cutoff().dim();
  double s = 0.0;
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2) s += n1 * rho(n1, n2, n1, n2).real();
  return s;
}

void write_surface(std::ostream& os, const Metadata& meta, const std::vector<DistributionSeries>& rows) {
  write_header(os, meta);
  os << "tau,x,P\n";
  for (const auto& p : rows)
    for (std::size_t k = 0; k < p.values.size(); ++k) os << shortest(p.tau) << ',' << shortest(p.grid.points[k]) << ',' << shortest(p.values[k]) << '\n';
}

void write_observables(std::ostream& os, const Metadata& meta, const Trajectory& traj) {
  write_header(os, meta);
  const auto& first = traj.records.front().observables.items();
  os << "tau";
  for (const auto& [k, v] : first) os << ',' << k;
  os << '\n';
  for (const auto& rec : traj.records) {
    os << shortest(rec.tau);
    for (const auto& [k, v] : first) {
      os << ',';
      if (auto x = rec.observables.get(k)) os << shortest(*x);
    }
    os << '\n';
  }
}

json record_json(const FidelityRecord& r) {
  return {{"tau", r.tau}, {"f_overlap", r.f_overlap}, {"f_sqrt", r.f_sqrt}};
}

}  // namespace

json cmd_ideal_distributions(const RunConfig& config) {
  config.validate();
  const Cutoff cutoff(config.n_max);
  const double r0 = config.circle_r0();
  const auto grid = make_grid(config);
  const auto rho = pure_to_density(circle_state({r0}, cutoff));
  const auto cond = condition_on_idler(rho, 0.0, 0.0);

  Metadata meta = metadata(config, "none (ideal state)", cutoff);
  meta.emplace_back("r0", format_number(r0));
  json summary{{"command", "ideal-distributions"}, {"r0", r0}, {"conditioning_weight", cond.weight}};
  for (const auto& [name, theta] : {std::pair{"x0", 0.0}, std::pair{"xpi2", kHalfPi}}) {
    auto p = signal_distribution(cond.normalized, theta, grid);
    p.normalization = cond.weight;
    auto out = open_output(config.out_dir, config.experiment + "_ideal_" + name + ".csv");
    write_csv(out, p, meta);
    summary[std::string("visibility_") + name] = fringe_visibility(p);
    summary[std::string("peak_") + name] = std::abs(argmax_x(p));
  }
  summary["metadata"] = metadata_json(meta);
  write_json(config.out_dir, config.experiment + "_ideal_summary.json", summary);
  return summary;
}

json cmd_evolve(const RunConfig& config) {
  Setup s = prepare(config);
  const auto grid = make_grid(config);
  std::vector<DistributionSeries> surface_x0;
  std::vector<DistributionSeries> surface_xpi2;

  std::vector<Observer> observers;
  observers.emplace_back([](double, const TwoModeDensityMatrix& rho, ObservableSet& out) {
    out.set("n_signal", mean_signal_photons(rho));
  });
  observers.emplace_back([&](double tau, const TwoModeDensityMatrix& rho, ObservableSet& out) {
    try {
      const auto cond = condition_on_idler(rho, 0.0, 0.0);
      auto px = signal_distribution(cond.normalized, 0.0, grid);
      auto pp = signal_distribution(cond.normalized, kHalfPi, grid);
      for (auto* p : {&px, &pp}) {
        p->tau = tau;
        p->normalization = cond.weight;
      }
      out.set("cond_weight", cond.weight);
      out.set("vis_x0", fringe_visibility(px));
      out.set("vis_xpi2", fringe_visibility(pp));
      surface_x0.push_back(std::move(px));
      surface_xpi2.push_back(std::move(pp));
    } catch (const NullConditioning&) {
      out.set("cond_weight", 0.0);
    }
  });

  const auto traj = evolve(s.L, vacuum(s.cutoff), s.controls, observers);
  const Metadata meta = metadata(config, s.scheme, s.cutoff);
  {
    auto out = open_output(config.out_dir, config.experiment + "_observables.csv");
    write_observables(out, meta, traj);
  }
  {
    Metadata m = meta;
    m.emplace_back("quadrature", "signal X_0 conditioned on idler X_0 = 0");
    auto out = open_output(config.out_dir, config.experiment + "_px0.csv");
    write_surface(out, m, surface_x0);
  }
  {
    Metadata m = meta;
    m.emplace_back("quadrature", "signal X_pi/2 conditioned on idler X_0 = 0");
    auto out = open_output(config.out_dir, config.experiment + "_pxpi2.csv");
    write_surface(out, m, surface_xpi2);
  }

  json summary{{"command", "evolve"}, {"lambda", s.params.lambda}, {"g2", s.params.g2}};
  for (const char* name : {"vis_x0", "vis_xpi2"}) {
    double best = -1.0;
    double at = 0.0;
    for (const auto& [tau, v] : traj.series(name))
      if (v > best) best = v, at = tau;
    summary[std::string("max_") + name] = {{"value", best}, {"tau", at}};
  }
  const auto& last = traj.records.back().observables;
  summary["final"] = {{"tau", traj.records.back().tau},
                      {"trace", last.get("trace").value_or(0.0)},
                      {"hermiticity_defect", last.get("hermiticity_defect").value_or(0.0)},
                      {"leakage", last.get("leakage").value_or(0.0)}};
  summary["steps"] = {{"accepted", traj.steps.accepted}, {"rejected", traj.steps.rejected}};
  summary["metadata"] = metadata_json(meta);
  write_json(config.out_dir, config.experiment + "_summary.json", summary);
  return summary;
}

json cmd_fidelity(const RunConfig& config) {
  Setup s = prepare(config);
  const double r0 = config.circle_r0();
  const bool cat = config.reference == "cat";
  std::vector<Observer> observers{cat ? cat_fidelity_observer(r0, s.cutoff, "f") : circle_fidelity_observer(r0, s.cutoff, "f")};
  const auto traj = evolve(s.L, vacuum(s.cutoff), s.controls, observers);
  const auto series = fidelity_series_from_observables(traj, "f");

  Metadata meta = metadata(config, s.scheme, s.cutoff);
  meta.emplace_back("reference_radius", format_number(r0));
  meta.emplace_back("reference_state", cat ? "cat |i r0> + |-i r0> vs signal conditioned on idler X_0 = 0"
                                           : "pair-coherent circle state r0");
  {
    auto out = open_output(config.out_dir, config.experiment + "_fidelity.csv");
    write_header(out, meta);
    write_csv(out, series);
  }
  json summary{{"command", "fidelity"},
               {"reference", config.reference},
               {"r0", r0},
               {"mapping", to_string(config.mapping)},
               {"lambda", s.params.lambda},
               {"g2", s.params.g2},
               {"max", record_json(series.best)},
               {"conventions", {"f_overlap = <psi|rho|psi>", "f_sqrt = sqrt(f_overlap)"}},
               {"skipped", series.skipped.size()},
               {"steps", {{"accepted", traj.steps.accepted}, {"rejected", traj.steps.rejected}}},
               {"metadata", metadata_json(meta)}};
  write_json(config.out_dir, config.experiment + "_fidelity_summary.json", summary);
  return summary;
}

json cmd_sweep(const RunConfig& config) {
  if (config.g2_list.empty()) throw std::invalid_argument("sweep needs g2-list");
  std::vector<std::future<json>> jobs;
  for (double g2 : config.g2_list) {
    RunConfig c = config;
    c.g2 = g2;
    c.g2_list.clear();
    c.experiment = config.experiment + "_g2_" + format_number(g2);
    c.out_dir = (std::filesystem::path(config.out_dir) / c.experiment).string();
    jobs.push_back(std::async(std::launch::async, [c] { return cmd_fidelity(c); }));
  }
  json runs = json::array();
  for (auto& j : jobs) runs.push_back(j.get());
  json summary{{"command", "sweep"}, {"runs", runs}, {"metadata", metadata_json(config.echo())}};
  write_json(config.out_dir, config.experiment + "_sweep_summary.json", summary);
  return summary;
}

json cmd_export_liouvillian(const RunConfig& config) {
  const auto params = config.oscillator();
  const Cutoff cutoff(config.n_max);
  const auto L = build(params, cutoff, Sector::full);
  const std::string name = config.experiment + "_liouvillian.txt";
  {
    auto out = open_output(config.out_dir, name);
    write_header(out, metadata(config, "none", cutoff));
    write_triples(out, L);
  }
  return {{"command", "export-liouvillian"}, {"file", name}, {"nnz", L.nnz()}, {"rows", L.size()}};
}

}  // namespace pcs::app
