#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcs/app/commands.hpp"
#include "pcs/app/config.hpp"

using namespace pcs;
using namespace pcs::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pcs_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + '\n';
  return out;
}

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.g2 = 10.0;
  c.ratio = 1.5;
  c.n_max = 8;
  c.t_end = 0.02;
  c.record_every = 0.005;
  c.grid = {-5.0, 5.0, 41};
  c.out_dir = out.string();
  c.experiment = "t";
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PCS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config file grammar") {
  std::istringstream in("# comment\n\ng2 = 300\nratio=1.5\n  nmax = 12  \nmapping = linear\ng2-list = 3, 10,300\n");
  const auto c = parse_config(in);
  CHECK(*c.g2 == 300.0);
  CHECK(*c.ratio == 1.5);
  CHECK(c.n_max == 12);
  CHECK(c.mapping == RadiusMapping::linear);
  CHECK(c.g2_list == std::vector<double>{3.0, 10.0, 300.0});
  CHECK(c.oscillator().lambda == doctest::Approx(450.0));

  std::istringstream unknown("speed = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
  std::istringstream no_eq("g2 300\n");
  CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);
  std::istringstream bad_number("g2 = 3x\n");
  CHECK_THROWS_AS(parse_config(bad_number), std::invalid_argument);
  std::istringstream bad_int("nmax = 2.5\n");
  CHECK_THROWS_AS(parse_config(bad_int), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/pcs.cfg"), std::runtime_error);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.g2 = 10.0;
  CHECK_THROWS_AS(c.oscillator(), std::invalid_argument);
  c.lambda = 5.0;
  c.ratio = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.ratio.reset();
  CHECK(c.oscillator().lambda == 5.0);
  c.dt = 1e-3;
  c.rel_tol = 1e-8;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rel_tol.reset();
  c.reference = "square";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("crystal presets") {
  RunConfig c;
  c.preset = "KTP";
  CHECK_THROWS_AS(c.oscillator(), std::invalid_argument);
  c.gamma3 = 1e10;
  c.epsilon = 2e12;
  const auto p = c.oscillator();
  CHECK(p.g2 == doctest::Approx(7.6e3 * 7.6e3 / (1e10 * 7.5e8)));
  CHECK(p.lambda == doctest::Approx(2e12 * 7.6e3 / (1e10 * 7.5e8)));
  c.g2 = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.g2.reset();
  c.preset = "quartz";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(find_preset("AgGaSe2").kappa == 4.4e4);
}

TEST_CASE("reference radius") {
  RunConfig c;
  c.ratio = 1.5;
  CHECK(c.circle_r0() == doctest::Approx(std::sqrt(1.5)));
  c.mapping = RadiusMapping::linear;
  CHECK(c.circle_r0() == 1.5);
  c.r0 = 0.7;
  CHECK(c.circle_r0() == 0.7);
}

TEST_CASE("echo round-trips through the file grammar") {
  RunConfig c = small_run("out");
  c.set("dt", "0.0005");
  std::ostringstream os;
  for (const auto& [k, v] : c.echo()) os << k << " = " << v << "\n";
  std::istringstream in(os.str());
  const auto back = parse_config(in);
  CHECK(back.echo() == c.echo());
}

TEST_CASE("ideal distributions") {
  const auto dir = scratch("ideal");
  RunConfig c;
  c.out_dir = dir.string();
  c.mapping = RadiusMapping::linear;

  c.ratio = 1.5;
  const auto strong = cmd_ideal_distributions(c);
  c.ratio = 1.12;
  const auto weak = cmd_ideal_distributions(c);
  CHECK(weak["visibility_x0"].get<double>() < strong["visibility_x0"].get<double>());
  c.ratio = 0.0;
  const auto vac = cmd_ideal_distributions(c);
  CHECK(vac["visibility_x0"].get<double>() == 0.0);
  CHECK(vac["visibility_xpi2"].get<double>() == 0.0);

  for (const char* f : {"run_ideal_x0.csv", "run_ideal_xpi2.csv", "run_ideal_summary.json"}) CHECK(fs::exists(dir / f));
  const auto text = slurp(dir / "run_ideal_x0.csv");
  CHECK(text.find("# build_id=") != std::string::npos);
  CHECK(text.find("# nmax=20") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("fixed-step reruns are byte-identical") {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  auto ca = small_run(a);
  auto cb = small_run(b);
  cb.out_dir = ca.out_dir;
  cmd_evolve(ca);
  cmd_fidelity(ca);
  const auto first_obs = slurp(a / "t_observables.csv");
  const auto first_px = slurp(a / "t_px0.csv");
  const auto first_f = slurp(a / "t_fidelity.csv");
  cb.out_dir = b.string();
  cmd_evolve(cb);
  cmd_fidelity(cb);
  // Headers differ only in the output directory, which is not echoed; bodies must match exactly.
  CHECK(slurp(b / "t_observables.csv") == first_obs);
  CHECK(slurp(b / "t_px0.csv") == first_px);
  CHECK(slurp(b / "t_fidelity.csv") == first_f);
  CHECK(!body(first_f).empty());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("evolve summary and observables") {
  const auto dir = scratch("evolve");
  const auto s = cmd_evolve(small_run(dir));
  CHECK(std::abs(s["final"]["trace"].get<double>() - 1.0) < 1e-6);
  CHECK(s["final"]["tau"].get<double>() == doctest::Approx(0.02));
  const auto text = slurp(dir / "t_observables.csv");
  CHECK(text.find("tau,trace,hermiticity_defect,leakage,n_signal,cond_weight,vis_x0,vis_xpi2\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sweep writes one directory per run") {
  const auto dir = scratch("sweep");
  auto c = small_run(dir);
  c.g2_list = {3.0, 10.0};
  c.reference = "cat";
  const auto s = cmd_sweep(c);
  CHECK(s["runs"].size() == 2);
  CHECK(fs::exists(dir / "t_g2_3" / "t_g2_3_fidelity.csv"));
  CHECK(fs::exists(dir / "t_g2_10" / "t_g2_10_fidelity_summary.json"));
  CHECK(fs::exists(dir / "t_sweep_summary.json"));
  c.g2_list.clear();
  CHECK_THROWS_AS(cmd_sweep(c), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("liouvillian export") {
  const auto dir = scratch("export");
  auto c = small_run(dir);
  c.n_max = 2;
  const auto s = cmd_export_liouvillian(c);
  CHECK(s["rows"].get<std::size_t>() == 81);
  CHECK(fs::exists(dir / "t_liouvillian.txt"));
  fs::remove_all(dir);
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("exe");
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("ideal-distributions --ratio 1.5" + out) == 0);
  CHECK(run_cli("fidelity --g2 10 --ratio 1.5 --nmax 6 --t-end 0.01" + out) == 0);
  CHECK(run_cli("evolve --g2 10 --ratio 1.5 --lambda 3" + out) != 0);
  CHECK(run_cli("evolve --g2 10" + out) != 0);
  CHECK(run_cli("bogus") != 0);
  // A two-level basis cannot hold the pumped state: the run aborts on leakage.
  CHECK(run_cli("evolve --g2 1 --ratio 3 --nmax 2 --t-end 1" + out) != 0);

  std::ofstream(dir / "base.cfg") << "g2 = 10\nratio = 1.5\nnmax = 30\n";
  CHECK(run_cli("fidelity --config " + (dir / "base.cfg").string() + " --nmax 6 --t-end 0.01 --experiment cfg" + out) == 0);
  CHECK(slurp(dir / "cfg_fidelity.csv").find("# nmax=6\n") != std::string::npos);
  fs::remove_all(dir);
}
