// Command-line driver: every experiment is a subcommand writing a JSON result
// document (plus CSV data files where applicable).  Exit codes: 0 success,
// 2 validation failure, 3 numerical-certificate failure, 4 solver
// non-convergence.

#include <CLI11.hpp>
#include <iostream>

#include "asdm/driver.hpp"

namespace {

struct CommonArgs {
  std::uint64_t seed = 0;
  std::string output;
};

void add_common(CLI::App* cmd, CommonArgs* args,
                const std::string& default_output) {
  args->output = default_output;
  cmd->add_option("--seed", args->seed, "random seed");
  cmd->add_option("--out", args->output, "output JSON path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "asdm: desk-scale boundary-contribution experiments for anti-self-dual "
      "moduli spaces"};
  app.require_subcommand(1);

  asdm::ExperimentSpec spec;
  CommonArgs common;

  // reduce
  auto* reduce = app.add_subcommand(
      "reduce", "rank-1 decomposition suite on random 3x3 matrices");
  int reduce_n = 1000;
  double reduce_gap = 1e-3;
  reduce->add_option("--n", reduce_n, "number of matrices");
  reduce->add_option("--gap-min", reduce_gap, "minimum singular value gap");
  add_common(reduce, &common, "reduce.json");
  reduce->callback([&] {
    spec.command = "reduce";
    spec.params = asdm::Json{{"n", reduce_n}, {"gap_min", reduce_gap}};
  });

  // count
  auto* count = app.add_subcommand(
      "count", "model intersection count for a generic background");
  double c_L = 1e-2, c_K = 1.0, c_alpha = 1.0, c_gap = 0.1;
  bool c_gradient = false;
  std::string c_background;
  count->add_option("--L", c_L, "half separation of the marked points");
  count->add_option("--K", c_K, "admissibility constant");
  count->add_option("--alpha", c_alpha, "admissibility exponent");
  count->add_option("--gap-min", c_gap, "background singular-value gap");
  count->add_flag("--gradient", c_gradient, "use a linearly varying background");
  count->add_option("--background", c_background,
                    "JSON file with an explicit background model");
  add_common(count, &common, "count.json");
  count->callback([&] {
    spec.command = "count";
    spec.params = asdm::Json{{"L", c_L},
                             {"K", c_K},
                             {"alpha", c_alpha},
                             {"gap_min", c_gap},
                             {"gradient", c_gradient}};
    if (!c_background.empty()) {
      std::ifstream is(c_background);
      if (!is) throw CLI::ValidationError("--background file not readable");
      spec.params["background"] = asdm::Json::parse(is);
    }
  });

  // degenerate
  auto* degen = app.add_subcommand(
      "degenerate", "counts for sigma1=sigma2 backgrounds (4 or 8)");
  double d_L = 1e-2, d_K = 1.0, d_alpha = 1.5, d_split = 1.0;
  degen->add_option("--L", d_L, "half separation");
  degen->add_option("--K", d_K, "admissibility constant");
  degen->add_option("--alpha", d_alpha, "admissibility exponent");
  degen->add_option("--split", d_split, "gradient magnitude splitting the root");
  add_common(degen, &common, "degenerate.json");
  degen->callback([&] {
    spec.command = "degenerate";
    spec.params = asdm::Json{
        {"L", d_L}, {"K", d_K}, {"alpha", d_alpha}, {"split", d_split}};
  });

  // continuation
  auto* cont = app.add_subcommand(
      "continuation", "track the solution family from t=1 to t=0");
  double n_L = 1e-2, n_scale = 1e-8, n_gap = 0.1;
  int n_bg = 5;
  std::vector<double> n_grid;
  cont->add_option("--L", n_L, "half separation");
  cont->add_option("--n-backgrounds", n_bg, "number of random backgrounds");
  cont->add_option("--bg-scale", n_scale, "background curvature scale");
  cont->add_option("--gap-min", n_gap, "background singular-value gap");
  cont->add_option("--t-grid", n_grid, "interpolation grid (must span 1..0)");
  add_common(cont, &common, "continuation.json");
  cont->callback([&] {
    spec.command = "continuation";
    spec.params = asdm::Json{{"L", n_L},
                             {"n_backgrounds", n_bg},
                             {"bg_scale", n_scale},
                             {"gap_min", n_gap}};
    if (!n_grid.empty()) spec.params["t_grid"] = n_grid;
  });

  // sensitivity
  auto* sens = app.add_subcommand(
      "sensitivity", "fit displacement exponents against eps and L");
  std::vector<double> s_eps, s_L;
  double s_gap = 0.1;
  sens->add_option("--eps-list", s_eps, "target perturbation angles");
  sens->add_option("--L-list", s_L, "separations");
  sens->add_option("--gap-min", s_gap, "background singular-value gap");
  add_common(sens, &common, "sensitivity.json");
  sens->callback([&] {
    spec.command = "sensitivity";
    spec.params = asdm::Json{{"gap_min", s_gap}};
    if (!s_eps.empty()) spec.params["eps_list"] = s_eps;
    if (!s_L.empty()) spec.params["L_list"] = s_L;
  });

  // toy
  auto* toy = app.add_subcommand("toy", "half-plane wedge integral");
  double t_L = 1.0, t_xmax = 1e7, t_lmax = 1e7;
  toy->add_option("--L", t_L, "offset of the second angle form");
  toy->add_option("--x-max", t_xmax, "x truncation");
  toy->add_option("--lambda-max", t_lmax, "lambda truncation");
  add_common(toy, &common, "toy.json");
  toy->callback([&] {
    spec.command = "toy";
    spec.params =
        asdm::Json{{"L", t_L}, {"x_max", t_xmax}, {"lambda_max", t_lmax}};
  });

  // ip
  auto* ip = app.add_subcommand("ip", "the 8D fiber integral I_p");
  std::string ip_method = "reduced";
  std::int64_t ip_n = 10000000;
  double ip_tol = 1e-7;
  int ip_threads = 0;
  ip->add_option("--method", ip_method, "reduced | mc")
      ->check(CLI::IsMember({"reduced", "mc"}));
  ip->add_option("--n", ip_n, "Monte Carlo sample count");
  ip->add_option("--rel-tol", ip_tol, "quadrature relative tolerance");
  ip->add_option("--threads", ip_threads, "worker threads (mc)");
  add_common(ip, &common, "ip.json");
  ip->callback([&] {
    spec.command = "ip";
    spec.params = asdm::Json{{"method", ip_method}};
    if (ip_method == "mc") {
      spec.params["n"] = ip_n;
      spec.params["threads"] = ip_threads;
    } else {
      spec.params["rel_tol"] = ip_tol;
    }
  });

  // fiber
  auto* fiber = app.add_subcommand(
      "fiber", "truncated fiber integrals over the exhaustion regions");
  std::vector<double> f_L;
  double f_n0 = 1.0, f_tol = 1e-6;
  fiber->add_option("--L-list", f_L, "region parameters");
  fiber->add_option("--n0", f_n0, "center-ball coefficient");
  fiber->add_option("--rel-tol", f_tol, "quadrature relative tolerance");
  add_common(fiber, &common, "fiber.json");
  fiber->callback([&] {
    spec.command = "fiber";
    spec.params = asdm::Json{{"n0", f_n0}, {"rel_tol", f_tol}};
    if (!f_L.empty()) spec.params["L_list"] = f_L;
  });

  // concentration
  auto* conc = app.add_subcommand(
      "concentration", "integrand mass distribution over bubble scale");
  std::vector<double> k_L;
  int k_bins = 32;
  double k_tol = 1e-5;
  conc->add_option("--L-list", k_L, "separations");
  conc->add_option("--n-bins", k_bins, "histogram bins");
  conc->add_option("--rel-tol", k_tol, "quadrature relative tolerance");
  add_common(conc, &common, "concentration.json");
  conc->callback([&] {
    spec.command = "concentration";
    spec.params = asdm::Json{{"n_bins", k_bins}, {"rel_tol", k_tol}};
    if (!k_L.empty()) spec.params["L_list"] = k_L;
  });

  // report
  auto* report = app.add_subcommand(
      "report", "aggregate count results and the I_p value");
  std::vector<std::string> r_counts;
  std::string r_ip;
  report->add_option("--counts", r_counts, "count result JSON files");
  report->add_option("--ip", r_ip, "ip result JSON file");
  add_common(report, &common, "report.json");
  report->callback([&] {
    spec.command = "report";
    spec.params = asdm::Json::object();
    if (!r_counts.empty()) spec.params["count_results"] = r_counts;
    if (!r_ip.empty()) spec.params["ip_result"] = r_ip;
  });

  // suite
  auto* suite = app.add_subcommand("suite", "run a suite config");
  std::string suite_config, suite_out = "suite_results";
  int suite_threads = 0;
  suite->add_option("--config", suite_config, "suite JSON config")->required();
  suite->add_option("--out-dir", suite_out, "output directory");
  suite->add_option("--threads", suite_threads, "parallel specs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? asdm::kValidationFailure : 0;
  }

  if (suite->parsed())
    return asdm::run_suite(suite_config, suite_out, std::cout, suite_threads);

  spec.seed = common.seed;
  spec.output_path = common.output;
  return asdm::run(spec, std::cout);
}
