#include "asdm/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "asdm/rng.hpp"

namespace asdm {

namespace {

namespace fs = std::filesystem;

void check_keys(const Json& params, const std::set<std::string>& allowed,
                const std::string& command) {
  for (auto it = params.begin(); it != params.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("unknown parameter '" + it.key() +
                                  "' for command '" + command + "'");
}

std::vector<double> double_list(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  os << text;
}

struct CommandResult {
  Json result;         // result payload
  Json resolved;       // fully resolved config
  int exit_code = kOk;
  std::string summary;
  std::string csv;        // optional CSV payload
  std::string csv_suffix; // e.g. ".solutions.csv"
};

std::string csv_path_for(const std::string& output_path,
                         const std::string& suffix) {
  fs::path p(output_path);
  p.replace_extension();
  return p.string() + suffix;
}

// --- command implementations -------------------------------------------------

CommandResult cmd_reduce(const Json& params, std::uint64_t seed) {
  check_keys(params, {"n", "gap_min"}, "reduce");
  const int n = params.value("n", 1000);
  const double gap_min = params.value("gap_min", 1e-3);
  CommandResult out;
  out.resolved = Json{{"n", n}, {"gap_min", gap_min}};

  RngStream rng(seed ^ 0x4ed0ceULL);
  double max_s_err = 0, max_cert = 0;
  int produced = 0;
  for (int i = 0; i < n; ++i) {
    Mat3 p = rng.matrix3(-1.0, 1.0);
    Vec3 sv = singular_values(p);
    while (std::min(sv[0] - sv[1], sv[1] - sv[2]) < gap_min) {
      p = rng.matrix3(-1.0, 1.0);
      sv = singular_values(p);
    }
    const auto dec = decompose_rank1(p);
    produced += static_cast<int>(dec.size());
    for (const auto& d : dec) {
      max_s_err = std::max(max_s_err,
                           std::abs(d.s - sv[1]) / (1.0 + sv[0]));
      const RankCertificate cert = rank1_certificate(p, d.s, d.m, sv[0]);
      max_cert = std::max(
          max_cert, std::max(cert.sigma2, cert.sigma3) / (1.0 + sv[0]));
    }
  }
  const bool pass = produced == 2 * n && max_s_err <= 1e-10 && max_cert <= 1e-8;
  out.result = Json{{"n", n},
                    {"decompositions", produced},
                    {"max_s_error_rel", max_s_err},
                    {"max_rank_certificate_rel", max_cert},
                    {"pass", pass}};
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "reduce: " << n << " matrices, 2 decompositions each, max cert "
     << max_cert << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

ProblemConfig config_from_params(const Json& params, std::uint64_t seed,
                                 Json* resolved) {
  ProblemConfig cfg;
  cfg.L = params.value("L", 1e-2);
  cfg.K = params.value("K", 1.0);
  cfg.alpha = params.value("alpha", 1.0);
  const double gap_min = params.value("gap_min", 0.1);
  const bool gradient = params.value("gradient", false);
  if (params.contains("background")) {
    cfg.background = background_from_json(params.at("background"));
  } else {
    cfg.background =
        random_generic_background(seed, gap_min, 1.0, 1.0, gradient);
  }
  (*resolved)["L"] = cfg.L;
  (*resolved)["K"] = cfg.K;
  (*resolved)["alpha"] = cfg.alpha;
  (*resolved)["gap_min"] = gap_min;
  (*resolved)["gradient"] = gradient;
  (*resolved)["background"] = to_json(cfg.background);
  return cfg;
}

CommandResult cmd_count(const Json& params, std::uint64_t seed) {
  check_keys(params, {"L", "K", "alpha", "gap_min", "gradient", "background"},
             "count");
  CommandResult out;
  const ProblemConfig cfg = config_from_params(params, seed, &out.resolved);
  SolveOptions opts;
  opts.seed = seed;
  const CountReport report = count_model_intersections(cfg, opts);
  double max_cert = 0, max_res = 0;
  for (const auto& s : report.solutions) {
    max_cert = std::max(max_cert, reducibility_certificate(s, cfg));
    max_res = std::max(max_res, s.residual);
  }
  const bool pass = report.total_signed_count == 6 && max_res <= 1e-9 &&
                    max_cert <= 1e-8;
  out.result = to_json(report);
  out.result["max_certificate"] = max_cert;
  out.result["max_residual"] = max_res;
  out.result["pass"] = pass;
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "count: L=" << cfg.L << " total_signed_count="
     << report.total_signed_count << " (cert " << max_cert << ")"
     << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  std::ostringstream csv;
  write_solutions_csv(csv, report.solutions);
  out.csv = csv.str();
  out.csv_suffix = ".solutions.csv";
  return out;
}

CommandResult cmd_degenerate(const Json& params, std::uint64_t seed) {
  check_keys(params, {"L", "K", "alpha", "split"}, "degenerate");
  CommandResult out;
  ProblemConfig cfg;
  cfg.L = params.value("L", 1e-2);
  cfg.K = params.value("K", 1.0);
  cfg.alpha = params.value("alpha", 1.5);
  // strong enough that the four extra lambda = O(L) roots fall inside
  // the admissible disk at desk-scale L (the "nonzero O(sqrt L) splitting")
  const double split = params.value("split", 25.0);
  cfg.background = degenerate_background(seed, split, 1.0, cfg.L, cfg.K);
  out.resolved = Json{{"L", cfg.L},
                      {"K", cfg.K},
                      {"alpha", cfg.alpha},
                      {"split", split},
                      {"background", to_json(cfg.background)}};
  SolveOptions opts;
  opts.seed = seed;
  const CountReport report = count_model_intersections(cfg, opts);
  const int expected = cfg.alpha > 1.0 ? 4 : 8;
  const bool pass = report.total_signed_count == expected;
  out.result = to_json(report);
  out.result["expected"] = expected;
  out.result["pass"] = pass;
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "degenerate: alpha=" << cfg.alpha << " count="
     << report.total_signed_count << " expected=" << expected
     << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_continuation(const Json& params, std::uint64_t seed) {
  check_keys(params,
             {"L", "K", "alpha", "n_backgrounds", "t_grid", "bg_scale",
              "gap_min"},
             "continuation");
  CommandResult out;
  const double L = params.value("L", 1e-2);
  const int n_bg = params.value("n_backgrounds", 5);
  const double bg_scale = params.value("bg_scale", 1e-8);
  const double gap_min = params.value("gap_min", 0.1);
  std::vector<double> t_grid =
      params.contains("t_grid") ? double_list(params.at("t_grid"))
                                : std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0};
  out.resolved = Json{{"L", L},
                      {"n_backgrounds", n_bg},
                      {"bg_scale", bg_scale},
                      {"gap_min", gap_min},
                      {"t_grid", t_grid}};

  Json runs = Json::array();
  bool pass = true;
  for (int i = 0; i < n_bg; ++i) {
    ProblemConfig cfg;
    cfg.L = L;
    cfg.background = random_generic_background(seed + 1000 * i, gap_min,
                                               bg_scale, 1.0, false);
    const GluedConnectionModel model = make_glued_model(cfg.background, L);
    ContinuationOptions opts;
    opts.solve.seed = seed + 1000 * i;
    const ContinuationReport rep =
        continuation_count(cfg, model, t_grid, opts);
    for (const auto& slice : rep.slices)
      pass = pass && slice.report.total_signed_count == 6 &&
             slice.zone_iii_at_p && slice.zone_iii_at_q;
    runs.push_back(to_json(rep));
  }
  out.result = Json{{"runs", runs}, {"pass", pass}};
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "continuation: " << n_bg << " backgrounds, count 6 at every t "
     << (pass ? "[ok]" : "[FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_sensitivity(const Json& params, std::uint64_t seed) {
  check_keys(params, {"eps_list", "L_list", "gap_min"}, "sensitivity");
  CommandResult out;
  const std::vector<double> eps_list =
      params.contains("eps_list") ? double_list(params.at("eps_list"))
                                  : std::vector<double>{1e-2, 1e-3, 1e-4};
  const std::vector<double> L_list =
      params.contains("L_list") ? double_list(params.at("L_list"))
                                : std::vector<double>{1e-2, 3e-3, 1e-3};
  const double gap_min = params.value("gap_min", 0.1);
  out.resolved =
      Json{{"eps_list", eps_list}, {"L_list", L_list}, {"gap_min", gap_min}};
  const BackgroundModel bg =
      random_generic_background(seed, gap_min, 1.0, 1.0, false);
  out.resolved["background"] = to_json(bg);
  const SensitivityExponents e =
      sensitivity_scan(bg, eps_list, L_list, seed);
  auto near = [](double v, double target) {
    return std::abs(v - target) <= 0.2;
  };
  const bool pass = near(e.m_eps, 1) && near(e.m_L, 0) && near(e.y_eps, 1) &&
                    near(e.y_L, 1) && near(e.lambda_eps, 1) &&
                    near(e.lambda_L, 2);
  out.result = to_json(e);
  out.result["pass"] = pass;
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "sensitivity: dm~eps^" << e.m_eps << " dy~eps^" << e.y_eps << " L^"
     << e.y_L << " dlambda~eps^" << e.lambda_eps << " L^" << e.lambda_L
     << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_toy(const Json& params, std::uint64_t) {
  check_keys(params, {"L", "x_max", "lambda_max"}, "toy");
  CommandResult out;
  ToyConfig cfg;
  cfg.L = params.value("L", 1.0);
  cfg.x_max = params.value("x_max", 1e7);
  cfg.lambda_max = params.value("lambda_max", 1e7);
  out.resolved =
      Json{{"L", cfg.L}, {"x_max", cfg.x_max}, {"lambda_max", cfg.lambda_max}};
  const QuadratureResult r = toy_wedge_integral(cfg);
  out.result = to_json(r);
  out.result["reference_pi2_over_2"] = M_PI * M_PI / 2.0;
  std::ostringstream ss;
  ss << "toy: L=" << cfg.L << " value=" << r.value << " (err "
     << r.err_estimate << ")";
  out.summary = ss.str();
  return out;
}

CommandResult cmd_ip(const Json& params, std::uint64_t seed) {
  check_keys(params, {"method", "n", "rel_tol", "threads"}, "ip");
  CommandResult out;
  const std::string method = params.value("method", "reduced");
  QuadratureResult r;
  bool pass = true;
  if (method == "reduced") {
    const double rel_tol = params.value("rel_tol", 1e-7);
    out.resolved = Json{{"method", method}, {"rel_tol", rel_tol}};
    r = integrate_Ip_reduced(rel_tol);
    pass = std::abs(r.value - 1.0) <= 1e-4;
  } else if (method == "mc") {
    const std::int64_t n = params.value("n", std::int64_t{10000000});
    const int threads = params.value("threads", 0);
    out.resolved = Json{{"method", method}, {"n", n}, {"threads", threads}};
    r = integrate_Ip_mc(seed, n, threads);
    pass = std::abs(r.value - 1.0) <=
           std::max(0.02, 1.96 * r.err_estimate);
  } else {
    throw std::invalid_argument("ip: method must be 'reduced' or 'mc'");
  }
  out.result = to_json(r);
  out.result["pass"] = pass;
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream ss;
  ss << "ip(" << method << "): value=" << r.value << " +- " << r.err_estimate
     << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_fiber(const Json& params, std::uint64_t) {
  check_keys(params, {"L_list", "n0", "rel_tol"}, "fiber");
  CommandResult out;
  const std::vector<double> L_list =
      params.contains("L_list") ? double_list(params.at("L_list"))
                                : std::vector<double>{0.1, 0.03, 0.01};
  const double n0 = params.value("n0", 1.0);
  const double rel_tol = params.value("rel_tol", 1e-6);
  out.resolved = Json{{"L_list", L_list}, {"n0", n0}, {"rel_tol", rel_tol}};
  std::vector<double> values, errors;
  Json rows = Json::array();
  for (double L : L_list) {
    const QuadratureResult r =
        truncated_fiber_integral(L, FiberRegion::standard(L, n0), rel_tol);
    values.push_back(r.value);
    errors.push_back(r.err_estimate);
    rows.push_back(Json{{"L", L}, {"value", r.value}, {"err", r.err_estimate},
                        {"n_evals", r.n_evals}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < values.size(); ++i)
    monotone = monotone && values[i] >= values[i - 1] - 1e-9;
  const bool pass = monotone && !values.empty() && values.back() >= 0.95;
  out.result = Json{{"rows", rows},
                    {"monotone", monotone},
                    {"final_value", values.empty() ? 0.0 : values.back()},
                    {"pass", pass}};
  out.exit_code = pass ? kOk : kCertificateFailure;
  std::ostringstream csv;
  write_convergence_csv(csv, "L", L_list, values, errors);
  out.csv = csv.str();
  out.csv_suffix = ".convergence.csv";
  std::ostringstream ss;
  ss << "fiber: truncated integrals";
  for (double v : values) ss << " " << v;
  ss << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_concentration(const Json& params, std::uint64_t) {
  check_keys(params, {"L_list", "n_bins", "rel_tol"}, "concentration");
  CommandResult out;
  const std::vector<double> L_list =
      params.contains("L_list") ? double_list(params.at("L_list"))
                                : std::vector<double>{1e-1, 1e-2, 1e-3};
  const int n_bins = params.value("n_bins", 32);
  const double rel_tol = params.value("rel_tol", 1e-5);
  out.resolved =
      Json{{"L_list", L_list}, {"n_bins", n_bins}, {"rel_tol", rel_tol}};
  Json rows = Json::array();
  std::vector<double> ratios;
  std::string csv;
  for (double L : L_list) {
    const ConcentrationProfile prof = concentration_profile(L, n_bins, rel_tol);
    ratios.push_back(prof.median_lambda / L);
    rows.push_back(to_json(prof));
    std::ostringstream hist;
    write_histogram_csv(hist, prof);
    csv += "# L=" + std::to_string(L) + "\n" + hist.str();
  }
  double mean_ratio = 0;
  for (double r : ratios) mean_ratio += r;
  mean_ratio /= ratios.size();
  bool pass = true;
  for (double r : ratios)
    pass = pass && r >= 0.5 * mean_ratio && r <= 2.0 * mean_ratio;
  out.result = Json{{"profiles", rows},
                    {"median_over_L", ratios},
                    {"mean_ratio", mean_ratio},
                    {"pass", pass}};
  out.exit_code = pass ? kOk : kCertificateFailure;
  out.csv = csv;
  out.csv_suffix = ".histogram.csv";
  std::ostringstream ss;
  ss << "concentration: median lambda/L";
  for (double r : ratios) ss << " " << r;
  ss << (pass ? " [ok]" : " [FAIL]");
  out.summary = ss.str();
  return out;
}

CommandResult cmd_report(const Json& params, std::uint64_t) {
  check_keys(params, {"count_results", "ip_result"}, "report");
  CommandResult out;
  out.resolved = params;
  std::vector<CountReport> counts;
  if (params.contains("count_results")) {
    for (const auto& path : params.at("count_results")) {
      std::ifstream is(path.get<std::string>());
      if (!is) throw std::invalid_argument("report: cannot open " +
                                           path.get<std::string>());
      Json doc = Json::parse(is);
      CountReport r;
      r.total_signed_count = doc.at("result").at("total_signed_count");
      r.ratio_num = r.total_signed_count;
      const std::string cls = doc.at("result").at("classification");
      r.classification = cls == "generic"
                             ? CountClassification::generic
                             : (cls == "degenerate_alpha_gt_1"
                                    ? CountClassification::degenerate_alpha_gt_1
                                    : CountClassification::degenerate_alpha_lt_1);
      counts.push_back(r);
    }
  }
  const BoundarySummary summary = boundary_report(counts);
  out.result = Json{{"boundary", to_json(summary)}};
  std::ostringstream ss;
  ss << "report: geometric-representative boundary contribution "
     << summary.ratio_num << "/" << summary.ratio_den;
  if (params.contains("ip_result")) {
    std::ifstream is(params.at("ip_result").get<std::string>());
    if (!is)
      throw std::invalid_argument("report: cannot open ip result");
    Json doc = Json::parse(is);
    QuadratureResult ip;
    ip.value = doc.at("result").at("value");
    ip.err_estimate = doc.at("result").at("err_estimate");
    const DeRhamBoundaryReport t = de_rham_boundary_report(ip);
    out.result["de_rham"] = to_json(t);
    ss << "; de Rham fiber " << t.fiber_limit << " => ratio 1/8";
  }
  out.summary = ss.str();
  return out;
}

CommandResult dispatch(const ExperimentSpec& spec) {
  if (spec.command == "reduce") return cmd_reduce(spec.params, spec.seed);
  if (spec.command == "count") return cmd_count(spec.params, spec.seed);
  if (spec.command == "degenerate")
    return cmd_degenerate(spec.params, spec.seed);
  if (spec.command == "continuation")
    return cmd_continuation(spec.params, spec.seed);
  if (spec.command == "sensitivity")
    return cmd_sensitivity(spec.params, spec.seed);
  if (spec.command == "toy") return cmd_toy(spec.params, spec.seed);
  if (spec.command == "ip") return cmd_ip(spec.params, spec.seed);
  if (spec.command == "fiber") return cmd_fiber(spec.params, spec.seed);
  if (spec.command == "concentration")
    return cmd_concentration(spec.params, spec.seed);
  if (spec.command == "report") return cmd_report(spec.params, spec.seed);
  throw std::invalid_argument("unknown command '" + spec.command + "'");
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& log) {
  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = spec.command;
  doc["seed"] = spec.seed;
  int code = kOk;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    CommandResult res = dispatch(spec);
    doc["config"] = res.resolved;
    doc["result"] = res.result;
    doc["error"] = nullptr;
    code = res.exit_code;
    log << res.summary << "\n";
    if (!res.csv.empty() && !spec.output_path.empty())
      write_text(csv_path_for(spec.output_path, res.csv_suffix), res.csv);
  } catch (const std::invalid_argument& e) {
    doc["error"] = Json{{"type", "validation"}, {"message", e.what()}};
    code = kValidationFailure;
    log << spec.command << ": validation error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    doc["error"] = Json{{"type", "validation"}, {"message", e.what()}};
    code = kValidationFailure;
    log << spec.command << ": validation error: " << e.what() << "\n";
  } catch (const IncompleteCountError& e) {
    doc["error"] = Json{{"type", "solver"}, {"message", e.what()}};
    code = kSolverFailure;
    log << spec.command << ": solver failure: " << e.what() << "\n";
  } catch (const NonContractionError& e) {
    doc["error"] = Json{{"type", "solver"}, {"message", e.what()}};
    code = kSolverFailure;
    log << spec.command << ": solver failure: " << e.what() << "\n";
  } catch (const ContinuationFailureError& e) {
    doc["error"] = Json{{"type", "solver"}, {"message", e.what()}};
    code = kSolverFailure;
    log << spec.command << ": solver failure: " << e.what() << "\n";
  } catch (const std::exception& e) {
    doc["error"] = Json{{"type", "certificate"}, {"message", e.what()}};
    code = kCertificateFailure;
    log << spec.command << ": error: " << e.what() << "\n";
  }
  const auto t1 = std::chrono::steady_clock::now();
  if (!spec.output_path.empty()) {
    write_text(spec.output_path, doc.dump(2) + "\n");
    const double secs =
        std::chrono::duration<double>(t1 - t0).count();
    write_text(spec.output_path + ".meta",
               Json{{"wall_seconds", secs}}.dump(2) + "\n");
  }
  return code;
}

int run_suite(const std::string& config_path, const std::string& out_dir,
              std::ostream& log, int threads) {
  std::ifstream is(config_path);
  if (!is) {
    log << "suite: cannot open config " << config_path << "\n";
    return kValidationFailure;
  }
  Json config;
  try {
    config = Json::parse(is);
  } catch (const std::exception& e) {
    log << "suite: config parse error: " << e.what() << "\n";
    return kValidationFailure;
  }
  if (!config.contains("specs") || !config.at("specs").is_array()) {
    log << "suite: config must contain a 'specs' array\n";
    return kValidationFailure;
  }

  std::vector<ExperimentSpec> specs;
  int idx = 0;
  for (const auto& js : config.at("specs")) {
    ExperimentSpec spec;
    spec.command = js.at("command").get<std::string>();
    spec.params = js.value("params", Json::object());
    spec.seed = js.value("seed", std::uint64_t{0});
    spec.output_path = js.value(
        "output", out_dir + "/" + std::to_string(idx) + "_" + spec.command +
                      ".json");
    specs.push_back(spec);
    ++idx;
  }

  int n_threads = threads;
  if (n_threads <= 0) {
    if (const char* env = std::getenv("THREADS")) n_threads = std::atoi(env);
    if (n_threads <= 0) n_threads = 2;
  }
  n_threads = std::min<int>(n_threads, static_cast<int>(specs.size()));

  std::vector<int> codes(specs.size(), 0);
  std::vector<std::string> logs(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      std::ostringstream ss;
      codes[i] = run(specs[i], ss);
      logs[i] = ss.str();
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int exit_code = 0;
  Json rows = Json::array();
  std::string batch_csv = "index,command,seed,exit_code,output\n";
  int six_count = -1;
  bool have_ip = false;
  double ip_value = 0, ip_err = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    log << logs[i];
    exit_code = std::max(exit_code, codes[i]);
    rows.push_back(Json{{"command", specs[i].command},
                        {"seed", specs[i].seed},
                        {"exit_code", codes[i]},
                        {"output", specs[i].output_path}});
    batch_csv += std::to_string(i) + "," + specs[i].command + "," +
                 std::to_string(specs[i].seed) + "," +
                 std::to_string(codes[i]) + "," + specs[i].output_path + "\n";
    if (codes[i] == 0) {
      std::ifstream ris(specs[i].output_path);
      if (ris) {
        const Json doc = Json::parse(ris);
        if (specs[i].command == "count" &&
            doc.at("result").value("classification", "") == "generic")
          six_count = doc.at("result").at("total_signed_count").get<int>();
        if (specs[i].command == "ip" &&
            doc.at("config").value("method", "") == "reduced") {
          have_ip = true;
          ip_value = doc.at("result").at("value").get<double>();
          ip_err = doc.at("result").at("err_estimate").get<double>();
        }
      }
    }
  }

  Json aggregate;
  aggregate["schema_version"] = 1;
  aggregate["results"] = rows;
  Json headline = Json::object();
  if (six_count >= 0) {
    headline["geometric_boundary_contribution"] =
        std::to_string(six_count) + "/64";
    log << "headline: geometric-representative boundary contribution "
        << six_count << "/64 (interior must supply " << 64 - six_count
        << ")\n";
  }
  if (have_ip) {
    QuadratureResult ip;
    ip.value = ip_value;
    ip.err_estimate = ip_err;
    const DeRhamBoundaryReport t = de_rham_boundary_report(ip);
    headline["de_rham_fiber_integral"] = t.fiber_limit;
    headline["de_rham_boundary_contribution"] = "1/8";
    log << "headline: de Rham fiber integral " << t.fiber_limit
        << " of 4 needed => boundary contribution 1/8\n";
  }
  aggregate["headline"] = headline;
  aggregate["exit_code"] = exit_code;
  write_text(out_dir + "/suite_summary.json", aggregate.dump(2) + "\n");
  write_text(out_dir + "/suite_batch.csv", batch_csv);
  return exit_code;
}

}  // namespace asdm
