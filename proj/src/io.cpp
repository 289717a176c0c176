#include "asdm/io.hpp"

#include <iomanip>

namespace asdm {

Json to_json(const Mat3& m) {
  Json a = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Mat3 mat3_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 9)
    throw std::invalid_argument("mat3_from_json: expected 9 entries");
  Mat3 m;
  int k = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j[k++].get<double>();
  return m;
}

Json to_json(const Quatd& q) {
  return Json::array({q.w, q.x, q.y, q.z});
}

Quatd quat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("quat_from_json: expected 4 entries");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

Json to_json(const BackgroundModel& b) {
  Json j;
  j["p0"] = to_json(b.p0());
  Json grads = Json::array();
  for (const auto& g : b.p1()) grads.push_back(to_json(g));
  j["p1"] = grads;
  j["patch_radius"] = b.patch_radius();
  return j;
}

BackgroundModel background_from_json(const Json& j) {
  const Mat3 p0 = mat3_from_json(j.at("p0"));
  CurvatureGradient p1{Mat3::Zero(), Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  if (j.contains("p1")) {
    const Json& g = j.at("p1");
    if (g.size() != 4)
      throw std::invalid_argument("background_from_json: p1 needs 4 matrices");
    for (int i = 0; i < 4; ++i) p1[i] = mat3_from_json(g[i]);
  }
  return BackgroundModel(p0, p1, j.value("patch_radius", 1.0));
}

Json to_json(const GluingData& g) {
  Json j;
  j["y"] = to_json(g.y);
  j["lambda"] = g.lambda;
  j["g0"] = to_json(g.g0);
  j["m"] = to_json(g.m);
  return j;
}

GluingData gluing_from_json(const Json& j) {
  return GluingData::from_g0(quat_from_json(j.at("y")),
                             j.at("lambda").get<double>(),
                             quat_from_json(j.at("g0")));
}

Json to_json(const CutoffScales& s) {
  Json j;
  j["r1"] = s.r1;
  j["r2"] = s.r2;
  j["r3"] = s.r3;
  j["s0"] = s.s0;
  j["c_lo"] = s.c_lo;
  j["c_hi"] = s.c_hi;
  return j;
}

CutoffScales scales_from_json(const Json& j) {
  CutoffScales s{j.at("r1").get<double>(), j.at("r2").get<double>(),
                 j.at("r3").get<double>(), j.at("s0").get<double>()};
  s.c_lo = j.value("c_lo", 1e-6);
  s.c_hi = j.value("c_hi", 1e6);
  return s;
}

Json to_json(const GluedConnectionModel& m) {
  Json j;
  j["background"] = to_json(m.background);
  j["bubble"] = to_json(m.bubble);
  j["scales"] = to_json(m.scales);
  j["t"] = m.t;
  return j;
}

GluedConnectionModel glued_model_from_json(const Json& j) {
  GluedConnectionModel m;
  m.background = background_from_json(j.at("background"));
  m.bubble = gluing_from_json(j.at("bubble"));
  m.scales = scales_from_json(j.at("scales"));
  m.t = j.value("t", 0.0);
  return m;
}

Json to_json(const QuadratureResult& r) {
  Json j;
  j["value"] = r.value;
  j["err_estimate"] = r.err_estimate;
  j["n_evals"] = r.n_evals;
  j["method"] = to_string(r.method);
  if (r.method == QuadMethod::monte_carlo) j["seed"] = r.seed;
  return j;
}

Json to_json(const DerivedScales& s) {
  Json j;
  j["s_p"] = s.s_p;
  j["s_q"] = s.s_q;
  j["s_m"] = s.s_m;
  j["delta"] = s.delta;
  j["r_kalpha"] = s.r_kalpha;
  return j;
}

Json to_json(const IntersectionSolution& s) {
  Json j;
  j["y"] = to_json(s.gluing.y);
  j["y0"] = s.y0;
  j["y_imag"] = Json::array({s.y_imag[0], s.y_imag[1], s.y_imag[2]});
  j["lambda"] = s.lambda;
  j["m"] = to_json(s.gluing.m);
  j["g0"] = to_json(s.gluing.g0);
  j["pair"] = Json::array({s.pair.at_p, s.pair.at_q});
  j["residual"] = s.residual;
  j["sign"] = s.sign;
  j["admissible"] = s.admissible;
  return j;
}

Json to_json(const CountReport& r) {
  Json j;
  j["total_signed_count"] = r.total_signed_count;
  j["ratio"] = std::to_string(r.ratio_num) + "/" + std::to_string(r.ratio_den);
  j["classification"] = to_string(r.classification);
  j["scales"] = to_json(r.scales);
  Json sols = Json::array();
  for (const auto& s : r.solutions) sols.push_back(to_json(s));
  j["solutions"] = sols;
  return j;
}

Json to_json(const BoundarySummary& s) {
  Json j;
  j["counts"] = s.counts;
  j["mean_count"] = s.mean_count;
  j["ratio"] = std::to_string(s.ratio_num) + "/" + std::to_string(s.ratio_den);
  j["interior_required"] = s.interior_required;
  j["all_generic_six"] = s.all_generic_six;
  return j;
}

Json to_json(const SensitivityExponents& e) {
  Json j;
  j["m"] = Json{{"eps", e.m_eps}, {"L", e.m_L}};
  j["y"] = Json{{"eps", e.y_eps}, {"L", e.y_L}};
  j["lambda"] = Json{{"eps", e.lambda_eps}, {"L", e.lambda_L}};
  return j;
}

Json to_json(const ContinuationReport& r) {
  Json j;
  j["steps_taken"] = r.steps_taken;
  Json slices = Json::array();
  for (const auto& s : r.slices) {
    Json js;
    js["t"] = s.t;
    js["count"] = s.report.total_signed_count;
    js["zone_iii_at_p"] = s.zone_iii_at_p;
    js["zone_iii_at_q"] = s.zone_iii_at_q;
    js["max_certificate"] = s.max_certificate;
    js["report"] = to_json(s.report);
    slices.push_back(js);
  }
  j["slices"] = slices;
  return j;
}

Json to_json(const ConcentrationProfile& p) {
  Json j;
  j["L"] = p.L;
  j["median_lambda"] = p.median_lambda;
  j["median_over_L"] = p.median_lambda / p.L;
  j["total_mass"] = p.total_mass;
  j["n_evals"] = p.n_evals;
  Json bins = Json::array();
  for (std::size_t i = 0; i < p.mass.size(); ++i)
    bins.push_back(Json::array({p.bin_lo[i], p.bin_hi[i], p.mass[i]}));
  j["bins"] = bins;
  return j;
}

Json to_json(const DeRhamBoundaryReport& r) {
  Json j;
  j["ip_value"] = r.ip_value;
  j["ip_error"] = r.ip_error;
  j["fiber_limit"] = r.fiber_limit;
  j["coincident_value"] = r.coincident_value;
  j["naive_requirement"] = r.naive_requirement;
  j["ratio"] = r.ratio;
  return j;
}

namespace {

std::ostream& csv_num(std::ostream& os, double v) {
  os << std::setprecision(17) << v;
  return os;
}

}  // namespace

void write_field_samples_csv(std::ostream& os,
                             const std::function<Mat3(const Quatd&)>& field,
                             const std::vector<Quatd>& points) {
  os << "x0,x1,x2,x3,m00,m01,m02,m10,m11,m12,m20,m21,m22\n";
  for (const Quatd& x : points) {
    const Mat3 m = field(x);
    csv_num(os, x.w) << ",";
    csv_num(os, x.x) << ",";
    csv_num(os, x.y) << ",";
    csv_num(os, x.z);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        os << ",";
        csv_num(os, m(r, c));
      }
    os << "\n";
  }
}

void write_solutions_csv(std::ostream& os,
                         const std::vector<IntersectionSolution>& sols) {
  os << "pair_p,pair_q,y0,y1,y2,y3,lambda,residual,sign,admissible\n";
  for (const auto& s : sols) {
    os << s.pair.at_p << "," << s.pair.at_q << ",";
    csv_num(os, s.gluing.y.w) << ",";
    csv_num(os, s.gluing.y.x) << ",";
    csv_num(os, s.gluing.y.y) << ",";
    csv_num(os, s.gluing.y.z) << ",";
    csv_num(os, s.lambda) << ",";
    csv_num(os, s.residual) << "," << s.sign << "," << (s.admissible ? 1 : 0)
                            << "\n";
  }
}

void write_convergence_csv(std::ostream& os, const std::string& x_name,
                           const std::vector<double>& x,
                           const std::vector<double>& value,
                           const std::vector<double>& error) {
  os << x_name << ",value,error\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv_num(os, x[i]) << ",";
    csv_num(os, value[i]) << ",";
    csv_num(os, error[i]) << "\n";
  }
}

void write_histogram_csv(std::ostream& os, const ConcentrationProfile& p) {
  os << "lambda_lo,lambda_hi,mass\n";
  for (std::size_t i = 0; i < p.mass.size(); ++i) {
    csv_num(os, p.bin_lo[i]) << ",";
    csv_num(os, p.bin_hi[i]) << ",";
    csv_num(os, p.mass[i]) << "\n";
  }
}

}  // namespace asdm
