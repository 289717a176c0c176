#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "asdm/continuation.hpp"
#include "asdm/fields.hpp"
#include "asdm/integrate.hpp"
#include "asdm/intersect.hpp"

namespace asdm {

// Deterministic key order for byte-stable result documents.
using Json = nlohmann::ordered_json;

Json to_json(const Mat3& m);
Mat3 mat3_from_json(const Json& j);
Json to_json(const Quatd& q);
Quatd quat_from_json(const Json& j);

Json to_json(const BackgroundModel& b);
BackgroundModel background_from_json(const Json& j);
Json to_json(const GluingData& g);
GluingData gluing_from_json(const Json& j);
Json to_json(const CutoffScales& s);
CutoffScales scales_from_json(const Json& j);
Json to_json(const GluedConnectionModel& m);
GluedConnectionModel glued_model_from_json(const Json& j);

Json to_json(const QuadratureResult& r);
Json to_json(const DerivedScales& s);
Json to_json(const IntersectionSolution& s);
Json to_json(const CountReport& r);
Json to_json(const BoundarySummary& s);
Json to_json(const SensitivityExponents& e);
Json to_json(const ContinuationReport& r);
Json to_json(const ConcentrationProfile& p);
Json to_json(const DeRhamBoundaryReport& r);

/// Sample the curvature matrix of a field on given points; columns
/// x0..x3,m00..m22 (row-major matrix entries).
void write_field_samples_csv(std::ostream& os,
                             const std::function<Mat3(const Quatd&)>& field,
                             const std::vector<Quatd>& points);

void write_solutions_csv(std::ostream& os,
                         const std::vector<IntersectionSolution>& sols);

/// Convergence tables: one row per (x, value, error).
void write_convergence_csv(std::ostream& os, const std::string& x_name,
                           const std::vector<double>& x,
                           const std::vector<double>& value,
                           const std::vector<double>& error);

void write_histogram_csv(std::ostream& os, const ConcentrationProfile& p);

}  // namespace asdm
