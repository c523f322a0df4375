#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ricci/chain_geometry.hpp"
#include "ricci/concentration.hpp"
#include "ricci/curvature.hpp"
#include "ricci/dobrushin_glauber.hpp"
#include "ricci/mcmc_bounds.hpp"
#include "ricci/metric_markov.hpp"
#include "ricci/model_zoo.hpp"
#include "ricci/oracle_bench.hpp"

namespace ricci {

using Json = nlohmann::ordered_json;

// Chain documents: {"labels", "distance", "transition", "stationary"?}.
// Unknown keys are rejected.
std::shared_ptr<const ChainSpec> chain_from_json(const Json& doc);
std::shared_ptr<const ChainSpec> load_chain(const std::string& path);
Json chain_to_json(const ChainSpec& chain);
void save_chain(const ChainSpec& chain, const std::string& path);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* what);
Json vector_to_json(const Vector& v);

/// Shortest round-trip representation; "inf", "-inf" and "nan" for
/// non-finite values.
std::string format_double(double v);

/// JSON number, or null when not finite.
Json number(double v);

Json to_json(const TailBound& b);
Json to_json(const DobrushinData& d);
Json to_json(const McmcPlan& plan);
McmcPlan plan_from_json(const Json& doc, std::shared_ptr<const ChainSpec> chain, const CurvatureProfile& profile);

// CSV writers (header row, LF line endings).
std::string profile_csv(const CurvatureProfile& profile);
std::string geometry_csv(const GeometrySummary& summary, const FiniteMetricSpace& space);
std::string tail_curve_csv(const TailBound& b, const std::vector<double>& t);
std::string cube_table_csv(const CubeTable& table);
std::string verdict_csv(const VerdictTable& table);
Json verdict_json(const VerdictTable& table);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace ricci
