#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ricci/serialization.hpp"

namespace ricci {

struct ModelRef {
  std::string name;
  std::map<std::string, double> params;
};

/// A finished command: a JSON summary, named output files, and the overall
/// certification status.
struct Report {
  Json summary;
  std::map<std::string, std::string> files;  // file name -> contents
  bool pass = true;
};

void write_report_files(const Report& report, const std::string& dir);

// ===========================================================================

struct AnalyzeOptions {
  unsigned K = 10;
  std::vector<double> eps = {0.25, 0.125};
  bool certify = false;
  unsigned kmax = 5;           // lags for the pseudo-gap oracle
  std::string pairs = "auto";  // auto | all | geodesic
};

AnalyzeOptions analyze_options_from_json(const Json& doc);

/// Curvature profile, geometry and every bound; with certify, each bound is
/// compared against the exact oracles. `model` adds model-specific claims.
Report analyze(const ChainSpec& chain, const AnalyzeOptions& options, const std::optional<ModelRef>& model = std::nullopt);

/// Pair selection used by analyze: geodesic at d0 when the space passes the
/// check (or when forced), otherwise all pairs.
PairSelection choose_pairs(const ChainSpec& chain, const std::string& mode);

// ===========================================================================

struct McmcOptions {
  std::size_t steps = 1000;      // N
  std::size_t t0 = 0;
  unsigned K = 0;                // 0 picks the lag minimising the variance bound
  unsigned profile_K = 20;
  std::string q = "stationary";  // stationary | state:<index>
  State anchor = 0;              // f(x) = d(x, anchor)
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<double> t_grid;    // empty picks a grid from the variance bound
  std::string pairs = "auto";
};

McmcOptions mcmc_options_from_json(const Json& doc);

/// Bias, variance and both tail certificates for the plan, compared with a
/// Monte Carlo run. Passes iff every empirical value stays within its bound
/// after a 3 standard-error margin. The output does not depend on `workers`.
Report run_mcmc(std::shared_ptr<const ChainSpec> chain, const McmcOptions& options);

// ===========================================================================

struct CubeFigureOptions {
  std::size_t N = 500;
  std::size_t R = 100;
  std::size_t K = 500;
  std::size_t window = 30;  // j in [R, R + window)
};

CubeFigureOptions cube_figure_options_from_json(const Json& doc);

/// The four panels: kappa_tilde_k(j) over the window at k = 1, 100, 500
/// (those within K), and min_j kappa_tilde_k(j) over k.
Report cube_figure(const CubeFigureOptions& options);

// ===========================================================================

/// analyze --certify over a fixed list of desk-scale models.
Report certify_all();

Json model_list_json();
std::string model_list_csv();

}  // namespace ricci
