#include "ricci/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "ricci/error.hpp"

namespace ricci {

namespace {

template <class Fn>
Json guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    Json j;
    j["error"] = to_string(e.code());
    j["message"] = e.what();
    return j;
  }
}

void reject_unknown(const Json& doc, const std::set<std::string>& known, const char* what) {
  if (!doc.is_object()) fail(ErrorCode::kInvalidArgument, std::string(what) + " options must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) {
      fail(ErrorCode::kInvalidArgument, std::string("unknown ") + what + " option '" + item.key() + "'");
    }
  }
}

template <class T>
void read(const Json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::kInvalidArgument, std::string("option '") + key + "' has the wrong type");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string lag_name(const char* stem, unsigned k) { return std::string(stem) + "_k" + std::to_string(k); }

double model_param(const ModelRef& ref, const std::string& key) {
  if (auto it = ref.params.find(key); it != ref.params.end()) return it->second;
  for (const auto& info : model_list()) {
    if (info.name != ref.name) continue;
    for (const auto& p : info.params) {
      if (p.name == key) return p.default_value;
    }
  }
  fail(ErrorCode::kInvalidArgument, "model " + ref.name + " has no parameter " + key);
}

Vector distance_observable(const ChainSpec& chain, State anchor) {
  if (anchor >= chain.size()) fail(ErrorCode::kInvalidArgument, "anchor state out of range");
  return chain.space().distances().row(static_cast<Eigen::Index>(anchor)).transpose();
}

double mean_pair_distance(const ChainSpec& chain) {
  const Vector& pi = chain.pi().weights();
  return pi.dot(chain.space().distances() * pi);
}

// Model-specific claims from the closed forms and Dobrushin bounds.
void model_claims(const CurvatureProfile& profile, const OracleReport& orc,
                  const std::vector<MixingTime>& mix, const ModelRef& ref, std::vector<Claim>& claims) {
  const unsigned K = profile.K();
  auto N_of = [&] { return static_cast<std::size_t>(model_param(ref, "N")); };
  if (ref.name == "split-merge") {
    const double N = static_cast<double>(N_of());
    claims.push_back({"split_merge_kappa1", 2.0 / (N * N), profile.kappa[1], Direction::kLower});
    return;
  }
  if (ref.name == "curie-weiss" || ref.name == "ising1d") {
    const std::size_t N = N_of();
    const double beta = model_param(ref, "beta");
    const double h = model_param(ref, "h");
    const bool systemic = model_param(ref, "scan") != 0.0;
    Boundary boundary = Boundary::kMinus;
    if (ref.name == "ising1d") {
      const double b = model_param(ref, "boundary");
      boundary = b == 0.0 ? Boundary::kMinus : b == 1.0 ? Boundary::kPlus : Boundary::kFree;
    }
    const SpinModel spin = ref.name == "curie-weiss" ? curie_weiss_model(N, beta, h) : ising1d_model(N, beta, h, boundary);
    const DobrushinData dob = estimate_dobrushin(spin, true);
    const double n = static_cast<double>(N);
    if (!systemic) {
      for (unsigned k = 1; k <= K; ++k) {
        claims.push_back({lag_name("dobrushin_random", k), random_scan_bound(dob.A, k).kappa_lower, profile.kappa[k],
                          Direction::kLower});
      }
      claims.push_back({"dobrushin_gap", (1.0 - dob.spectral_radius) / n, orc.gamma_star, Direction::kLower});
      if (ref.name == "curie-weiss") {
        claims.push_back({"curie_weiss_random_k1", (1.0 - beta * (n - 1.0) / n) / n, profile.kappa[1], Direction::kLower});
      } else if (h == 0.0 && boundary != Boundary::kFree) {
        const double rho = 1.0 / (1.0 + std::exp(-4.0 * beta));
        claims.push_back({"ising_random_k1", 2.0 / n * (1.0 - rho), profile.kappa[1], Direction::kLower});
      }
    } else {
      for (unsigned k = 1; k <= K; ++k) {
        claims.push_back({lag_name("dobrushin_systemic", k), systemic_scan_bound(dob.B, k), profile.kappa[k],
                          Direction::kLower});
      }
      const bool have_ps = !orc.gamma_ps_by_k.empty();
      if (ref.name == "curie-weiss" && beta > 0.0) {
        const auto cw = curie_weiss_closed_forms(N, beta);
        claims.push_back({"curie_weiss_systemic_k1", cw.kappa_systemic, profile.kappa[1], Direction::kLower});
        for (unsigned k = 1; k <= K; ++k) {
          claims.push_back({lag_name("curie_weiss_systemic", k), cw.kappa_systemic_k(k), profile.kappa[k], Direction::kLower});
        }
        if (have_ps) claims.push_back({"curie_weiss_systemic_gamma_ps", cw.gamma_ps_systemic, orc.gamma_ps, Direction::kLower});
      } else if (ref.name == "ising1d" && beta > 0.0 && h == 0.0 && boundary != Boundary::kFree) {
        const auto is = ising1d_closed_forms(N, beta, h);
        claims.push_back({"ising_systemic_k1", is.kappa_systemic, profile.kappa[1], Direction::kLower});
        if (have_ps) claims.push_back({"ising_systemic_gamma_ps", is.gamma_ps_systemic, orc.gamma_ps, Direction::kLower});
      }
    }
    return;
  }
  if (ref.name == "binary-cube") {
    const std::size_t N = N_of();
    const auto R = static_cast<std::size_t>(model_param(ref, "R"));
    if (R >= N) return;
    const double n = static_cast<double>(N);
    claims.push_back({"cube_kappa1_floor", (2.0 - static_cast<double>(R)) / (2.0 * n), profile.kappa[1], Direction::kLower});
    const auto table = cube_recursion(N, R, K);
    for (unsigned k = 1; k <= K; ++k) {
      claims.push_back({lag_name("cube_recursion", k), table.min_tilde(k), profile.kappa[k], Direction::kLower});
    }
    if (10 * R <= N && table.rho > 0.0) {
      claims.push_back({"cube_gap_rho", table.rho / n, orc.gamma, Direction::kLower});
      for (const auto& m : mix) {
        if (m.eps == 0.25) {
          claims.push_back({"cube_tmix_rho", 2.0 * n * std::log(n) / table.rho, static_cast<double>(m.t), Direction::kUpper});
        }
      }
    }
  }
}

}  // namespace

void write_report_files(const Report& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + dir + ": " + ec.message());
  for (const auto& [name, text] : report.files) write_text((std::filesystem::path(dir) / name).string(), text);
}

PairSelection choose_pairs(const ChainSpec& chain, const std::string& mode) {
  if (mode == "all") return PairSelection::all();
  const double d0 = chain.space().d0();
  if (mode == "geodesic") {
    if (!(d0 > 0.0)) return PairSelection::all();
    return PairSelection::geodesic(d0);
  }
  if (mode != "auto") fail(ErrorCode::kInvalidArgument, "pairs must be auto, all or geodesic");
  if (chain.size() < 2 || !(d0 > 0.0)) return PairSelection::all();
  if (check_geodesic(chain.space(), d0).geodesic) return PairSelection::geodesic(d0);
  return PairSelection::all();
}

// ===========================================================================
// analyze

AnalyzeOptions analyze_options_from_json(const Json& doc) {
  AnalyzeOptions o;
  if (doc.is_null()) return o;
  reject_unknown(doc, {"K", "eps", "certify", "kmax", "pairs"}, "analyze");
  read(doc, "K", o.K);
  read(doc, "eps", o.eps);
  read(doc, "certify", o.certify);
  read(doc, "kmax", o.kmax);
  read(doc, "pairs", o.pairs);
  return o;
}

Report analyze(const ChainSpec& chain, const AnalyzeOptions& o, const std::optional<ModelRef>& model) {
  if (o.K < 1) fail(ErrorCode::kInvalidArgument, "K must be >= 1");
  for (double e : o.eps) {
    if (!(e > 0.0 && e < 1.0)) fail(ErrorCode::kInvalidArgument, "eps values must lie in (0, 1)");
  }
  const PairSelection sel = choose_pairs(chain, o.pairs);
  const CurvatureProfile profile = curvature_profile(chain, o.K, sel);
  std::vector<unsigned> lags;
  for (unsigned k = 1; k <= o.K; ++k) lags.push_back(k);
  const GeometrySummary geo = geometry(chain, lags);
  const auto& space = chain.space();

  Report report;
  Json& s = report.summary;
  s["command"] = "analyze";
  if (model) {
    s["model"]["name"] = model->name;
    s["model"]["params"] = model->params;
  }
  s["chain"]["states"] = chain.size();
  s["chain"]["reversible"] = chain.reversible();
  s["chain"]["d0"] = number(space.d0());
  s["chain"]["diam"] = number(space.diam());
  s["chain"]["pairs"] = sel.mode == PairSelection::Mode::kAllPairs ? "all" : "geodesic";

  Json curv;
  curv["K"] = o.K;
  curv["kappa"] = Json::array();
  for (double k : profile.kappa) curv["kappa"].push_back(number(k));
  curv["M"] = number(profile.M);
  curv["kappa_sigma_c"] = guarded([&] { return Json(number(kappa_sigma_c(profile))); });
  curv["sum_squares"] = guarded([&] { return Json(number(sum_squares(profile))); });
  curv["submultiplicativity_violation"] = number(profile.max_submultiplicativity_violation);
  s["curvature"] = curv;

  std::vector<std::optional<unsigned>> mix_bounds;
  Json mixing = Json::array();
  for (double e : o.eps) {
    Json m;
    m["eps"] = e;
    try {
      const unsigned t = mixing_time_bound(profile, space, e);
      m["bound"] = t;
      mix_bounds.emplace_back(t);
    } catch (const Error& err) {
      m["bound"] = nullptr;
      m["error"] = to_string(err.code());
      mix_bounds.emplace_back(std::nullopt);
    }
    mixing.push_back(std::move(m));
  }
  s["mixing"] = mixing;

  std::optional<GapBound> gap;
  std::optional<GapBound> pseudo;
  Json gaps;
  if (chain.reversible()) {
    try {
      gap = spectral_gap_bound(chain, profile);
      gaps["gamma_star"] = {{"value", gap->value}, {"k", gap->k}};
    } catch (const Error& e) {
      gaps["gamma_star"] = {{"error", to_string(e.code())}};
    }
  }
  try {
    std::optional<CurvatureProfile> reversed;
    if (!chain.reversible()) {
      const ChainSpec rev(time_reversal(chain), chain.pi());
      reversed = curvature_profile(rev, o.K, sel);
    }
    pseudo = pseudo_spectral_gap_bound(profile, reversed ? *reversed : profile);
    gaps["gamma_ps"] = {{"value", pseudo->value}, {"k", pseudo->k}};
  } catch (const Error& e) {
    gaps["gamma_ps"] = {{"error", to_string(e.code())}};
  }
  s["gaps"] = gaps;

  std::optional<DiameterBounds> diam;
  for (unsigned k = 1; k <= o.K; ++k) {
    if (!(profile.kappa[k] > 0.0)) continue;
    const auto b = bonnet_myers(geo, profile, k);
    if (!diam || b.diam < diam->diam) diam = b;
  }
  if (diam) {
    s["diameter"] = {{"k", diam->k}, {"diam", number(diam->diam)}, {"mean_distance", number(diam->mean_distance)}};
  } else {
    s["diameter"] = {{"error", "NoPositiveKappa"}};
  }

  Json conc;
  conc["variance_bound"] = guarded([&] { return Json(number(variance_bound(profile, geo))); });
  if (chain.reversible()) {
    conc["gaussian"] = guarded([&] { return to_json(gaussian_tail_reversible(chain, profile, geo, 1.0)); });
  }
  conc["nonreversible"] = guarded([&] { return to_json(tail_nonreversible(profile, geo, 1.0)); });
  s["concentration"] = conc;

  s["mcmc"] = guarded([&] {
    auto shared = std::make_shared<const ChainSpec>(chain);
    unsigned first = 0;
    for (unsigned k = 1; k <= o.K && first == 0; ++k) {
      if (profile.kappa[k] > 0.0) first = k;
    }
    if (first == 0) fail(ErrorCode::kNoPositiveKappa, "no kappa_K > 0 within the profile horizon");
    McmcPlan plan = make_plan(shared, chain.pi(), 1000, 0, first, 1.0, profile);
    plan.K = best_variance_lag(plan, profile, geo);
    Json m;
    m["plan"] = {{"N", plan.N}, {"t0", plan.t0}, {"K", plan.K}, {"q", "stationary"}};
    m["bias"] = number(bias_bound(plan, profile));
    m["variance"] = number(mcmc_variance_bound(plan, profile, geo));
    return m;
  });

  report.files["profile.csv"] = profile_csv(profile);
  report.files["geometry.csv"] = geometry_csv(geo, space);

  if (o.certify) {
    if (chain.size() > kMaxOracleStates) {
      s["certification"] = {{"error", "TooLarge"}};
      report.pass = false;
    } else {
      std::vector<Claim> claims;
      const unsigned kmax = std::min(o.kmax, o.K);
      const OracleReport orc = exact_gaps(chain, kmax);
      if (gap) {
        for (unsigned k = 1; k <= o.K; ++k) {
          if (std::isnan(gap->per_lag[k])) continue;
          claims.push_back({lag_name("gamma_star", k), gap->per_lag[k], orc.gamma_star, Direction::kLower});
          claims.push_back({lag_name("gamma_star_linear", k), gap->linear[k], orc.gamma_star, Direction::kLower});
        }
      }
      if (pseudo) {
        for (unsigned k = 1; k <= kmax; ++k) {
          if (std::isnan(pseudo->per_lag[k])) continue;
          claims.push_back({lag_name("gamma_ps", k), pseudo->per_lag[k], orc.gamma_ps_by_k[k - 1], Direction::kLower});
        }
      }
      std::vector<double> eps_all = o.eps;
      if (std::find(eps_all.begin(), eps_all.end(), 0.25) == eps_all.end()) eps_all.push_back(0.25);
      for (double e : o.eps) eps_all.push_back(e / 2.0);
      const auto mix = exact_mixing(chain, eps_all);
      for (std::size_t i = 0; i < o.eps.size(); ++i) {
        if (mix_bounds[i]) {
          claims.push_back({"t_mix_eps" + format_double(o.eps[i]), static_cast<double>(*mix_bounds[i]),
                            static_cast<double>(mix[i].t), Direction::kUpper});
        }
        const std::size_t t_half = mix[mix.size() - o.eps.size() + i].t;
        if (t_half >= 1 && space.d0() > 0.0) {
          const auto kf = kappa_from_mixing(static_cast<unsigned>(t_half), o.eps[i], space.d0(), space.diam());
          const double exact = kf.k <= o.K ? profile.kappa[kf.k] : kappa_k(chain, kf.k, sel);
          claims.push_back({"kappa_from_mixing_eps" + format_double(o.eps[i]), kf.kappa_lower, exact, Direction::kLower});
        }
      }
      try {
        const double vb = variance_bound(profile, geo);
        const Vector& pi = chain.pi().weights();
        claims.push_back({"variance_dist_first", vb, exact_variance(pi, distance_observable(chain, 0)), Direction::kUpper});
        claims.push_back({"variance_dist_last", vb, exact_variance(pi, distance_observable(chain, chain.size() - 1)),
                          Direction::kUpper});
      } catch (const Error&) {
      }
      if (diam) {
        claims.push_back({"diameter", diam->diam, space.diam(), Direction::kUpper});
        claims.push_back({"mean_distance", diam->mean_distance, mean_pair_distance(chain), Direction::kUpper});
      }
      if (model) model_claims(profile, orc, mix, *model, claims);

      const VerdictTable table = certify(claims);
      Json oracle;
      oracle["gamma"] = number(orc.gamma);
      oracle["gamma_star"] = number(orc.gamma_star);
      oracle["gamma_ps"] = number(orc.gamma_ps);
      oracle["t_mix"] = Json::array();
      for (std::size_t i = 0; i < o.eps.size(); ++i) oracle["t_mix"].push_back({{"eps", o.eps[i]}, {"t", mix[i].t}});
      s["oracle"] = oracle;
      s["certification"] = {{"passed", table.passed}, {"failed", table.failed}, {"all_pass", table.all_pass()}};
      report.files["verdicts.csv"] = verdict_csv(table);
      report.files["verdicts.json"] = verdict_json(table).dump(2) + "\n";
      report.pass = table.all_pass();
    }
  }
  s["pass"] = report.pass;
  report.files["bounds.json"] = s.dump(2) + "\n";
  return report;
}

// ===========================================================================
// mcmc

McmcOptions mcmc_options_from_json(const Json& doc) {
  McmcOptions o;
  if (doc.is_null()) return o;
  reject_unknown(doc,
                 {"steps", "t0", "K", "profile_K", "q", "anchor", "replicas", "seed", "workers", "t_grid", "pairs"},
                 "mcmc");
  read(doc, "steps", o.steps);
  read(doc, "t0", o.t0);
  read(doc, "K", o.K);
  read(doc, "profile_K", o.profile_K);
  read(doc, "q", o.q);
  read(doc, "anchor", o.anchor);
  read(doc, "replicas", o.replicas);
  read(doc, "seed", o.seed);
  read(doc, "workers", o.workers);
  read(doc, "t_grid", o.t_grid);
  read(doc, "pairs", o.pairs);
  return o;
}

Report run_mcmc(std::shared_ptr<const ChainSpec> chain, const McmcOptions& o) {
  if (!chain) fail(ErrorCode::kInvalidArgument, "mcmc needs a chain");
  if (o.profile_K < 1) fail(ErrorCode::kInvalidArgument, "profile_K must be >= 1");
  if (o.replicas < 2) fail(ErrorCode::kInvalidArgument, "need at least two replicas");
  const CurvatureProfile profile = curvature_profile(*chain, o.profile_K, choose_pairs(*chain, o.pairs));
  const GeometrySummary geo = geometry(*chain);

  Distribution q = chain->pi();
  if (o.q.rfind("state:", 0) == 0) {
    std::size_t idx = 0;
    try {
      idx = std::stoul(o.q.substr(6));
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument, "q must be 'stationary' or 'state:<index>'");
    }
    if (idx >= chain->size()) fail(ErrorCode::kInvalidArgument, "initial state out of range");
    q = Distribution::dirac(chain->size(), idx);
  } else if (o.q != "stationary") {
    fail(ErrorCode::kInvalidArgument, "q must be 'stationary' or 'state:<index>'");
  }

  unsigned K = o.K;
  if (K == 0) {
    for (unsigned k = 1; k <= profile.K() && K == 0; ++k) {
      if (profile.kappa[k] > 0.0) K = k;
    }
    if (K == 0) fail(ErrorCode::kNoPositiveKappa, "no kappa_K > 0 within the profile horizon");
  }
  McmcPlan plan = make_plan(chain, q, o.steps, o.t0, K, 1.0, profile);
  if (o.K == 0) plan.K = best_variance_lag(plan, profile, geo);

  const Vector f = distance_observable(*chain, o.anchor);
  const double pi_f = chain->pi().weights().dot(f);
  const double bias = bias_bound(plan, profile);
  const double var = mcmc_variance_bound(plan, profile, geo);
  std::optional<TailBound> tail1;
  std::optional<TailBound> tail2;
  Json bounds;
  bounds["bias"] = number(bias);
  bounds["variance"] = number(var);
  try {
    tail1 = mcmc_tail_bound(plan, profile, geo);
    bounds["tail"] = to_json(*tail1);
  } catch (const Error& e) {
    bounds["tail"] = {{"error", to_string(e.code())}};
  }
  try {
    tail2 = mcmc_tail_bound2(plan, profile, geo);
    bounds["tail2"] = to_json(*tail2);
  } catch (const Error& e) {
    bounds["tail2"] = {{"error", to_string(e.code())}};
  }

  const double bias_exact = exact_bias(*chain, q.weights(), f, plan.N, plan.t0);
  const Simulation sim = simulate(plan, f, o.replicas, o.seed, o.workers);

  std::vector<double> grid = o.t_grid;
  if (grid.empty()) {
    double sd = std::sqrt(var);
    if (!std::isfinite(sd) || sd <= 0.0) sd = std::sqrt(sim.variance);
    for (double m : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) grid.push_back(m * sd);
  }

  std::vector<Claim> claims;
  claims.push_back({"bias_exact", bias, bias_exact, Direction::kUpper});
  claims.push_back({"bias_empirical", bias, std::abs(sim.mean - pi_f) - 3.0 * sim.se_mean, Direction::kUpper});
  claims.push_back({"variance_empirical", var, sim.variance - 3.0 * sim.se_variance, Direction::kUpper});
  std::ostringstream tail_csv;
  tail_csv << "t,bound,empirical,stderr\n";
  for (double t : grid) {
    if (!(t >= 0.0)) fail(ErrorCode::kInvalidArgument, "tail thresholds must be >= 0");
    const EmpiricalTail e = empirical_tail(sim.Z, pi_f, t);
    double b = std::numeric_limits<double>::infinity();
    if (tail1) {
      b = std::min(b, (*tail1)(t));
      claims.push_back({"tail_t" + format_double(t), (*tail1)(t), e.probability - 3.0 * e.se, Direction::kUpper});
    }
    if (tail2) {
      b = std::min(b, (*tail2)(t));
      claims.push_back({"tail2_t" + format_double(t), (*tail2)(t), e.probability - 3.0 * e.se, Direction::kUpper});
    }
    tail_csv << format_double(t) << ',' << format_double(b) << ',' << format_double(e.probability) << ','
             << format_double(e.se) << '\n';
  }
  const VerdictTable table = certify(claims);

  Report report;
  Json& s = report.summary;
  s["command"] = "mcmc";
  s["plan"] = to_json(plan);
  s["replicas"] = o.replicas;
  s["seed"] = o.seed;
  s["observable"] = {{"kind", "distance"}, {"anchor", o.anchor}, {"pi_f", pi_f}};
  s["bounds"] = bounds;
  s["exact"] = {{"bias", bias_exact}};
  s["empirical"] = {{"mean", sim.mean},
                    {"se_mean", sim.se_mean},
                    {"variance", sim.variance},
                    {"se_variance", sim.se_variance}};
  s["certification"] = {{"passed", table.passed}, {"failed", table.failed}, {"all_pass", table.all_pass()}};
  report.pass = table.all_pass();
  s["pass"] = report.pass;
  report.files["mcmc.json"] = s.dump(2) + "\n";
  report.files["tail.csv"] = tail_csv.str();
  report.files["verdicts.csv"] = verdict_csv(table);
  return report;
}

// ===========================================================================
// cube figure

CubeFigureOptions cube_figure_options_from_json(const Json& doc) {
  CubeFigureOptions o;
  if (doc.is_null()) return o;
  reject_unknown(doc, {"N", "R", "K", "window"}, "cube-figure");
  read(doc, "N", o.N);
  read(doc, "R", o.R);
  read(doc, "K", o.K);
  read(doc, "window", o.window);
  return o;
}

Report cube_figure(const CubeFigureOptions& o) {
  const CubeTable table = cube_recursion(o.N, o.R, o.K);
  Report report;
  const std::size_t j_end = std::min(o.N, o.R + o.window);
  int panel = 1;
  Json panels = Json::array();
  for (std::size_t k : {std::size_t{1}, std::size_t{100}, std::size_t{500}}) {
    const std::string name = "panel" + std::to_string(panel++) + "_k" + std::to_string(k) + ".csv";
    if (k > table.K) continue;
    std::ostringstream os;
    os << "j,kappa_tilde\n";
    for (std::size_t j = o.R; j < j_end; ++j) os << j << ',' << format_double(table.tilde(k, j)) << '\n';
    report.files[name] = os.str();
    panels.push_back(name);
  }
  std::ostringstream p4;
  p4 << "k,min_kappa_tilde\n";
  for (std::size_t k = 1; k <= table.K; ++k) p4 << k << ',' << format_double(table.min_tilde(k)) << '\n';
  report.files["panel4_min.csv"] = p4.str();
  panels.push_back("panel4_min.csv");
  report.files["cube_table.csv"] = cube_table_csv(table);

  std::vector<Claim> claims;
  if (10 * o.R <= o.N) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= table.K; ++k) {
      for (std::size_t j = o.R; j < o.N; ++j) worst = std::max(worst, table.hat(k, j) - table.tilde(k, j));
    }
    claims.push_back({"hat_below_tilde", worst, 0.0, Direction::kLower});
    if (table.K >= o.N && table.rho > 0.0) {
      claims.push_back({"rho_below_kappa_N", table.rho, table.min_tilde(o.N), Direction::kLower});
    }
  }
  const VerdictTable verdicts = certify(claims, 1e-12);

  Json& s = report.summary;
  s["command"] = "cube-figure";
  s["N"] = o.N;
  s["R"] = o.R;
  s["K"] = o.K;
  s["kappa_tilde_1_R"] = table.tilde(1, o.R);
  const std::size_t first = table.first_positive();
  s["first_positive_k"] = first == 0 ? Json(nullptr) : Json(first);
  s["min_kappa_tilde_K"] = table.min_tilde(table.K);
  s["rho"] = number(table.rho);
  s["kappa_sigma_c_bound"] = number(table.kappa_sigma_c_bound());
  s["panels"] = panels;
  s["certification"] = {{"passed", verdicts.passed}, {"failed", verdicts.failed}, {"all_pass", verdicts.all_pass()}};
  report.pass = verdicts.all_pass();
  s["pass"] = report.pass;
  report.files["cube_figure.json"] = s.dump(2) + "\n";
  report.files["verdicts.csv"] = verdict_csv(verdicts);
  return report;
}

// ===========================================================================
// certify-all

Report certify_all() {
  struct Entry {
    std::string label;
    ModelRef model;
    unsigned K;
  };
  const std::vector<Entry> entries = {
      {"two_state_sym", {"two-state", {{"a", 0.25}, {"b", 0.25}}}, 8},
      {"two_state_asym", {"two-state", {{"a", 0.1}, {"b", 0.3}}}, 10},
      {"split_merge_5", {"split-merge", {{"N", 5}}}, 20},
      {"curie_weiss_random", {"curie-weiss", {{"N", 6}, {"beta", 0.5}, {"scan", 0}}}, 10},
      {"curie_weiss_systemic", {"curie-weiss", {{"N", 6}, {"beta", 0.5}, {"scan", 1}}}, 6},
      {"ising1d_random", {"ising1d", {{"N", 6}, {"beta", 0.25}, {"scan", 0}}}, 10},
      {"ising1d_systemic", {"ising1d", {{"N", 6}, {"beta", 0.25}, {"scan", 1}}}, 6},
      {"binary_cube_6_3", {"binary-cube", {{"N", 6}, {"R", 3}}}, 20},
      {"binary_cube_10_1", {"binary-cube", {{"N", 10}, {"R", 1}}}, 30},
  };
  Report report;
  Json models = Json::array();
  std::ostringstream csv;
  csv << "model,claim,direction,bound,oracle,slack,pass\n";
  std::size_t passed = 0;
  std::size_t failed = 0;
  for (const auto& e : entries) {
    AnalyzeOptions o;
    o.K = e.K;
    o.certify = true;
    o.kmax = 3;
    const auto chain = make_model(e.model.name, e.model.params);
    const Report r = analyze(*chain, o, e.model);
    const auto& cert = r.summary.at("certification");
    const std::size_t p = cert.value("passed", std::size_t{0});
    const std::size_t f = cert.value("failed", std::size_t{0});
    passed += p;
    failed += f;
    models.push_back({{"label", e.label}, {"model", e.model.name}, {"passed", p}, {"failed", f}});
    if (auto it = r.files.find("verdicts.csv"); it != r.files.end()) {
      std::istringstream lines(it->second);
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) csv << e.label << ',' << line << '\n';
    }
    report.pass = report.pass && r.pass;
  }
  Json& s = report.summary;
  s["command"] = "certify-all";
  s["models"] = models;
  s["passed"] = passed;
  s["failed"] = failed;
  s["all_pass"] = report.pass;
  s["pass"] = report.pass;
  report.files["certify_all.json"] = s.dump(2) + "\n";
  report.files["verdicts.csv"] = csv.str();
  return report;
}

// ===========================================================================

Json model_list_json() {
  Json out = Json::array();
  for (const auto& m : model_list()) {
    Json params = Json::array();
    for (const auto& p : m.params) params.push_back({{"name", p.name}, {"default", p.default_value}, {"help", p.help}});
    out.push_back({{"name", m.name}, {"description", m.description}, {"params", params}});
  }
  return out;
}

std::string model_list_csv() {
  std::ostringstream os;
  os << "model,param,default,help\n";
  for (const auto& m : model_list()) {
    for (const auto& p : m.params) {
      os << m.name << ',' << p.name << ',' << format_double(p.default_value) << ',' << csv_field(p.help) << '\n';
    }
  }
  return os.str();
}

}  // namespace ricci
