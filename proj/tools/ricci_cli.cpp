// Command-line front end. Talks to the library only through ricci.h.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ricci/ricci.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct ChainFlags {
  std::string model;
  std::string input;
  double a = 0, b = 0, beta = 0, h = 0;
  unsigned N = 0, R = 0;
  std::string scan = "random";
  std::string boundary = "minus";
};

struct Common {
  std::string out;
  std::string format = "json";
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f) {
  auto* model = cmd->add_option("--model", f.model, "Model name (see model-list)");
  auto* input = cmd->add_option("--input", f.input, "Chain JSON file")->check(CLI::ExistingFile);
  model->excludes(input);
  cmd->add_option("--a", f.a, "two-state: P(0 -> 1)");
  cmd->add_option("--b", f.b, "two-state: P(1 -> 0)");
  cmd->add_option("--N", f.N, "Size parameter");
  cmd->add_option("--beta", f.beta, "Inverse temperature");
  cmd->add_option("--h", f.h, "External field");
  cmd->add_option("--R", f.R, "binary-cube: lowest allowed level");
  cmd->add_option("--scan", f.scan, "Glauber scan")->check(CLI::IsMember({"random", "systemic"}));
  cmd->add_option("--boundary", f.boundary, "Ising boundary")->check(CLI::IsMember({"minus", "plus", "free"}));
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--format", c.format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));
}

int report_error(ricci_status status) {
  std::cerr << "error: " << ricci_status_string(status) << ": " << ricci_last_error() << '\n';
  return kExitInvalid;
}

class ChainHandle {
 public:
  ~ChainHandle() { ricci_chain_free(chain_); }
  ricci_chain* get() const { return chain_; }
  ricci_chain** out() { return &chain_; }

 private:
  ricci_chain* chain_ = nullptr;
};

class ReportHandle {
 public:
  ~ReportHandle() { ricci_report_free(report_); }
  ricci_report* get() const { return report_; }
  ricci_report** out() { return &report_; }

 private:
  ricci_report* report_ = nullptr;
};

ricci_status load(const CLI::App* cmd, const ChainFlags& f, ChainHandle& chain) {
  if (!f.input.empty()) return ricci_chain_from_json_file(f.input.c_str(), chain.out());
  if (f.model.empty()) {
    std::cerr << "error: one of --model or --input is required\n";
    return RICCI_INVALID_ARGUMENT;
  }
  std::map<std::string, double> params;
  for (const char* name : {"a", "b", "beta", "h"}) {
    const auto* opt = cmd->get_option(std::string("--") + name);
    if (opt->count() > 0) params[name] = opt->as<double>();
  }
  for (const char* name : {"N", "R"}) {
    const auto* opt = cmd->get_option(std::string("--") + name);
    if (opt->count() > 0) params[name] = static_cast<double>(opt->as<unsigned>());
  }
  if (cmd->get_option("--scan")->count() > 0) params["scan"] = f.scan == "systemic" ? 1.0 : 0.0;
  if (cmd->get_option("--boundary")->count() > 0) {
    params["boundary"] = f.boundary == "minus" ? 0.0 : f.boundary == "plus" ? 1.0 : 2.0;
  }
  std::vector<const char*> keys;
  std::vector<double> values;
  for (const auto& [k, v] : params) {
    keys.push_back(k.c_str());
    values.push_back(v);
  }
  return ricci_chain_from_model(f.model.c_str(), keys.data(), values.data(), keys.size(), chain.out());
}

// CSV to stdout: the file named `csv_file` from --out, else the summary.
int emit(const ReportHandle& report, const Common& c, const std::string& csv_file) {
  if (c.format == "csv" && !c.out.empty()) {
    const std::string path = c.out + "/" + csv_file;
    if (FILE* fp = std::fopen(path.c_str(), "rb")) {
      char buf[4096];
      std::size_t n;
      while ((n = std::fread(buf, 1, sizeof(buf), fp)) > 0) std::fwrite(buf, 1, n, stdout);
      std::fclose(fp);
    }
  } else {
    std::cout << ricci_report_json(report.get()) << '\n';
  }
  return ricci_report_passed(report.get()) ? kExitPass : kExitFailed;
}

const char* out_dir(const Common& c) { return c.out.empty() ? nullptr : c.out.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse Ricci curvature toolkit for finite Markov chains"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // analyze
  ChainFlags af;
  Common ac;
  unsigned K = 10, kmax = 5;
  std::vector<double> eps = {0.25, 0.125};
  bool certify = false;
  std::string pairs = "auto";
  auto* analyze = app.add_subcommand("analyze", "Curvature profile, geometry and bounds");
  add_chain_flags(analyze, af);
  add_common(analyze, ac);
  analyze->add_option("--K", K, "Curvature horizon")->check(CLI::PositiveNumber);
  analyze->add_option("--eps", eps, "Mixing thresholds")->delimiter(',');
  analyze->add_flag("--certify", certify, "Compare every bound with the exact oracles");
  analyze->add_option("--kmax", kmax, "Lags for the pseudo-gap oracle");
  analyze->add_option("--pairs", pairs, "Pair set")->check(CLI::IsMember({"auto", "all", "geodesic"}));

  // mcmc
  ChainFlags mf;
  Common mc;
  std::size_t steps = 1000, t0 = 0, replicas = 10000;
  unsigned lag = 0, profile_K = 20, workers = 1, anchor = 0;
  std::uint64_t seed = 1;
  std::string q = "stationary";
  std::vector<double> t_grid;
  auto* mcmc = app.add_subcommand("mcmc", "MCMC error bounds against a Monte Carlo run");
  add_chain_flags(mcmc, mf);
  add_common(mcmc, mc);
  mcmc->add_option("--steps", steps, "Chain length N");
  mcmc->add_option("--t0", t0, "Burn-in");
  mcmc->add_option("--lag", lag, "Curvature lag K (0 picks the best)");
  mcmc->add_option("--profile-K", profile_K, "Curvature horizon");
  mcmc->add_option("--q", q, "Initial law: stationary or state:<index>");
  mcmc->add_option("--anchor", anchor, "Observable f(x) = d(x, anchor)");
  mcmc->add_option("--t", t_grid, "Tail thresholds")->delimiter(',');
  mcmc->add_option("--replicas", replicas, "Independent runs");
  mcmc->add_option("--seed", seed, "RNG seed");
  mcmc->add_option("--workers", workers, "Threads (output does not depend on this)");

  // cube-figure
  Common cc;
  std::size_t cN = 500, cR = 100, cK = 500, window = 30;
  auto* cube = app.add_subcommand("cube-figure", "Binary cube curvature recursion panels");
  add_common(cube, cc);
  cube->add_option("--N", cN, "Dimension");
  cube->add_option("--R", cR, "Lowest allowed level");
  cube->add_option("--K", cK, "Steps");
  cube->add_option("--window", window, "Panel width in j");

  Common lc;
  auto* list = app.add_subcommand("model-list", "Available models and parameters");
  list->add_option("--format", lc.format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));

  Common xc;
  auto* all = app.add_subcommand("certify-all", "analyze --certify over the built-in model set");
  add_common(all, xc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  ReportHandle report;
  ricci_status st = RICCI_OK;
  if (analyze->parsed()) {
    ChainHandle chain;
    if ((st = load(analyze, af, chain)) != RICCI_OK) return report_error(st);
    Json o;
    o["K"] = K;
    o["eps"] = eps;
    o["certify"] = certify;
    o["kmax"] = kmax;
    o["pairs"] = pairs;
    if ((st = ricci_analyze(chain.get(), o.dump().c_str(), out_dir(ac), report.out())) != RICCI_OK) {
      return report_error(st);
    }
    return emit(report, ac, "profile.csv");
  }
  if (mcmc->parsed()) {
    ChainHandle chain;
    if ((st = load(mcmc, mf, chain)) != RICCI_OK) return report_error(st);
    Json o;
    o["steps"] = steps;
    o["t0"] = t0;
    o["K"] = lag;
    o["profile_K"] = profile_K;
    o["q"] = q;
    o["anchor"] = anchor;
    o["replicas"] = replicas;
    o["seed"] = seed;
    o["workers"] = workers;
    if (!t_grid.empty()) o["t_grid"] = t_grid;
    if ((st = ricci_mcmc(chain.get(), o.dump().c_str(), out_dir(mc), report.out())) != RICCI_OK) {
      return report_error(st);
    }
    return emit(report, mc, "tail.csv");
  }
  if (cube->parsed()) {
    Json o;
    o["N"] = cN;
    o["R"] = cR;
    o["K"] = cK;
    o["window"] = window;
    if ((st = ricci_cube_figure(o.dump().c_str(), out_dir(cc), report.out())) != RICCI_OK) return report_error(st);
    return emit(report, cc, "panel4_min.csv");
  }
  if (list->parsed()) {
    if ((st = ricci_model_list(lc.format.c_str(), report.out())) != RICCI_OK) return report_error(st);
    std::cout << ricci_report_json(report.get());
    if (lc.format == "json") std::cout << '\n';
    return kExitPass;
  }
  if ((st = ricci_certify_all(out_dir(xc), report.out())) != RICCI_OK) return report_error(st);
  return emit(report, xc, "verdicts.csv");
}
