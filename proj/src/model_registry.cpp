#include <cmath>

#include "ricci/error.hpp"
#include "ricci/model_zoo.hpp"

namespace ricci {

namespace {

double param(const ModelInfo& info, const std::map<std::string, double>& given, const std::string& name) {
  if (auto it = given.find(name); it != given.end()) return it->second;
  for (const auto& p : info.params) {
    if (p.name == name) return p.default_value;
  }
  fail(ErrorCode::kInvalidArgument, "model " + info.name + " has no parameter " + name);
}

std::size_t integer(double v, const std::string& name) {
  if (!std::isfinite(v) || v < 0.0 || std::floor(v) != v || v > 1e9) {
    fail(ErrorCode::kInvalidArgument, "parameter " + name + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

Scan scan_of(double v) {
  const auto s = integer(v, "scan");
  if (s > 1) fail(ErrorCode::kInvalidArgument, "scan must be 0 (random) or 1 (systemic)");
  return s == 0 ? Scan::kRandom : Scan::kSystemic;
}

Boundary boundary_of(double v) {
  const auto b = integer(v, "boundary");
  if (b > 2) fail(ErrorCode::kInvalidArgument, "boundary must be 0 (minus), 1 (plus) or 2 (free)");
  return b == 0 ? Boundary::kMinus : b == 1 ? Boundary::kPlus : Boundary::kFree;
}

}  // namespace

const std::vector<ModelInfo>& model_list() {
  static const std::vector<ModelInfo> models = {
      {"two-state", "P = [[1-a, a], [b, 1-b]] on two points at distance 1",
       {{"a", 0.25, "probability 0 -> 1"}, {"b", 0.25, "probability 1 -> 0"}}},
      {"split-merge", "split-merge walk on integer partitions of N with the split/merge distance",
       {{"N", 5, "integer being partitioned"}}},
      {"curie-weiss", "Glauber dynamics for the Curie-Weiss model, Hamming metric",
       {{"N", 6, "number of spins"},
        {"beta", 0.5, "inverse temperature"},
        {"h", 0.0, "external field"},
        {"scan", 0, "0 random scan, 1 systemic scan"}}},
      {"ising1d", "Glauber dynamics for the 1D Ising chain, coupling beta per bond",
       {{"N", 6, "number of spins"},
        {"beta", 0.25, "coupling per bond"},
        {"h", 0.0, "external field"},
        {"scan", 0, "0 random scan, 1 systemic scan"},
        {"boundary", 0, "0 minus, 1 plus, 2 free"}}},
      {"binary-cube", "lazy walk on {x in {0,1}^N : |x| >= R}",
       {{"N", 6, "dimension"}, {"R", 3, "lowest allowed level"}}},
  };
  return models;
}

std::shared_ptr<const ChainSpec> two_state_chain(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "two-state chain needs a, b in [0, 1]");
  }
  if (a == 0.0 && b == 0.0) fail(ErrorCode::kNonUniqueStationary, "two-state chain with a = b = 0 is reducible");
  Matrix d(2, 2);
  d << 0.0, 1.0, 1.0, 0.0;
  auto space = std::make_shared<const FiniteMetricSpace>(std::vector<std::string>{"0", "1"}, d);
  Matrix P(2, 2);
  P << 1.0 - a, a, b, 1.0 - b;
  Vector pi(2);
  pi << b / (a + b), a / (a + b);
  std::vector<Permutation> gens;
  if (a == b) gens.push_back({1, 0});
  return std::make_shared<const ChainSpec>(MarkovKernel(std::move(space), P), Distribution(std::move(pi)),
                                           std::move(gens));
}

std::shared_ptr<const ChainSpec> make_model(const std::string& name, const std::map<std::string, double>& params) {
  const ModelInfo* info = nullptr;
  for (const auto& m : model_list()) {
    if (m.name == name) info = &m;
  }
  if (info == nullptr) fail(ErrorCode::kInvalidArgument, "unknown model " + name);
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& p : info->params) known = known || p.name == key;
    if (!known) fail(ErrorCode::kInvalidArgument, "model " + name + " has no parameter " + key);
    if (!std::isfinite(value)) fail(ErrorCode::kInvalidArgument, "parameter " + key + " must be finite");
  }
  auto get = [&](const std::string& key) { return param(*info, params, key); };
  if (name == "two-state") return two_state_chain(get("a"), get("b"));
  if (name == "split-merge") return split_merge_chain(static_cast<unsigned>(integer(get("N"), "N")));
  if (name == "curie-weiss") {
    return curie_weiss_chain(integer(get("N"), "N"), get("beta"), get("h"), scan_of(get("scan")));
  }
  if (name == "ising1d") {
    return ising1d_chain(integer(get("N"), "N"), get("beta"), get("h"), scan_of(get("scan")),
                         boundary_of(get("boundary")));
  }
  return binary_cube_chain(integer(get("N"), "N"), integer(get("R"), "R"));
}

}  // namespace ricci
