#include "ricci/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ricci/error.hpp"

namespace ricci {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::kInvalidChain, std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      fail(ErrorCode::kInvalidChain, std::string(what) + " row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        fail(ErrorCode::kInvalidChain, std::string(what) + " entry (" + std::to_string(i) + ", " +
                                           std::to_string(c) + ") is not a number");
      }
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

std::shared_ptr<const ChainSpec> chain_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kInvalidChain, "chain document must be a JSON object");
  static const std::set<std::string> known = {"labels", "distance", "transition", "stationary"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) fail(ErrorCode::kInvalidChain, "unknown field '" + item.key() + "'");
  }
  if (!doc.contains("distance") || !doc.contains("transition")) {
    fail(ErrorCode::kInvalidChain, "chain document needs 'distance' and 'transition'");
  }
  Matrix d = matrix_from_json(doc["distance"], "distance");
  Matrix p = matrix_from_json(doc["transition"], "transition");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const Json& l = doc["labels"];
    if (!l.is_array()) fail(ErrorCode::kInvalidChain, "labels must be an array of strings");
    for (const auto& s : l) {
      if (!s.is_string()) fail(ErrorCode::kInvalidChain, "labels must be an array of strings");
      labels.push_back(s.get<std::string>());
    }
  } else {
    for (Eigen::Index i = 0; i < d.rows(); ++i) labels.push_back(std::to_string(i));
  }
  auto space = std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(d));
  MarkovKernel kernel(std::move(space), p);
  std::optional<Distribution> pi;
  if (doc.contains("stationary") && !doc["stationary"].is_null()) {
    const Json& s = doc["stationary"];
    if (!s.is_array() || s.size() != kernel.size()) fail(ErrorCode::kInvalidChain, "stationary has the wrong length");
    Vector w(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_number()) fail(ErrorCode::kInvalidChain, "stationary entries must be numbers");
      w(static_cast<Eigen::Index>(i)) = s[i].get<double>();
    }
    pi = Distribution(std::move(w));
  }
  return std::make_shared<const ChainSpec>(std::move(kernel), std::move(pi));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path);
}

std::shared_ptr<const ChainSpec> load_chain(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kInvalidChain, std::string("malformed JSON: ") + e.what());
  }
  return chain_from_json(doc);
}

Json chain_to_json(const ChainSpec& chain) {
  Json doc;
  doc["labels"] = chain.space().labels();
  doc["distance"] = matrix_to_json(chain.space().distances());
  doc["transition"] = matrix_to_json(chain.kernel().dense());
  doc["stationary"] = vector_to_json(chain.pi().weights());
  return doc;
}

void save_chain(const ChainSpec& chain, const std::string& path) {
  write_text(path, chain_to_json(chain).dump(2) + "\n");
}

Json to_json(const TailBound& b) {
  Json j;
  j["D"] = number(b.D);
  j["t_max"] = number(b.t_max);
  j["lambda_max"] = number(b.lambda_max);
  j["prefactor"] = number(b.prefactor);
  return j;
}

Json to_json(const DobrushinData& d) {
  Json j;
  j["A"] = matrix_to_json(d.A);
  j["B"] = matrix_to_json(d.B);
  j["norm1"] = d.norm1;
  j["norm1_row"] = d.norm1_row;
  j["spectral_radius"] = d.spectral_radius;
  j["dobrushin_condition"] = d.dobrushin_condition;
  j["dobrushin_condition_row"] = d.dobrushin_condition_row;
  j["beta"] = d.beta;
  j["h"] = d.h;
  j["x"] = d.x;
  j["rho"] = d.rho;
  return j;
}

Json to_json(const McmcPlan& plan) {
  Json j;
  j["N"] = plan.N;
  j["t0"] = plan.t0;
  j["K"] = plan.K;
  j["f_lip"] = plan.f_lip;
  j["q"] = vector_to_json(plan.q.weights());
  j["w1_q_pi"] = plan.w1_q_pi;
  return j;
}

McmcPlan plan_from_json(const Json& doc, std::shared_ptr<const ChainSpec> chain, const CurvatureProfile& profile) {
  static const std::set<std::string> known = {"N", "t0", "K", "f_lip", "q", "w1_q_pi"};
  if (!doc.is_object()) fail(ErrorCode::kInvalidArgument, "plan must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) fail(ErrorCode::kInvalidArgument, "unknown plan field '" + item.key() + "'");
  }
  try {
    const Json& q = doc.at("q");
    Vector w(static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) w(static_cast<Eigen::Index>(i)) = q[i].get<double>();
    return make_plan(std::move(chain), Distribution(std::move(w)), doc.at("N").get<std::size_t>(),
                     doc.at("t0").get<std::size_t>(), doc.at("K").get<unsigned>(), doc.value("f_lip", 1.0), profile);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed plan: ") + e.what());
  }
}

// ===========================================================================
// CSV

std::string profile_csv(const CurvatureProfile& profile) {
  std::ostringstream os;
  os << "k,kappa_k,one_minus_kappa_k,running_kappa_sigma_c\n";
  for (unsigned k = 0; k <= profile.K(); ++k) {
    os << k << ',' << format_double(profile.kappa[k]) << ',' << format_double(1.0 - profile.kappa[k]) << ','
       << format_double(profile.running_sigma_c[k]) << '\n';
  }
  return os.str();
}

std::string geometry_csv(const GeometrySummary& s, const FiniteMetricSpace& space) {
  std::ostringstream os;
  os << "state,label,sigma,sigma_hat,sigma_inf,S_upper,n_lower,ecc";
  for (const auto& [k, v] : s.J) os << ",J_" << k;
  os << '\n';
  for (Eigen::Index x = 0; x < s.sigma.size(); ++x) {
    std::string label = space.labels()[static_cast<std::size_t>(x)];
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      label = quoted + "\"";
    }
    os << x << ',' << label << ',' << format_double(s.sigma(x)) << ',' << format_double(s.sigma_hat(x)) << ','
       << format_double(s.sigma_inf(x)) << ',' << format_double(s.S_upper(x)) << ','
       << format_double(s.n_lower(x)) << ',' << format_double(s.ecc(x));
    for (const auto& [k, v] : s.J) os << ',' << format_double(v(x));
    os << '\n';
  }
  return os.str();
}

std::string tail_curve_csv(const TailBound& b, const std::vector<double>& t) {
  std::ostringstream os;
  os << "t,bound\n";
  for (double x : t) os << format_double(x) << ',' << format_double(b(x)) << '\n';
  return os.str();
}

std::string cube_table_csv(const CubeTable& table) {
  std::ostringstream os;
  os << "k,j,kappa_tilde,kappa_hat\n";
  for (std::size_t k = 1; k <= table.K; ++k) {
    for (std::size_t j = table.R; j < table.N; ++j) {
      os << k << ',' << j << ',' << format_double(table.tilde(k, j)) << ',' << format_double(table.hat(k, j)) << '\n';
    }
  }
  return os.str();
}

std::string verdict_csv(const VerdictTable& table) {
  std::ostringstream os;
  os << "claim,direction,bound,oracle,slack,pass\n";
  for (const auto& v : table.verdicts) {
    os << v.claim.name << ',' << (v.claim.direction == Direction::kLower ? "lower" : "upper") << ','
       << format_double(v.claim.bound) << ',' << format_double(v.claim.oracle) << ',' << format_double(v.slack)
       << ',' << (v.pass ? "pass" : "fail") << '\n';
  }
  return os.str();
}

Json verdict_json(const VerdictTable& table) {
  Json j;
  j["passed"] = table.passed;
  j["failed"] = table.failed;
  j["all_pass"] = table.all_pass();
  Json list = Json::array();
  for (const auto& v : table.verdicts) {
    Json e;
    e["claim"] = v.claim.name;
    e["direction"] = v.claim.direction == Direction::kLower ? "lower" : "upper";
    e["bound"] = number(v.claim.bound);
    e["oracle"] = number(v.claim.oracle);
    e["slack"] = number(v.slack);
    e["pass"] = v.pass;
    list.push_back(std::move(e));
  }
  j["verdicts"] = std::move(list);
  return j;
}

}  // namespace ricci
