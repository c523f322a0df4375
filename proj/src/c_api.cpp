#include "ricci/ricci.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "ricci/error.hpp"
#include "ricci/report.hpp"
#include "ricci/transport.hpp"

struct ricci_chain {
  std::shared_ptr<const ricci::ChainSpec> spec;
  std::optional<ricci::ModelRef> model;
};

struct ricci_report {
  ricci::Report report;
  std::string text;
};

namespace {

thread_local std::string last_error;

ricci_status to_status(ricci::ErrorCode code) {
  using ricci::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return RICCI_INVALID_ARGUMENT;
    case ErrorCode::kInvalidChain: return RICCI_INVALID_CHAIN;
    case ErrorCode::kNonUniqueStationary: return RICCI_NON_UNIQUE_STATIONARY;
    case ErrorCode::kZeroMass: return RICCI_ZERO_MASS;
    case ErrorCode::kNotGeodesic: return RICCI_NOT_GEODESIC;
    case ErrorCode::kNonPositiveKappa: return RICCI_NON_POSITIVE_KAPPA;
    case ErrorCode::kNoPositiveKappa: return RICCI_NO_POSITIVE_KAPPA;
    case ErrorCode::kUnbounded: return RICCI_UNBOUNDED;
    case ErrorCode::kTooLarge: return RICCI_TOO_LARGE;
    case ErrorCode::kIncompletePairSet: return RICCI_INCOMPLETE_PAIR_SET;
    case ErrorCode::kInvalidV: return RICCI_INVALID_V;
    case ErrorCode::kInvalidS: return RICCI_INVALID_S;
    case ErrorCode::kZeroGranularity: return RICCI_ZERO_GRANULARITY;
    case ErrorCode::kNotReversible: return RICCI_NOT_REVERSIBLE;
    case ErrorCode::kIo: return RICCI_IO;
  }
  return RICCI_INTERNAL;
}

template <class Fn>
ricci_status wrap(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return RICCI_OK;
  } catch (const ricci::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RICCI_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RICCI_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) ricci::fail(ricci::ErrorCode::kInvalidArgument, message);
}

ricci::Json parse_options(const char* text) {
  if (text == nullptr || *text == '\0') return nullptr;
  try {
    return ricci::Json::parse(text);
  } catch (const ricci::Json::parse_error& e) {
    ricci::fail(ricci::ErrorCode::kInvalidArgument, std::string("malformed options: ") + e.what());
  }
}

ricci_report* finish(ricci::Report report, const char* out_dir) {
  if (out_dir != nullptr) ricci::write_report_files(report, out_dir);
  auto* r = new ricci_report{std::move(report), {}};
  r->text = r->report.summary.dump(2);
  return r;
}

}  // namespace

extern "C" {

const char* ricci_status_string(ricci_status status) {
  switch (status) {
    case RICCI_OK: return "ok";
    case RICCI_INVALID_ARGUMENT: return "InvalidArgument";
    case RICCI_INVALID_CHAIN: return "InvalidChain";
    case RICCI_NON_UNIQUE_STATIONARY: return "NonUniqueStationary";
    case RICCI_ZERO_MASS: return "ZeroMass";
    case RICCI_NOT_GEODESIC: return "NotGeodesic";
    case RICCI_NON_POSITIVE_KAPPA: return "NonPositiveKappa";
    case RICCI_NO_POSITIVE_KAPPA: return "NoPositiveKappa";
    case RICCI_UNBOUNDED: return "Unbounded";
    case RICCI_TOO_LARGE: return "TooLarge";
    case RICCI_INCOMPLETE_PAIR_SET: return "IncompletePairSet";
    case RICCI_INVALID_V: return "InvalidV";
    case RICCI_INVALID_S: return "InvalidS";
    case RICCI_ZERO_GRANULARITY: return "ZeroGranularity";
    case RICCI_NOT_REVERSIBLE: return "NotReversible";
    case RICCI_IO: return "Io";
    case RICCI_INTERNAL: return "Internal";
  }
  return "unknown";
}

const char* ricci_last_error(void) { return last_error.c_str(); }

ricci_status ricci_chain_from_model(const char* name, const char* const* keys, const double* values, size_t count,
                                    ricci_chain** out) {
  return wrap([&] {
    require(name != nullptr && out != nullptr, "name and out are required");
    require(count == 0 || (keys != nullptr && values != nullptr), "keys and values are required");
    ricci::ModelRef ref{name, {}};
    for (size_t i = 0; i < count; ++i) {
      require(keys[i] != nullptr, "null parameter name");
      ref.params[keys[i]] = values[i];
    }
    auto spec = ricci::make_model(ref.name, ref.params);
    *out = new ricci_chain{std::move(spec), std::move(ref)};
  });
}

ricci_status ricci_chain_from_json_file(const char* path, ricci_chain** out) {
  return wrap([&] {
    require(path != nullptr && out != nullptr, "path and out are required");
    *out = new ricci_chain{ricci::load_chain(path), std::nullopt};
  });
}

ricci_status ricci_chain_from_json_string(const char* json, ricci_chain** out) {
  return wrap([&] {
    require(json != nullptr && out != nullptr, "json and out are required");
    ricci::Json doc;
    try {
      doc = ricci::Json::parse(json);
    } catch (const ricci::Json::parse_error& e) {
      ricci::fail(ricci::ErrorCode::kInvalidChain, std::string("malformed JSON: ") + e.what());
    }
    *out = new ricci_chain{ricci::chain_from_json(doc), std::nullopt};
  });
}

void ricci_chain_free(ricci_chain* chain) { delete chain; }

size_t ricci_chain_size(const ricci_chain* chain) { return chain ? chain->spec->size() : 0; }

ricci_status ricci_chain_transition(const ricci_chain* chain, double* out, size_t len) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    const size_t n = chain->spec->size();
    require(len >= n * n, "output buffer too small");
    const ricci::Matrix P = chain->spec->kernel().dense();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) out[i * n + j] = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  });
}

ricci_status ricci_chain_stationary(const ricci_chain* chain, double* out, size_t len) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    const auto& pi = chain->spec->pi().weights();
    require(len >= static_cast<size_t>(pi.size()), "output buffer too small");
    for (Eigen::Index i = 0; i < pi.size(); ++i) out[i] = pi(i);
  });
}

ricci_status ricci_chain_reversible(const ricci_chain* chain, int* out) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    *out = chain->spec->reversible() ? 1 : 0;
  });
}

ricci_status ricci_curvature_profile(const ricci_chain* chain, unsigned K, double* out, size_t len) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    require(len >= static_cast<size_t>(K) + 1, "output buffer too small");
    const auto profile = ricci::curvature_profile(*chain->spec, K, ricci::choose_pairs(*chain->spec, "auto"));
    for (unsigned k = 0; k <= K; ++k) out[k] = profile.kappa[k];
  });
}

ricci_status ricci_w1(const ricci_chain* chain, const double* mu, const double* nu, size_t len, double* out) {
  return wrap([&] {
    require(chain != nullptr && mu != nullptr && nu != nullptr && out != nullptr, "null argument");
    require(len == chain->spec->size(), "measures must match the chain size");
    const auto n = static_cast<Eigen::Index>(len);
    ricci::Vector a = Eigen::Map<const ricci::Vector>(mu, n);
    ricci::Vector b = Eigen::Map<const ricci::Vector>(nu, n);
    *out = ricci::w1(ricci::Distribution(std::move(a)), ricci::Distribution(std::move(b)), chain->spec->space());
  });
}

ricci_status ricci_analyze(const ricci_chain* chain, const char* options_json, const char* out_dir,
                           ricci_report** out) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    const auto options = ricci::analyze_options_from_json(parse_options(options_json));
    *out = finish(ricci::analyze(*chain->spec, options, chain->model), out_dir);
  });
}

ricci_status ricci_mcmc(const ricci_chain* chain, const char* options_json, const char* out_dir, ricci_report** out) {
  return wrap([&] {
    require(chain != nullptr && out != nullptr, "chain and out are required");
    const auto options = ricci::mcmc_options_from_json(parse_options(options_json));
    *out = finish(ricci::run_mcmc(chain->spec, options), out_dir);
  });
}

ricci_status ricci_cube_figure(const char* options_json, const char* out_dir, ricci_report** out) {
  return wrap([&] {
    require(out != nullptr, "out is required");
    const auto options = ricci::cube_figure_options_from_json(parse_options(options_json));
    *out = finish(ricci::cube_figure(options), out_dir);
  });
}

ricci_status ricci_certify_all(const char* out_dir, ricci_report** out) {
  return wrap([&] {
    require(out != nullptr, "out is required");
    *out = finish(ricci::certify_all(), out_dir);
  });
}

ricci_status ricci_model_list(const char* format, ricci_report** out) {
  return wrap([&] {
    require(out != nullptr, "out is required");
    const std::string fmt = format ? format : "json";
    require(fmt == "json" || fmt == "csv", "format must be json or csv");
    auto* r = new ricci_report{};
    r->report.summary = ricci::model_list_json();
    r->text = fmt == "json" ? r->report.summary.dump(2) : ricci::model_list_csv();
    *out = r;
  });
}

const char* ricci_report_json(const ricci_report* report) { return report ? report->text.c_str() : ""; }

int ricci_report_passed(const ricci_report* report) { return report && report->report.pass ? 1 : 0; }

void ricci_report_free(ricci_report* report) { delete report; }

}  // extern "C"
