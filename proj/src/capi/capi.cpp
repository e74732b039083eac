#include "idprior.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <string>

#include "idprior/errors.hpp"
#include "idprior/experiment.hpp"
#include "idprior/gpq.hpp"
#include "idprior/rng.hpp"

namespace {

thread_local std::string g_last_error;

idp_status fail(idp_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
idp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const idprior::InvalidArgument& err) {
    return fail(IDP_ERR_INVALID_ARGUMENT, err.what());
  } catch (const idprior::NumericError& err) {
    return fail(IDP_ERR_NUMERIC, err.what());
  } catch (const std::exception& err) {
    return fail(IDP_ERR_INTERNAL, err.what());
  } catch (...) {
    return fail(IDP_ERR_INTERNAL, "unknown error");
  }
}

idprior::ExperimentOptions make_options(const uint64_t* seed_override,
                                        const char* out_override, int reference_mode) {
  idprior::ExperimentOptions options;
  if (seed_override) options.seed = *seed_override;
  if (out_override) options.output_dir = out_override;
  options.reference = reference_mode != 0;
  return options;
}

}  // namespace

struct idp_rng {
  idprior::Rng rng;
};

struct idp_gpq {
  idprior::GpqParams params;
};

extern "C" {

const char* idp_last_error(void) { return g_last_error.c_str(); }

const char* idp_version(void) { return "1.0.0"; }

idp_status idp_rng_create(uint64_t seed, uint64_t stream, idp_rng** out) {
  if (!out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_rng_create: out is null");
  return guarded([&] {
    *out = new idp_rng{idprior::Rng(seed, stream)};
    return IDP_OK;
  });
}

void idp_rng_destroy(idp_rng* rng) { delete rng; }

idp_status idp_rng_uniform(idp_rng* rng, double* out) {
  if (!rng || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_rng_uniform: null argument");
  return guarded([&] {
    *out = rng->rng.uniform();
    return IDP_OK;
  });
}

idp_status idp_rng_normal(idp_rng* rng, double* out) {
  if (!rng || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_rng_normal: null argument");
  return guarded([&] {
    *out = rng->rng.normal();
    return IDP_OK;
  });
}

idp_status idp_gpq_create(double p, double q, idp_gpq** out) {
  if (!out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_create: out is null");
  return guarded([&] {
    *out = new idp_gpq{idprior::GpqParams::create(p, q)};
    return IDP_OK;
  });
}

void idp_gpq_destroy(idp_gpq* law) { delete law; }

idp_status idp_gpq_alpha(const idp_gpq* law, double* out) {
  if (!law || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_alpha: null argument");
  *out = law->params.alpha;
  return IDP_OK;
}

idp_status idp_gpq_log_pdf(const idp_gpq* law, double t, double* out) {
  if (!law || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_log_pdf: null argument");
  return guarded([&] {
    *out = idprior::gpq_log_pdf(law->params, t);
    return IDP_OK;
  });
}

idp_status idp_gpq_cdf(const idp_gpq* law, double t, double* out) {
  if (!law || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_cdf: null argument");
  return guarded([&] {
    *out = idprior::gpq_cdf(law->params, t);
    return IDP_OK;
  });
}

idp_status idp_gpq_moment(const idp_gpq* law, unsigned s, double* out) {
  if (!law || !out) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_moment: null argument");
  return guarded([&] {
    *out = idprior::gpq_moment(law->params, s);
    return IDP_OK;
  });
}

idp_status idp_gpq_sample(const idp_gpq* law, idp_rng* rng, size_t n, double* out) {
  if (!law || !rng || (!out && n > 0))
    return fail(IDP_ERR_INVALID_ARGUMENT, "idp_gpq_sample: null argument");
  return guarded([&] {
    auto draws = idprior::gpq_sample(law->params, n, rng->rng);
    std::memcpy(out, draws.data(), n * sizeof(double));
    return IDP_OK;
  });
}

idp_status idp_validate(const char* config_path, char* report, size_t report_len) {
  if (!config_path) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_validate: config_path is null");
  return guarded([&] {
    std::string text = idprior::validate_config(config_path);
    if (report && report_len > 0) {
      size_t n = std::min(report_len - 1, text.size());
      std::memcpy(report, text.data(), n);
      report[n] = '\0';
    }
    return IDP_OK;
  });
}

idp_status idp_run(const char* config_path, const uint64_t* seed_override,
                   const char* out_override, int reference_mode) {
  if (!config_path) return fail(IDP_ERR_INVALID_ARGUMENT, "idp_run: config_path is null");
  return guarded([&] {
    idprior::run_experiment(config_path,
                            make_options(seed_override, out_override, reference_mode));
    return IDP_OK;
  });
}

idp_status idp_make_synthetic(const char* config_path, const uint64_t* seed_override,
                              const char* out_override) {
  if (!config_path)
    return fail(IDP_ERR_INVALID_ARGUMENT, "idp_make_synthetic: config_path is null");
  return guarded([&] {
    idprior::make_synthetic(config_path, make_options(seed_override, out_override, 0));
    return IDP_OK;
  });
}

}  // extern "C"
