#include "hps/hps.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "hps/errors.hpp"
#include "hps/run.hpp"

struct hps_config {
  hps::RunConfig cfg;
};

struct hps_report {
  hps::RunReport rep;
};

namespace {

void put_err(char* err, size_t errlen, const std::string& msg) {
  if (!err || errlen == 0) return;
  std::snprintf(err, errlen, "%s", msg.c_str());
}

int status_of(const hps::Error& e) {
  switch (e.code()) {
    case hps::ErrorCode::config_error:
    case hps::ErrorCode::invalid_argument:
      return HPS_ERR_CONFIG;
    case hps::ErrorCode::io_error:
      return HPS_ERR_IO;
    default:
      return HPS_ERR_NUMERICAL;
  }
}

template <typename Fn>
int guarded(char* err, size_t errlen, Fn&& fn) {
  try {
    return fn();
  } catch (const hps::Error& e) {
    put_err(err, errlen, e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    put_err(err, errlen, e.what());
    return HPS_ERR_NUMERICAL;
  }
}

}  // namespace

extern "C" {

const char* hps_version(void) { return "1.0.0"; }

hps_config* hps_config_create(void) { return new hps_config{}; }

void hps_config_free(hps_config* cfg) { delete cfg; }

int hps_config_load(hps_config* cfg, const char* path, char* err,
                    size_t errlen) {
  if (!cfg || !path) {
    put_err(err, errlen, "null argument");
    return HPS_ERR_CONFIG;
  }
  return guarded(err, errlen, [&] {
    cfg->cfg = hps::parse_config_file(path);
    return HPS_OK;
  });
}

int hps_config_set(hps_config* cfg, const char* key, const char* value,
                   char* err, size_t errlen) {
  if (!cfg || !key || !value) {
    put_err(err, errlen, "null argument");
    return HPS_ERR_CONFIG;
  }
  return guarded(err, errlen, [&] {
    hps::apply_config_override(cfg->cfg, key, value);
    return HPS_OK;
  });
}

int hps_run(const hps_config* cfg, hps_report** out, char* err,
            size_t errlen) {
  if (!cfg) {
    put_err(err, errlen, "null config");
    return HPS_ERR_CONFIG;
  }
  return guarded(err, errlen, [&] {
    hps::RunReport rep = hps::run(cfg->cfg);
    const bool converged = rep.converged;
    if (out) *out = new hps_report{std::move(rep)};
    if (!converged) {
      put_err(err, errlen,
              "adaptive iteration cap reached before convergence; partial "
              "results written");
      return static_cast<int>(HPS_ERR_NONCONVERGENCE);
    }
    return static_cast<int>(HPS_OK);
  });
}

hps_report* hps_report_create(void) { return new hps_report{}; }

void hps_report_free(hps_report* rep) { delete rep; }

int hps_report_load(hps_report* rep, const char* path, char* err,
                    size_t errlen) {
  if (!rep || !path) {
    put_err(err, errlen, "null argument");
    return HPS_ERR_IO;
  }
  return guarded(err, errlen, [&] {
    rep->rep = hps::read_report_file(path);
    return HPS_OK;
  });
}

int hps_report_get(const hps_report* rep, const char* key, char* value,
                   size_t valuelen) {
  if (!rep || !key || !value || valuelen == 0) return HPS_ERR_IO;
  const hps::RunReport& r = rep->rep;
  const std::string k = key;
  char buf[64];
  std::string out;
  if (k == "problem") out = r.problem;
  else if (k == "mode") out = r.mode;
  else if (k == "formulation") out = r.formulation;
  else if (k == "nc") out = std::to_string(r.nc);
  else if (k == "N_i") out = std::to_string(r.n_i);
  else if (k == "N_f") out = std::to_string(r.n_f);
  else if (k == "R") out = std::to_string(r.r_bytes);
  else if (k == "converged") out = r.converged ? "1" : "0";
  else if (k == "T_i" || k == "T_f" || k == "T_s" || k == "E_rel") {
    const double v = k == "T_i" ? r.t_i
                     : k == "T_f" ? r.t_f
                     : k == "T_s" ? r.t_s
                                  : r.e_rel;
    std::snprintf(buf, sizeof(buf), k == "E_rel" ? "%.2e" : "%.3f", v);
    out = buf;
  } else {
    return HPS_ERR_IO;
  }
  std::snprintf(value, valuelen, "%s", out.c_str());
  return HPS_OK;
}

int hps_compare(const hps_report* a, const hps_report* b, char* out,
                size_t outlen, char* err, size_t errlen) {
  if (!a || !b) {
    put_err(err, errlen, "null report");
    return HPS_ERR_IO;
  }
  return guarded(err, errlen, [&] {
    const std::string table = hps::compare_reports(a->rep, b->rep);
    if (out && outlen > 0) std::snprintf(out, outlen, "%s", table.c_str());
    return HPS_OK;
  });
}

}  // extern "C"
