// Benchmark front-end for the HPS solver shared library. Talks to the
// solver exclusively through the C API.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hps/hps.h"

namespace {

struct ConfigDeleter {
  void operator()(hps_config* c) const { hps_config_free(c); }
};
struct ReportDeleter {
  void operator()(hps_report* r) const { hps_report_free(r); }
};
using ConfigPtr = std::unique_ptr<hps_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<hps_report, ReportDeleter>;

int exit_of(int status) {
  return status == HPS_ERR_IO ? HPS_ERR_CONFIG : status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive HPS elliptic solver benchmark driver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run a configured solve");
  std::string config_path, problem, mode, formulation, out_dir;
  int nc = -1;
  double eps = -1.0;
  std::vector<std::string> sets;
  solve->add_option("--config", config_path, "key = value config file");
  solve->add_option("--problem", problem, "problem name override");
  solve->add_option("--nc", nc, "discretization order override");
  solve->add_option("--eps", eps, "tolerance override");
  solve->add_option("--mode", mode, "adaptive or uniform");
  solve->add_option("--formulation", formulation, "auto, dtn or iti");
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--set", sets, "extra key=value overrides")
      ->take_all();

  auto* compare = app.add_subcommand("compare", "diff two run reports");
  std::string report_a, report_b;
  compare->add_option("report_a", report_a, "first report.txt")->required();
  compare->add_option("report_b", report_b, "second report.txt")->required();

  CLI11_PARSE(app, argc, argv);

  char err[1024] = {0};

  if (solve->parsed()) {
    ConfigPtr cfg(hps_config_create());
    if (!config_path.empty()) {
      if (int st = hps_config_load(cfg.get(), config_path.c_str(), err,
                                   sizeof(err))) {
        std::fprintf(stderr, "error: %s\n", err);
        return exit_of(st);
      }
    }
    auto set = [&](const char* key, const std::string& value) -> int {
      if (value.empty()) return HPS_OK;
      return hps_config_set(cfg.get(), key, value.c_str(), err, sizeof(err));
    };
    int st = HPS_OK;
    if ((st = set("problem", problem))) goto cfg_fail;
    if (nc >= 0 && (st = set("nc", std::to_string(nc)))) goto cfg_fail;
    if (eps > 0 && (st = set("epsilon", std::to_string(eps)))) goto cfg_fail;
    if ((st = set("mode", mode))) goto cfg_fail;
    if ((st = set("formulation", formulation))) goto cfg_fail;
    if ((st = set("output_dir", out_dir))) goto cfg_fail;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                     kv.c_str());
        return HPS_ERR_CONFIG;
      }
      if ((st = hps_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                               kv.substr(eq + 1).c_str(), err, sizeof(err))))
        goto cfg_fail;
    }
    {
      hps_report* raw = nullptr;
      st = hps_run(cfg.get(), &raw, err, sizeof(err));
      ReportPtr rep(raw);
      if (st != HPS_OK && st != HPS_ERR_NONCONVERGENCE) {
        std::fprintf(stderr, "error: %s\n", err);
        return exit_of(st);
      }
      if (st == HPS_ERR_NONCONVERGENCE)
        std::fprintf(stderr, "warning: %s\n", err);
      char value[128];
      for (const char* key :
           {"problem", "nc", "mode", "formulation", "N_i", "N_f", "T_i", "T_f",
            "T_s", "R", "E_rel", "converged"}) {
        if (hps_report_get(rep.get(), key, value, sizeof(value)) == HPS_OK)
          std::printf("%s = %s\n", key, value);
      }
      return exit_of(st);
    }
  cfg_fail:
    std::fprintf(stderr, "error: %s\n", err);
    return exit_of(st);
  }

  // compare
  ReportPtr ra(hps_report_create());
  ReportPtr rb(hps_report_create());
  if (int st = hps_report_load(ra.get(), report_a.c_str(), err, sizeof(err))) {
    std::fprintf(stderr, "error: %s\n", err);
    return exit_of(st);
  }
  if (int st = hps_report_load(rb.get(), report_b.c_str(), err, sizeof(err))) {
    std::fprintf(stderr, "error: %s\n", err);
    return exit_of(st);
  }
  char table[4096];
  if (int st = hps_compare(ra.get(), rb.get(), table, sizeof(table), err,
                           sizeof(err))) {
    std::fprintf(stderr, "error: %s\n", err);
    return exit_of(st);
  }
  std::printf("%s", table);
  return 0;
}
