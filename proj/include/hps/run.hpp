#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hps/adaptive.hpp"

namespace hps {

struct RunConfig {
  std::string problem;
  int nc = 16;
  double epsilon = 1e-5;
  std::string mode = "adaptive";        // adaptive | uniform
  int uniform_levels = -1;              // quadrant levels (4^d leaves)
  std::string formulation = "auto";     // auto | dtn | iti
  int seed_depth = -1;                  // -1: problem default
  std::string output_dir = ".";
  bool retain_for_update = true;
  int max_iterations = 20;
  int interp_max_depth = -1;            // -1: problem default
  int threads = 1;
  int reference_levels = -1;            // -1: refine reference until converged
  std::optional<double> alpha;
  std::optional<double> omega;
  std::optional<double> eta;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);
void apply_config_override(RunConfig& cfg, const std::string& key,
                           const std::string& value);
void validate_config(const RunConfig& cfg);

struct RunReport {
  std::string problem;
  int nc = 0;
  std::string mode;
  std::string formulation;
  int n_i = 0, n_f = 0;
  double t_i = 0.0, t_f = 0.0, t_s = 0.0;  // seconds
  std::uint64_t r_bytes = 0;
  double e_rel = 0.0;
  bool converged = true;
  std::vector<IterationLog> iterations;
};

/// Execute a configured run; writes mesh.txt, solution.txt, report.txt and
/// iterations.txt into cfg.output_dir.
RunReport run(const RunConfig& cfg);

void write_report(const RunReport& rep, std::ostream& os);
void write_report_file(const RunReport& rep, const std::string& path);
RunReport read_report(std::istream& is);
RunReport read_report_file(const std::string& path);

/// Side-by-side table of the two reports' headline numbers. Refuses reports
/// for different problems.
std::string compare_reports(const RunReport& a, const RunReport& b);

}  // namespace hps
