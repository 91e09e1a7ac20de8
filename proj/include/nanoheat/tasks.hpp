#ifndef NANOHEAT_TASKS_HPP
#define NANOHEAT_TASKS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nanoheat/config.hpp"

namespace nanoheat {

struct TaskOptions {
  std::filesystem::path out_dir = ".";
  int jobs = 1;
  double rel_tol = 0.0;       // > 0 overrides [quadrature] rel_tol
  std::string task_override;  // non-empty forces the task regardless of [task] name
};

// Names accepted in [task] name = ...
const std::vector<std::string>& task_names();

// Runs the configured task: reads its keys from cfg (rejecting any the task
// does not know), computes, writes the CSV outputs plus manifest.json into
// options.out_dir, and logs a short human summary. Output files contain no
// timestamps or thread counts, so a rerun of the same config is
// byte-identical. Throws ConfigError on bad configs and QuadratureError when
// the spectral quadrature cannot reach its tolerance.
void run_task(RunConfig& cfg, const TaskOptions& options, std::ostream& log);

}  // namespace nanoheat

#endif
