#pragma once

#include <map>

#include "tractorlab/corpus.hpp"

namespace tractorlab {

/// Job validation failure (bad command name, unresolved metric, …); mapped to
/// exit status 2 by the CLI, before any command executes.
class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandSpec {
  std::string name;
  std::map<std::string, double> params;  // per-command overrides
};

/// Batch job: one metric source plus an ordered command list. Exactly one of
/// `example`, `source`, `path` selects the metric.
struct JobSpec {
  std::string example;   // corpus entry name
  std::string source;    // inline metric-file text
  std::string path;      // metric file on disk
  std::vector<CommandSpec> commands;
  int samples = 64;
  double tolerance = 1e-6;
  double rk4_step = 1e-3;
  std::uint64_t seed = 42;
  bool fail_fast = false;
};

struct CommandRecord {
  std::string check;
  std::map<std::string, double> params;
  bool pass = false;
  double max_residual = 0;
  std::vector<Point> singular_points;
  double millis = 0;
  std::string error;  // nonempty when the command aborted
};

struct Report {
  std::string engine_version;
  std::string gamma_rep_id;
  std::string metric_name;
  std::vector<CommandRecord> records;
  bool all_pass = false;
};

/// Known commands: curvature, metricity, holonomy_sample, ricci_isotropic,
/// certify_parallel_spinor, twistor_check, theorem1_pipeline,
/// theorem2_pipeline.
Report run(const JobSpec& job);

/// Deterministic JSON document; timing fields are emitted only when
/// `include_timing` (they are excluded from the determinism contract).
std::string report_to_json(const Report& report, bool include_timing = true);
std::string report_to_text(const Report& report);

std::string list_examples_text();

/// Parallelism cap: TRACTORLAB_THREADS when set (≥1), else hardware width.
int thread_cap();

}  // namespace tractorlab
