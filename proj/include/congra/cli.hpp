#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "congra/controller.hpp"

namespace congra::cli {

struct StaggeredJob {
  std::uint64_t superstep = 0;
  std::string jobspec;
};

struct RunConfig {
  std::string graph_path;
  std::vector<std::string> jobs;        // jobspec strings, admission order
  std::vector<StaggeredJob> staggered;  // late arrivals, for scheduling tests
  std::uint32_t block_size = 4096;
  double c_const = 100.0;
  double alpha = 0.8;
  std::uint32_t samples = 500;
  double epsilon_frac = 0.2;
  double tolerance = 1e-9;
  Mode mode = Mode::kTwoLevel;
  std::uint64_t seed = 42;
  std::uint64_t max_supersteps = 10000;
  std::string out_dir = ".";
  std::string trace_path;   // empty = no trace
  unsigned workers = 1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `pagerank[:d=<real>]` or `sssp:src=<int>`.
JobSpec parse_job_spec(const std::string& text);

// argv without the program name. Throws UsageError on bad input and
// HelpRequested (carrying the help text) for --help.
RunConfig parse_args(const std::vector<std::string>& args);

// Loads the graph, runs every job to convergence, writes job_<id>.txt per
// job plus metrics.json into out_dir. Returns 0 iff all jobs converged;
// diagnostics go to stderr.
int run(const RunConfig& config);

int main(int argc, char** argv);

}  // namespace congra::cli
