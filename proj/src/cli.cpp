#include "congra/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

namespace congra::cli {

namespace fs = std::filesystem;
using nlohmann::json;

JobSpec parse_job_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : text.substr(colon + 1);

  auto parse_param = [&](const std::string& key) -> std::string {
    if (params.rfind(key + "=", 0) != 0 || params.size() <= key.size() + 1)
      throw UsageError("bad jobspec '" + text + "': expected " + key + "=<value>");
    return params.substr(key.size() + 1);
  };

  JobSpec spec;
  if (name == "pagerank") {
    spec.algo = Algorithm::kPageRank;
    if (!params.empty()) {
      const std::string v = parse_param("d");
      char* end = nullptr;
      spec.damping = std::strtod(v.c_str(), &end);
      if (end != v.c_str() + v.size() || !(spec.damping > 0.0 && spec.damping < 1.0))
        throw UsageError("bad jobspec '" + text + "': damping must be a real in (0,1)");
    }
  } else if (name == "sssp") {
    spec.algo = Algorithm::kSssp;
    if (params.empty()) throw UsageError("bad jobspec '" + text + "': sssp needs src=<vertex>");
    const std::string v = parse_param("src");
    std::uint64_t src = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), src);
    if (ec != std::errc() || p != v.data() + v.size() || src > 0xffffffffULL)
      throw UsageError("bad jobspec '" + text + "': src must be a non-negative vertex id");
    spec.source = static_cast<VertexId>(src);
  } else {
    throw UsageError("bad jobspec '" + text + "': expected pagerank[:d=<real>] or sssp:src=<int>");
  }
  return spec;
}

namespace {

StaggeredJob parse_stagger(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0)
    throw UsageError("bad stagger '" + text + "': expected <superstep>:<jobspec>");
  StaggeredJob job;
  const std::string step = text.substr(0, colon);
  auto [p, ec] = std::from_chars(step.data(), step.data() + step.size(), job.superstep);
  if (ec != std::errc() || p != step.data() + step.size())
    throw UsageError("bad stagger '" + text + "': superstep must be a non-negative integer");
  job.jobspec = text.substr(colon + 1);
  parse_job_spec(job.jobspec);   // validate early
  return job;
}

std::string mode_string(Mode mode) { return mode_name(mode); }

json metrics_to_json(const Metrics& metrics, const RunConfig& config) {
  json per_iter = json::object();
  for (const auto& [id, count] : metrics.per_job_iterations) per_iter[std::to_string(id)] = count;
  json per_upd = json::object();
  for (const auto& [id, count] : metrics.per_job_vertex_updates)
    per_upd[std::to_string(id)] = count;

  json stagger = json::array();
  for (const auto& s : config.staggered)
    stagger.push_back(std::to_string(s.superstep) + ":" + s.jobspec);

  return json{
      {"mode", mode_string(metrics.mode)},
      {"supersteps", metrics.supersteps},
      {"block_loads", metrics.block_loads},
      {"per_job_iterations", per_iter},
      {"per_job_vertex_updates", per_upd},
      {"wall_time_ms", metrics.wall_time_ms},
      {"config",
       {{"graph", config.graph_path},
        {"jobs", config.jobs},
        {"stagger", stagger},
        {"block_size", config.block_size},
        {"c_const", config.c_const},
        {"alpha", config.alpha},
        {"samples", config.samples},
        {"epsilon_frac", config.epsilon_frac},
        {"tolerance", config.tolerance},
        {"mode", mode_string(config.mode)},
        {"seed", config.seed},
        {"max_supersteps", config.max_supersteps},
        {"out_dir", config.out_dir},
        {"trace", config.trace_path},
        {"workers", config.workers}}},
  };
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig config;
  std::vector<std::string> stagger_raw;
  std::string mode_raw = "twolevel";

  CLI::App app{"congra: concurrent graph analytics with block-level co-scheduling", "congra"};
  app.add_option("--graph", config.graph_path, "edge list file (src dst [weight] per line)")
      ->required();
  app.add_option("--job", config.jobs,
                 "job spec, repeatable: pagerank[:d=<real>] | sssp:src=<int>")
      ->required();
  app.add_option("--stagger", stagger_raw, "late job arrival: <superstep>:<jobspec>");
  app.add_option("--block-size", config.block_size, "vertices per block")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--c-const", config.c_const, "queue length constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--alpha", config.alpha, "main fraction of the global queue, in (0,1]")
      ->check(CLI::Range(1e-9, 1.0))
      ->capture_default_str();
  app.add_option("--samples", config.samples, "sample set size for queue selection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--epsilon-frac", config.epsilon_frac,
                 "mean-priority closeness fraction in block comparison")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--tolerance", config.tolerance, "per-vertex convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--mode", mode_raw, "twolevel | naive")
      ->check(CLI::IsMember({"twolevel", "naive"}))
      ->capture_default_str();
  app.add_option("--seed", config.seed, "rng seed")->capture_default_str();
  app.add_option("--max-supersteps", config.max_supersteps, "superstep cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out-dir", config.out_dir, "directory for result files and metrics.json")
      ->capture_default_str();
  app.add_option("--trace", config.trace_path, "JSON-lines trace of block activations");
  app.add_option("--workers", config.workers, "worker threads (1 = deterministic)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  config.mode = mode_raw == "naive" ? Mode::kNaivePerJob : Mode::kTwoLevel;
  for (const std::string& text : config.jobs) parse_job_spec(text);   // validate
  for (const std::string& text : stagger_raw) config.staggered.push_back(parse_stagger(text));
  return config;
}

int run(const RunConfig& config) {
  try {
    const EdgeList edges = load_edge_list(config.graph_path);
    const Graph graph = build_graph(edges);
    const BlockTable blocks = partition_blocks(graph, config.block_size);

    SchedulerConfig sched;
    sched.mode = config.mode;
    sched.c_const = config.c_const;
    sched.alpha = config.alpha;
    sched.samples = config.samples;
    sched.epsilon_frac = config.epsilon_frac;
    sched.tolerance = config.tolerance;
    sched.seed = config.seed;
    sched.max_supersteps = config.max_supersteps;
    sched.workers = config.workers;

    Controller controller(graph, blocks, sched);
    for (const std::string& text : config.jobs) controller.admit_job(parse_job_spec(text));
    for (const StaggeredJob& s : config.staggered)
      controller.admit_job_at(parse_job_spec(s.jobspec), s.superstep);

    fs::create_directories(config.out_dir);
    std::ofstream trace;
    if (!config.trace_path.empty()) {
      trace.open(config.trace_path);
      if (!trace) throw std::runtime_error(config.trace_path + ": cannot open trace file");
      controller.on_block_load = [&trace](std::uint64_t superstep, BlockId block,
                                          const std::vector<int>& job_ids) {
        trace << json{{"superstep", superstep}, {"block", block}, {"jobs", job_ids}}.dump()
              << '\n';
      };
    }
    controller.on_job_done = [&config](const JobState& job) {
      const fs::path path = fs::path(config.out_dir) / ("job_" + std::to_string(job.job_id) + ".txt");
      write_results(job, path.string());
    };

    const Metrics metrics = controller.run_to_convergence();

    const fs::path metrics_path = fs::path(config.out_dir) / "metrics.json";
    std::ofstream out(metrics_path);
    if (!out) throw std::runtime_error(metrics_path.string() + ": cannot open for writing");
    out << metrics_to_json(metrics, config).dump(2) << '\n';
    if (!out) throw std::runtime_error(metrics_path.string() + ": write failed");
    return 0;
  } catch (const SuperstepLimitError& e) {
    std::cerr << "congra: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "congra: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(parse_args(args));
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "congra: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace congra::cli
