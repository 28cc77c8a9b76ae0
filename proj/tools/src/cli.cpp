#include "ppedcrf_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ppedcrf/benchmark.hpp"
#include "ppedcrf/calibration.hpp"
#include "ppedcrf/imageio.hpp"
#include "ppedcrf/report.hpp"
#include "ppedcrf/retrieval.hpp"
#include "ppedcrf/synthetic.hpp"

namespace ppedcrf::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct DataOptions {
  std::string data_root;
  SyntheticSpec synthetic;
};

struct BudgetOptions {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> clip_bound;
  bool any() const { return epsilon || delta || clip_bound; }
};

// Every value the subcommands read. Option callbacks write straight into it.
struct RunConfig {
  int verbose = 0;
  std::string output;
  std::string input;
  std::vector<std::string> clips;
  std::string logits;

  NoiseConfig noise;
  std::string mechanism = "ppedcrf";
  BudgetOptions budget;

  DataOptions data;
  BenchmarkSpec spec;
  std::vector<std::string> mechanisms;
  std::vector<double> frontier_sigmas{0.0, 4.0, 8.0, 12.0, 16.0, 24.0, 32.0};
  std::vector<std::string> frontier_mechanisms{"ppedcrf", "global_gaussian"};

  double target_psnr = 0.0;
  std::string matchop_mechanism = "global_gaussian";
  double sigma_max = 64.0;
  double tolerance = 0.05;
  int max_iterations = 30;

  std::vector<int> blur_kernels{1, 3, 5, 9, 15, 21};
  std::vector<int> mosaic_blocks{1, 4, 8, 16, 32};

  std::string embedder = "tilemean";
  std::string frame_mode = "middle";

  std::string gallery_file;
  std::string query_file;
  std::string raw_query_file;
};

json error_record(std::string_view code, std::string_view message) {
  return {{"status", "error"}, {"code", code}, {"message", message}};
}

class Logger {
 public:
  Logger(std::ostream& err, int verbose) : err_(err), verbose_(verbose) {}
  void info(const std::string& message) const {
    if (verbose_ > 0) err_ << "[ppedcrf] " << message << '\n';
  }

 private:
  std::ostream& err_;
  int verbose_;
};

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json tool_header(std::string_view command) {
  return {{"tool", "ppedcrf"}, {"version", PPEDCRF_VERSION}, {"command", command}};
}

json data_json(const DataOptions& d) {
  if (!d.data_root.empty()) return {{"source", "directory"}, {"data_root", d.data_root}};
  return {{"source", "synthetic"},
          {"seed", d.synthetic.seed},
          {"locations", d.synthetic.locations},
          {"siblings_per_location", d.synthetic.siblings_per_location},
          {"unrelated", d.synthetic.unrelated},
          {"frames", d.synthetic.frames}};
}

std::vector<Sequence> load_data(const DataOptions& d, Resolution resolution) {
  if (!d.data_root.empty()) return load_candidates(d.data_root, resolution);
  SyntheticSpec synthetic = d.synthetic;
  synthetic.resolution = resolution;
  return generate_synthetic_benchmark(synthetic);
}

std::vector<Mechanism> parse_mechanisms(const std::vector<std::string>& names) {
  std::vector<Mechanism> out;
  for (const std::string& n : names) out.push_back(parse_mechanism(n));
  return out;
}

void add_noise_options(CLI::App* sub, RunConfig& rc, bool with_sigma) {
  NoiseConfig& n = rc.noise;
  if (with_sigma) {
    sub->add_option("--mechanism", rc.mechanism,
                    "ppedcrf | ppedcrf_no_temporal | ppedcrf_no_ncp | mask_blur | mask_mosaic | "
                    "random_mask | global_gaussian | identity");
    sub->add_option("--seed", n.seed, "Noise seed");
  }
  sub->add_option("--alpha", n.alpha, "Global perturbation knob of the control map");
  sub->add_option("--lambda-s", n.dcrf.lambda_s, "Spatial smoothing weight");
  sub->add_option("--lambda-tau", n.dcrf.lambda_tau, "Temporal weight towards the previous mask");
  sub->add_option("--dcrf-iterations", n.dcrf.iterations, "Mean-field iterations");
  sub->add_option("--smooth-kernel", n.dcrf.smooth_kernel, "Odd average-pool window");
  sub->add_option("--unary-gain", n.unary.gain, "Gradient heuristic gain");
  sub->add_option("--unary-bias", n.unary.bias, "Gradient heuristic bias");
  sub->add_option("--eps-div", n.eps_div, "Control-map normalisation epsilon");
  sub->add_option("--blur-kernel", n.blur_kernel, "Box-blur kernel for mask_blur (odd)");
  sub->add_option("--mosaic-block", n.mosaic_block, "Block size for mask_mosaic");
  sub->add_option("--coverage", n.random_mask_coverage, "Bernoulli coverage of random_mask");
  sub->add_option("--mask-threshold", n.mask_threshold,
                  "Binarisation threshold for blur/mosaic supports and mask IoU");
}

void add_resolution_options(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--width", rc.spec.resolution.width, "Working width");
  sub->add_option("--height", rc.spec.resolution.height, "Working height");
}

void add_data_options(CLI::App* sub, RunConfig& rc) {
  DataOptions& d = rc.data;
  sub->add_option("--data-root", d.data_root,
                  "Directory of <clip>_frame<n>.<png|jpg> files; synthetic scenes if omitted");
  sub->add_option("--synthetic-seed", d.synthetic.seed, "Seed of the synthetic scene generator");
  sub->add_option("--synthetic-locations", d.synthetic.locations, "Synthetic locations");
  sub->add_option("--synthetic-siblings", d.synthetic.siblings_per_location,
                  "Repainted look-alike scenes per location");
  sub->add_option("--synthetic-unrelated", d.synthetic.unrelated, "Unrelated synthetic scenes");
  sub->add_option("--synthetic-frames", d.synthetic.frames, "Frames per synthetic clip");
  add_resolution_options(sub, rc);
}

void add_spec_options(CLI::App* sub, RunConfig& rc, bool with_mechanisms) {
  BenchmarkSpec& s = rc.spec;
  sub->add_option("--n-pairs", s.n_pairs, "Paired locations (queries)");
  sub->add_option("--gallery-sizes", s.gallery_sizes, "Nested gallery sizes")->delimiter(',');
  sub->add_option("--seeds", s.seeds, "Noise seeds")->delimiter(',');
  sub->add_option("--anchor", s.anchor_embedder, "Embedder used for pair mining");
  sub->add_option("--embedders", s.attack_embedders, "Attack embedders")->delimiter(',');
  sub->add_option("--context-frames", s.context_frames, "Odd window around each query middle frame");
  sub->add_option("--ks", s.ks, "Top-k cut-offs")->delimiter(',');
  sub->add_option("--jobs", s.jobs, "Worker threads (0 = available parallelism)");
  if (with_mechanisms) {
    sub->add_option("--sigma-levels", s.sigma_levels, "Noise scales sigma0")->delimiter(',');
    sub->add_option("--mechanisms", rc.mechanisms, "Mechanisms to evaluate")->delimiter(',');
  }
  add_noise_options(sub, rc, false);
  add_data_options(sub, rc);
}

void finalize_spec(RunConfig& rc) {
  if (!rc.mechanisms.empty()) rc.spec.mechanisms = parse_mechanisms(rc.mechanisms);
  rc.spec.noise = rc.noise;
  rc.spec.validate();
}

json spec_sidecar(std::string_view command, const RunConfig& rc) {
  json j = tool_header(command);
  j["data"] = data_json(rc.data);
  j["spec"] = to_json(rc.spec);
  return j;
}

BenchmarkRunner make_runner(const RunConfig& rc, const Logger& log) {
  log.info("loading candidate sequences");
  std::vector<Sequence> candidates = load_data(rc.data, rc.spec.resolution);
  log.info("building benchmark layout over " + std::to_string(candidates.size()) + " clips");
  return BenchmarkRunner(rc.spec, std::move(candidates));
}

int cmd_synth(RunConfig& rc, std::ostream& out, const Logger& log) {
  SyntheticSpec synthetic = rc.data.synthetic;
  synthetic.resolution = rc.spec.resolution;
  json side = tool_header("synth");
  side["data"] = data_json(rc.data);
  side["resolution"] = {{"width", synthetic.resolution.width}, {"height", synthetic.resolution.height}};
  write_json(fs::path(rc.output) / "synth.json", side);
  const auto clips = generate_synthetic_benchmark(synthetic);
  for (const Sequence& s : clips) {
    log.info("writing " + s.id());
    write_sequence(s, rc.output);
  }
  out << clips.size() << " clips written to " << rc.output << '\n';
  return kExitOk;
}

int cmd_sanitize(RunConfig& rc, std::ostream& out, const Logger& log) {
  NoiseConfig cfg = rc.noise;
  cfg.mechanism = parse_mechanism(rc.mechanism);
  json budget;
  if (rc.budget.any()) {
    PrivacyBudget b;
    if (rc.budget.epsilon) b.epsilon = *rc.budget.epsilon;
    if (rc.budget.delta) b.delta = *rc.budget.delta;
    if (rc.budget.clip_bound) b.clip_bound = *rc.budget.clip_bound;
    cfg.sigma0 = calibrate_sigma(b);
    budget = {{"source", "budget"}, {"epsilon", b.epsilon}, {"delta", b.delta},
              {"clip_bound", b.clip_bound}, {"sigma0", cfg.sigma0}};
  } else {
    const PrivacyBudget b;
    json epsilon = cfg.sigma0 > 0.0 ? json(sigma_for_target(b, cfg.sigma0)) : json("inf");
    budget = {{"source", "sigma0"}, {"epsilon", epsilon}, {"delta", b.delta},
              {"clip_bound", b.clip_bound}, {"sigma0", cfg.sigma0}};
  }
  cfg.validate();

  std::vector<std::string> clips = rc.clips.empty() ? discover_clips(rc.input) : rc.clips;
  require(!clips.empty(), ErrorCode::empty_input, "no clips found under '" + rc.input + "'");

  json side = tool_header("sanitize");
  side["input"] = rc.input;
  side["output"] = rc.output;
  side["clips"] = clips;
  side["budget"] = budget;
  side["unary"] = rc.logits.empty() ? json("gradient_heuristic") : json(rc.logits);
  side["noise"] = to_json(cfg);
  write_json(fs::path(rc.output) / "sanitize.json", side);

  json metrics = json::array();
  for (const std::string& clip : clips) {
    log.info("sanitizing " + clip);
    const Sequence seq = load_sequence(rc.input, clip);
    const auto numbers = frame_numbers(rc.input, clip);
    UnarySource unary = heuristic_unary(cfg.unary);
    if (!rc.logits.empty()) {
      std::vector<std::string> stems;
      for (std::uint64_t n : numbers) {
        const std::string name = format_frame_name(clip, n, "png");
        stems.push_back(name.substr(0, name.size() - 4));
      }
      unary = file_unary(rc.logits, std::move(stems));
    }
    const auto sanitized = sanitize_sequence(seq, cfg, unary);
    std::vector<Frame> frames;
    std::vector<double> energies;
    std::vector<MaskMap> supports;
    for (std::size_t i = 0; i < sanitized.size(); ++i) {
      write_frame(sanitized[i].frame, fs::path(rc.output) / format_frame_name(clip, numbers[i], "png"));
      frames.push_back(sanitized[i].frame);
      energies.push_back(normalized_energy(sanitized[i].perturbation_energy));
      supports.push_back(sanitized[i].mask_used);
    }
    const std::size_t mid = seq.middle_index();
    metrics.push_back({{"clip", clip},
                       {"frames", seq.size()},
                       {"psnr_db", format_metric(psnr(seq.frames()[mid], frames[mid]))},
                       {"ssim", format_metric(ssim(seq.frames()[mid], frames[mid]))},
                       {"flicker", format_metric(frames.size() > 1 ? flicker(frames) : 0.0)},
                       {"pert_stability", format_metric(perturbation_stability(energies))},
                       {"mask_iou", format_metric(frames.size() > 1
                                                      ? mask_iou(supports, cfg.mask_threshold)
                                                      : 1.0)}});
  }
  write_json(fs::path(rc.output) / "metrics.json", metrics);
  out << clips.size() << " clip(s) sanitized with " << to_string(cfg.mechanism)
      << " sigma0=" << format_parameter(cfg.sigma0) << '\n';
  return kExitOk;
}

int cmd_mine(RunConfig& rc, std::ostream& out, const Logger& log, bool hardness_only) {
  finalize_spec(rc);
  write_json(fs::path(rc.output) / "params.json", spec_sidecar(hardness_only ? "hardness" : "mine", rc));
  log.info("loading candidate sequences");
  const auto candidates = load_data(rc.data, rc.spec.resolution);
  std::vector<int> prefixes;
  for (int size : rc.spec.gallery_sizes) {
    if (size > rc.spec.n_pairs) prefixes.push_back(size - rc.spec.n_pairs);
  }
  const BenchmarkLayout layout = build_layout(candidates, builtin_embedder(rc.spec.anchor_embedder),
                                              rc.spec.n_pairs, rc.spec.distractor_count(), prefixes);
  write_json(fs::path(rc.output) / "hardness.json", to_json(layout.hardness));
  if (!hardness_only) write_json(fs::path(rc.output) / "layout.json", to_json(layout));
  out << to_json(layout.hardness).dump(2) << '\n';
  return kExitOk;
}

int cmd_bench(RunConfig& rc, std::ostream& out, const Logger& log) {
  finalize_spec(rc);
  const fs::path dir(rc.output);
  write_json(dir / "params.json", spec_sidecar("bench", rc));
  const BenchmarkRunner runner = make_runner(rc, log);
  write_json(dir / "hardness.json", to_json(runner.layout().hardness));
  write_json(dir / "layout.json", to_json(runner.layout()));
  log.info("running benchmark");
  auto write_report = [&](const BenchmarkReport& report) {
    write_text_file(dir / "summary.csv", results_csv(report.summary, rc.spec, true));
    write_text_file(dir / "per_seed.csv", results_csv(report.per_seed, rc.spec, false));
  };
  try {
    const BenchmarkReport report = runner.run();
    write_report(report);
    out << report.summary.size() << " summary rows written to " << (dir / "summary.csv").string()
        << '\n';
    return kExitOk;
  } catch (const PartialBenchmarkError& e) {
    write_report(e.partial());
    json manifest = json::array();
    for (const JobFailure& f : e.failures()) manifest.push_back({{"job", f.job}, {"message", f.message}});
    write_json(dir / "failures.json", manifest);
    throw;
  }
}

int cmd_frontier(RunConfig& rc, std::ostream& out, const Logger& log) {
  finalize_spec(rc);
  const auto mechanisms = parse_mechanisms(rc.frontier_mechanisms);
  json side = spec_sidecar("frontier", rc);
  side["frontier_sigmas"] = rc.frontier_sigmas;
  side["frontier_mechanisms"] = rc.frontier_mechanisms;
  write_json(fs::path(rc.output) / "params.json", side);
  const BenchmarkRunner runner = make_runner(rc, log);
  log.info("sweeping sigma0");
  const auto rows = runner.frontier(mechanisms, rc.frontier_sigmas);
  write_text_file(fs::path(rc.output) / "frontier.csv", frontier_csv(rows, rc.spec));
  out << rows.size() << " frontier rows written\n";
  return kExitOk;
}

int cmd_matchop(RunConfig& rc, std::ostream& out, const Logger& log) {
  finalize_spec(rc);
  const Mechanism mechanism = parse_mechanism(rc.matchop_mechanism);
  json side = spec_sidecar("matchop", rc);
  side["target_psnr_db"] = format_metric(rc.target_psnr);
  side["mechanism"] = rc.matchop_mechanism;
  side["sigma_max"] = rc.sigma_max;
  side["tolerance_db"] = rc.tolerance;
  side["max_iterations"] = rc.max_iterations;
  write_json(fs::path(rc.output) / "params.json", side);
  const BenchmarkRunner runner = make_runner(rc, log);
  log.info("bisecting sigma0");
  const MatchedPoint point = runner.matched_operating_point(rc.target_psnr, mechanism, rc.sigma_max,
                                                            rc.tolerance, rc.max_iterations);
  write_json(fs::path(rc.output) / "matchop.json", to_json(point));
  out << to_json(point).dump() << '\n';
  return kExitOk;
}

int cmd_sweep(RunConfig& rc, std::ostream& out, const Logger& log) {
  finalize_spec(rc);
  json side = spec_sidecar("sweep-baselines", rc);
  side["blur_kernels"] = rc.blur_kernels;
  side["mosaic_blocks"] = rc.mosaic_blocks;
  write_json(fs::path(rc.output) / "params.json", side);
  const BenchmarkRunner runner = make_runner(rc, log);
  log.info("sweeping baseline parameters");
  const auto rows = runner.baseline_param_sweep(rc.blur_kernels, rc.mosaic_blocks);
  write_text_file(fs::path(rc.output) / "sweep.csv", sweep_csv(rows, rc.spec));
  out << rows.size() << " sweep rows written\n";
  return kExitOk;
}

int cmd_embed(RunConfig& rc, std::ostream& out, const Logger& log) {
  const Embedder embedder = builtin_embedder(rc.embedder);
  require(rc.frame_mode == "middle" || rc.frame_mode == "all", ErrorCode::invalid_argument,
          "--frame must be 'middle' or 'all'");
  std::vector<std::string> clips = rc.clips.empty() ? discover_clips(rc.input) : rc.clips;
  require(!clips.empty(), ErrorCode::empty_input, "no clips found under '" + rc.input + "'");
  std::vector<EmbeddingRecord> records;
  for (const std::string& clip : clips) {
    log.info("embedding " + clip);
    const Sequence seq = resize_sequence(load_sequence(rc.input, clip), rc.spec.resolution);
    if (rc.frame_mode == "middle") {
      records.push_back({clip, clip, embedder.embed(seq.middle()), embedder.name});
      continue;
    }
    const auto numbers = frame_numbers(rc.input, clip);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      records.push_back({clip + "_frame" + std::to_string(numbers[i]), clip,
                         embedder.embed(seq.frames()[i]), embedder.name});
    }
  }
  save_embeddings(records, rc.output);
  out << records.size() << " embeddings written to " << rc.output << '\n';
  return kExitOk;
}

int cmd_attack(RunConfig& rc, std::ostream& out, const Logger& log) {
  log.info("loading embedding files");
  const auto gallery = load_embeddings(rc.gallery_file);
  const auto queries = load_embeddings(rc.query_file);
  std::optional<std::vector<EmbeddingRecord>> raw;
  if (!rc.raw_query_file.empty()) raw = load_embeddings(rc.raw_query_file);
  const RetrievalResult result = topk_accuracy(queries, gallery, rc.spec.ks);
  std::optional<RetrievalResult> raw_result;
  if (raw) raw_result = topk_accuracy(*raw, gallery, rc.spec.ks);

  std::ostringstream csv;
  csv << "schema_version,embedder,gallery_size,queries,k,top_k";
  if (raw_result) csv << ",raw_top_k,delta_vs_raw";
  csv << '\n';
  for (std::size_t i = 0; i < result.k_values.size(); ++i) {
    csv << kCsvSchemaVersion << ',' << queries.front().embedder_name << ',' << gallery.size() << ','
        << queries.size() << ',' << result.k_values[i] << ',' << format_metric(result.accuracy_at_k[i]);
    if (raw_result) {
      csv << ',' << format_metric(raw_result->accuracy_at_k[i]) << ','
          << format_metric(result.accuracy_at_k[i] - raw_result->accuracy_at_k[i]);
    }
    csv << '\n';
  }
  if (rc.output.empty()) {
    out << csv.str();
  } else {
    write_text_file(rc.output, csv.str());
    out << "attack results written to " << rc.output << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Location-privacy sanitization for video frames and a paired-scene "
               "retrieval-attack benchmark"};
  app.name("ppedcrf");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(PPEDCRF_VERSION));
  app.set_config("--config", "",
                 "Key-value config file (TOML/INI: 'key = value', one [subcommand] section)");
  app.add_flag("-v,--verbose", rc.verbose, "Progress messages on stderr (repeat for more)");

  CLI::App* synth = app.add_subcommand("synth", "Write the procedural benchmark clips to a directory");
  synth->add_option("-o,--output", rc.output, "Output directory")->required();
  add_data_options(synth, rc);
  synth->remove_option(synth->get_option("--data-root"));

  CLI::App* sanitize = app.add_subcommand("sanitize", "Sanitize the clips of a directory");
  sanitize->add_option("-i,--input", rc.input, "Input directory")->required()->check(CLI::ExistingDirectory);
  sanitize->add_option("-o,--output", rc.output, "Output directory")->required();
  sanitize->add_option("--clip", rc.clips, "Clip ids to process (default: every clip)")->delimiter(',');
  sanitize->add_option("--logits", rc.logits,
                       "Directory of <clip>_frame<n>.lgt unary logits (default: gradient heuristic)");
  add_noise_options(sanitize, rc, true);
  CLI::Option* sigma = sanitize->add_option("--sigma0", rc.noise.sigma0, "Base noise scale");
  CLI::Option* eps = sanitize->add_option("--epsilon", rc.budget.epsilon, "Privacy budget epsilon (default 1)");
  CLI::Option* delta = sanitize->add_option("--delta", rc.budget.delta, "Privacy budget delta (default 1e-5)");
  CLI::Option* clip = sanitize->add_option("--clip-bound", rc.budget.clip_bound,
                                           "Sensitivity bound C in intensity units (default 1)");
  sigma->excludes(eps)->excludes(delta)->excludes(clip);

  CLI::App* mine = app.add_subcommand("mine", "Mine scene pairs and hard distractors");
  mine->add_option("-o,--output", rc.output, "Output directory")->required();
  add_spec_options(mine, rc, false);

  CLI::App* hardness = app.add_subcommand("hardness", "Report benchmark hardness statistics");
  hardness->add_option("-o,--output", rc.output, "Output directory")->required();
  add_spec_options(hardness, rc, false);

  CLI::App* bench = app.add_subcommand("bench", "Run the paired-scene retrieval benchmark");
  bench->add_option("-o,--output", rc.output, "Output directory")->required();
  add_spec_options(bench, rc, true);

  CLI::App* frontier = app.add_subcommand("frontier", "Sweep sigma0 for a privacy-utility frontier");
  frontier->add_option("-o,--output", rc.output, "Output directory")->required();
  frontier->add_option("--sigma-levels", rc.frontier_sigmas, "Noise scales sigma0")->delimiter(',');
  frontier->add_option("--mechanisms", rc.frontier_mechanisms, "Mechanisms to sweep")->delimiter(',');
  add_spec_options(frontier, rc, false);

  CLI::App* matchop = app.add_subcommand("matchop", "Find the sigma0 that reaches a target PSNR");
  matchop->add_option("-o,--output", rc.output, "Output directory")->required();
  matchop->add_option("--target-psnr", rc.target_psnr, "Target seed-averaged PSNR in dB")->required();
  matchop->add_option("--mechanism", rc.matchop_mechanism, "Noise mechanism to calibrate");
  matchop->add_option("--sigma-max", rc.sigma_max, "Upper end of the sigma0 bracket");
  matchop->add_option("--tolerance", rc.tolerance, "PSNR tolerance in dB");
  matchop->add_option("--max-iterations", rc.max_iterations, "Bisection step limit");
  add_spec_options(matchop, rc, false);

  CLI::App* sweep = app.add_subcommand("sweep-baselines", "Sweep blur kernel and mosaic block sizes");
  sweep->add_option("-o,--output", rc.output, "Output directory")->required();
  sweep->add_option("--blur-kernels", rc.blur_kernels, "Odd box-blur kernels")->delimiter(',');
  sweep->add_option("--mosaic-blocks", rc.mosaic_blocks, "Mosaic block sizes")->delimiter(',');
  add_spec_options(sweep, rc, false);

  CLI::App* embed = app.add_subcommand("embed", "Embed clips with a built-in embedder into an EMB1 file");
  embed->add_option("-i,--input", rc.input, "Input directory")->required()->check(CLI::ExistingDirectory);
  embed->add_option("-o,--output", rc.output, "Output .emb1 file")->required();
  embed->add_option("--clip", rc.clips, "Clip ids (default: every clip)")->delimiter(',');
  embed->add_option("--embedder", rc.embedder, "tilemean[:grid] | gradhist[:gridxbins]");
  embed->add_option("--frame", rc.frame_mode, "middle | all");
  add_resolution_options(embed, rc);

  CLI::App* attack = app.add_subcommand("attack", "Top-k retrieval attack from EMB1 files");
  attack->add_option("--gallery", rc.gallery_file, "Gallery EMB1 file")->required()->check(CLI::ExistingFile);
  attack->add_option("--queries", rc.query_file, "Query EMB1 file")->required()->check(CLI::ExistingFile);
  attack->add_option("--raw-queries", rc.raw_query_file, "Unprotected query EMB1 file for deltas")
      ->check(CLI::ExistingFile);
  attack->add_option("--ks", rc.spec.ks, "Top-k cut-offs")->delimiter(',');
  attack->add_option("-o,--output", rc.output, "Output CSV (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << error_record("usage", e.what()).dump() << '\n';
    return kExitUsage;
  }

  const Logger log(err, rc.verbose);
  try {
    if (synth->parsed()) return cmd_synth(rc, out, log);
    if (sanitize->parsed()) return cmd_sanitize(rc, out, log);
    if (mine->parsed()) return cmd_mine(rc, out, log, false);
    if (hardness->parsed()) return cmd_mine(rc, out, log, true);
    if (bench->parsed()) return cmd_bench(rc, out, log);
    if (frontier->parsed()) return cmd_frontier(rc, out, log);
    if (matchop->parsed()) return cmd_matchop(rc, out, log);
    if (sweep->parsed()) return cmd_sweep(rc, out, log);
    if (embed->parsed()) return cmd_embed(rc, out, log);
    if (attack->parsed()) return cmd_attack(rc, out, log);
  } catch (const PartialBenchmarkError& e) {
    json record = error_record("partial", e.what());
    record["failures"] = e.failures().size();
    err << record.dump() << '\n';
    return kExitPartial;
  } catch (const Error& e) {
    err << error_record(to_string(e.code()), e.what()).dump() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << error_record("internal", e.what()).dump() << '\n';
    return kExitFailure;
  }
  err << error_record("usage", "no subcommand").dump() << '\n';
  return kExitUsage;
}

}  // namespace ppedcrf::cli
