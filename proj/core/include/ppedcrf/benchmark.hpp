#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppedcrf/construction.hpp"
#include "ppedcrf/embedding.hpp"
#include "ppedcrf/image.hpp"
#include "ppedcrf/imageio.hpp"
#include "ppedcrf/metrics.hpp"
#include "ppedcrf/retrieval.hpp"
#include "ppedcrf/sanitize.hpp"

namespace ppedcrf {

inline constexpr std::string_view kCsvSchemaVersion = "ppedcrf-results-v1";

struct BenchmarkSpec {
  int n_pairs = 12;
  /// Nested galleries: n_pairs gallery views plus the hardest
  /// (size - n_pairs) distractors.
  std::vector<int> gallery_sizes{12, 24, 48};
  std::vector<std::uint64_t> seeds{1234, 1235, 1236};
  std::vector<double> sigma_levels{8.0};
  std::vector<Mechanism> mechanisms{
      Mechanism::ppedcrf,     Mechanism::ppedcrf_no_temporal, Mechanism::ppedcrf_no_ncp,
      Mechanism::mask_blur,   Mechanism::mask_mosaic,         Mechanism::random_mask,
      Mechanism::global_gaussian};
  /// Shared mechanism parameters; mechanism, sigma0 and seed are overridden
  /// per job.
  NoiseConfig noise{};
  std::string anchor_embedder = "tilemean";
  std::vector<std::string> attack_embedders{"tilemean", "gradhist"};
  /// Odd number of frames centred on each query's middle frame.
  int context_frames = 5;
  std::vector<int> ks{1, 5, 10};
  Resolution resolution{};
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  int jobs = 0;

  int distractor_count() const { return gallery_sizes.back() - n_pairs; }
  void validate() const;
};

/// Mean and sample standard deviation (n - 1) across seeds.
struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

Stat summarize(std::span<const double> values);

struct ResultRow {
  std::string mechanism;  // "raw" for the unprotected baseline
  std::string embedder;
  int gallery_size = 0;
  double sigma0 = 0.0;
  std::string seed;  // decimal seed or "avg"
  Stat top1, top5, top10;
  Stat psnr_db, ssim, flicker, pert_stability, mask_iou;
  double delta_vs_raw = 0.0;
};

struct BenchmarkReport {
  std::vector<ResultRow> per_seed;
  std::vector<ResultRow> summary;
};

struct FrontierRow {
  std::string mechanism;
  std::string embedder;
  int gallery_size = 0;
  double sigma0 = 0.0;
  Stat top1;
  Stat psnr_db;
  Stat ssim;
};

struct SweepRow {
  std::string baseline;  // mask_blur or mask_mosaic
  int parameter = 0;     // kernel size or block size
  std::string embedder;
  int gallery_size = 0;
  double top1 = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct MatchedPoint {
  Mechanism mechanism = Mechanism::global_gaussian;
  double target_psnr_db = 0.0;
  double sigma0 = 0.0;
  double achieved_psnr_db = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Per-job failure kept for the failure manifest.
struct JobFailure {
  std::string job;
  std::string message;
};

/// Raised by run() when some jobs failed; carries the rows that completed.
class PartialBenchmarkError : public Error {
 public:
  PartialBenchmarkError(BenchmarkReport partial, std::vector<JobFailure> failures);
  const BenchmarkReport& partial() const noexcept { return partial_; }
  const std::vector<JobFailure>& failures() const noexcept { return failures_; }

 private:
  BenchmarkReport partial_;
  std::vector<JobFailure> failures_;
};

/// Paired-scene retrieval benchmark over an in-memory candidate pool. The
/// constructor mines pairs, selects distractors, embeds galleries and caches
/// the refined query masks; the evaluation methods are const and can be
/// called repeatedly.
class BenchmarkRunner {
 public:
  BenchmarkRunner(BenchmarkSpec spec, std::vector<Sequence> candidates);
  ~BenchmarkRunner();
  BenchmarkRunner(BenchmarkRunner&&) noexcept;
  BenchmarkRunner& operator=(BenchmarkRunner&&) noexcept;

  const BenchmarkSpec& spec() const noexcept;
  const BenchmarkLayout& layout() const noexcept;
  /// Query windows, in pair order.
  const std::vector<Sequence>& queries() const noexcept;

  BenchmarkReport run() const;

  std::vector<FrontierRow> frontier(std::span<const Mechanism> mechanisms,
                                    std::span<const double> sigma_levels) const;

  /// Seed-averaged mean PSNR of the sanitized query middle frames.
  double mean_psnr(Mechanism mechanism, double sigma0) const;

  /// Bisection on sigma0 in [0, sigma_max] until |PSNR - target| <= tolerance
  /// or max_iterations evaluations.
  MatchedPoint matched_operating_point(double target_psnr_db, Mechanism mechanism,
                                       double sigma_max = 64.0, double tolerance_db = 0.05,
                                       int max_iterations = 30) const;

  std::vector<SweepRow> baseline_param_sweep(std::span<const int> blur_kernels,
                                             std::span<const int> mosaic_blocks) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Every clip under `root`, resized to `resolution`.
std::vector<Sequence> load_candidates(const std::filesystem::path& root, Resolution resolution);

}  // namespace ppedcrf
