#include "ppedcrf/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ppedcrf {

namespace {

nlohmann::ordered_json number_or_string(double value) {
  if (std::isfinite(value)) return value;
  return format_metric(value);
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(seeds[i]);
  }
  return out;
}

const char* kParameterHeader =
    "alpha,lambda_s,lambda_tau,dcrf_iterations,smooth_kernel,unary_gain,unary_bias,eps_div,"
    "blur_kernel,mosaic_block,random_coverage,mask_threshold,seeds,anchor_embedder,n_pairs,"
    "context_frames,width,height";

std::string parameter_columns(const BenchmarkSpec& spec) {
  const NoiseConfig& n = spec.noise;
  std::ostringstream out;
  out << format_parameter(n.alpha) << ',' << format_parameter(n.dcrf.lambda_s) << ','
      << format_parameter(n.dcrf.lambda_tau) << ',' << n.dcrf.iterations << ','
      << n.dcrf.smooth_kernel << ',' << format_parameter(n.unary.gain) << ','
      << format_parameter(n.unary.bias) << ',' << format_parameter(n.eps_div) << ','
      << n.blur_kernel << ',' << n.mosaic_block << ',' << format_parameter(n.random_mask_coverage)
      << ',' << format_parameter(n.mask_threshold) << ',' << join_seeds(spec.seeds) << ','
      << spec.anchor_embedder << ',' << spec.n_pairs << ',' << spec.context_frames << ','
      << spec.resolution.width << ',' << spec.resolution.height;
  return out.str();
}

}  // namespace

std::string format_metric(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string format_parameter(double value) {
  if (!std::isfinite(value)) return format_metric(value);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string results_csv(std::span<const ResultRow> rows, const BenchmarkSpec& spec,
                        bool with_std) {
  static const char* metrics[] = {"top1",    "top5",    "top10",          "psnr_db",
                                  "ssim",    "flicker", "pert_stability", "mask_iou"};
  std::ostringstream out;
  out << "schema_version,mechanism,embedder,gallery_size,sigma0,seed";
  for (const char* m : metrics) {
    out << ',' << m;
    if (with_std) out << ',' << m << "_std";
  }
  out << ",delta_vs_raw," << kParameterHeader << '\n';
  const std::string params = parameter_columns(spec);
  for (const ResultRow& r : rows) {
    out << kCsvSchemaVersion << ',' << r.mechanism << ',' << r.embedder << ',' << r.gallery_size
        << ',' << format_parameter(r.sigma0) << ',' << r.seed;
    for (const Stat* s : {&r.top1, &r.top5, &r.top10, &r.psnr_db, &r.ssim, &r.flicker,
                          &r.pert_stability, &r.mask_iou}) {
      out << ',' << format_metric(s->mean);
      if (with_std) out << ',' << format_metric(s->stddev);
    }
    out << ',' << format_metric(r.delta_vs_raw) << ',' << params << '\n';
  }
  return out.str();
}

std::string frontier_csv(std::span<const FrontierRow> rows, const BenchmarkSpec& spec) {
  std::ostringstream out;
  out << "schema_version,mechanism,embedder,gallery_size,sigma0,top1,top1_std,psnr_db,"
         "psnr_db_std,ssim,ssim_std,"
      << kParameterHeader << '\n';
  const std::string params = parameter_columns(spec);
  for (const FrontierRow& r : rows) {
    out << kCsvSchemaVersion << ',' << r.mechanism << ',' << r.embedder << ',' << r.gallery_size
        << ',' << format_parameter(r.sigma0) << ',' << format_metric(r.top1.mean) << ','
        << format_metric(r.top1.stddev) << ',' << format_metric(r.psnr_db.mean) << ','
        << format_metric(r.psnr_db.stddev) << ',' << format_metric(r.ssim.mean) << ','
        << format_metric(r.ssim.stddev) << ',' << params << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepRow> rows, const BenchmarkSpec& spec) {
  std::ostringstream out;
  out << "schema_version,baseline,parameter,embedder,gallery_size,top1,psnr_db,ssim,"
      << kParameterHeader << '\n';
  const std::string params = parameter_columns(spec);
  for (const SweepRow& r : rows) {
    out << kCsvSchemaVersion << ',' << r.baseline << ',' << r.parameter << ',' << r.embedder
        << ',' << r.gallery_size << ',' << format_metric(r.top1) << ','
        << format_metric(r.psnr_db) << ',' << format_metric(r.ssim) << ',' << params << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const HardnessReport& report) {
  nlohmann::ordered_json j;
  j["mean_pair_similarity"] = report.mean_pair_similarity;
  j["min_pair_similarity"] = report.min_pair_similarity;
  j["max_pair_similarity"] = report.max_pair_similarity;
  j["mean_distractor_max_similarity"] =
      report.mean_distractor_max_similarity ? nlohmann::ordered_json(*report.mean_distractor_max_similarity)
                                            : nlohmann::ordered_json(nullptr);
  j["hardest_distractor_similarity"] =
      report.hardest_distractor_similarity ? nlohmann::ordered_json(*report.hardest_distractor_similarity)
                                           : nlohmann::ordered_json(nullptr);
  auto prefixes = nlohmann::ordered_json::array();
  for (const auto& [size, mean] : report.distractor_prefix_means) {
    prefixes.push_back({{"distractors", size}, {"mean_max_similarity", mean}});
  }
  j["distractor_prefix_means"] = prefixes;
  return j;
}

nlohmann::ordered_json to_json(const BenchmarkLayout& layout) {
  nlohmann::ordered_json j;
  auto pairs = nlohmann::ordered_json::array();
  for (const ScenePair& p : layout.pairs) {
    pairs.push_back({{"gallery_id", p.gallery_id}, {"query_id", p.query_id},
                     {"similarity", p.similarity}});
  }
  auto distractors = nlohmann::ordered_json::array();
  for (const Distractor& d : layout.distractors) {
    distractors.push_back({{"id", d.id}, {"score", d.score}});
  }
  j["pairs"] = pairs;
  j["distractors"] = distractors;
  j["hardness"] = to_json(layout.hardness);
  return j;
}

nlohmann::ordered_json to_json(const NoiseConfig& config) {
  nlohmann::ordered_json j;
  j["mechanism"] = std::string(to_string(config.mechanism));
  j["sigma0"] = config.sigma0;
  j["alpha"] = config.alpha;
  j["seed"] = config.seed;
  j["rng"] = "mt19937_64 seeded by splitmix64(seed, fnv1a64(sequence_id), frame_index); "
             "53-bit uniforms; Marsaglia polar normals";
  j["dcrf"] = {{"lambda_s", config.dcrf.lambda_s},
               {"lambda_tau", config.dcrf.lambda_tau},
               {"iterations", config.dcrf.iterations},
               {"smooth_kernel", config.dcrf.smooth_kernel}};
  j["unary"] = {{"kind", "gradient_heuristic"},
                {"gain", config.unary.gain},
                {"bias", config.unary.bias}};
  j["eps_div"] = config.eps_div;
  j["blur"] = {{"family", "box"}, {"kernel", config.blur_kernel}};
  j["mosaic_block"] = config.mosaic_block;
  j["random_mask_coverage"] = config.random_mask_coverage;
  j["mask_threshold"] = config.mask_threshold;
  return j;
}

nlohmann::ordered_json to_json(const BenchmarkSpec& spec) {
  nlohmann::ordered_json j;
  j["schema_version"] = std::string(kCsvSchemaVersion);
  j["n_pairs"] = spec.n_pairs;
  j["gallery_sizes"] = spec.gallery_sizes;
  j["seeds"] = spec.seeds;
  j["sigma_levels"] = spec.sigma_levels;
  auto mechs = nlohmann::ordered_json::array();
  for (Mechanism m : spec.mechanisms) mechs.push_back(std::string(to_string(m)));
  j["mechanisms"] = mechs;
  j["noise"] = to_json(spec.noise);
  j["anchor_embedder"] = spec.anchor_embedder;
  j["attack_embedders"] = spec.attack_embedders;
  j["context_frames"] = spec.context_frames;
  j["ks"] = spec.ks;
  j["resolution"] = {{"width", spec.resolution.width}, {"height", spec.resolution.height}};
  const SsimParams ssim_params;
  j["ssim"] = {{"channel", "luma"},
               {"window", ssim_params.window},
               {"gaussian_sigma", ssim_params.gaussian_sigma},
               {"k1", ssim_params.k1},
               {"k2", ssim_params.k2},
               {"dynamic_range", ssim_params.dynamic_range}};
  return j;
}

nlohmann::ordered_json to_json(const MatchedPoint& point) {
  nlohmann::ordered_json j;
  j["mechanism"] = std::string(to_string(point.mechanism));
  j["target_psnr_db"] = number_or_string(point.target_psnr_db);
  j["sigma0"] = point.sigma0;
  j["achieved_psnr_db"] = number_or_string(point.achieved_psnr_db);
  j["iterations"] = point.iterations;
  j["converged"] = point.converged;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace ppedcrf
