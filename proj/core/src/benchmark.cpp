#include "ppedcrf/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace ppedcrf {

namespace {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
}

double mean_of(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

// Quality of one sanitized query window.
struct QueryOutcome {
  std::vector<Embedding> embeddings;  // one per attack embedder
  double psnr = 0.0;
  double ssim = 0.0;
  double flicker = 0.0;
  double stability = 0.0;
  double mask_iou = 0.0;
};

// Aggregates for one (mechanism, sigma0, seed).
struct SeedOutcome {
  QualityReport quality;
  // [embedder][gallery] -> accuracies at ks
  std::vector<std::vector<RetrievalResult>> retrieval;
};

}  // namespace

Stat summarize(std::span<const double> values) {
  require(!values.empty(), ErrorCode::empty_input, "cannot summarise an empty sample");
  Stat s;
  s.mean = mean_of(values);
  const bool all_equal = std::all_of(values.begin(), values.end(),
                                     [&](double v) { return v == values.front(); });
  if (all_equal || values.size() == 1) {
    s.stddev = 0.0;
    return s;
  }
  if (!std::isfinite(s.mean)) {
    s.stddev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(values.size() - 1));
  return s;
}

void BenchmarkSpec::validate() const {
  require(n_pairs >= 2, ErrorCode::invalid_argument, "n_pairs must be >= 2");
  require(!seeds.empty(), ErrorCode::invalid_argument, "at least one seed is required");
  require(!gallery_sizes.empty(), ErrorCode::invalid_argument, "at least one gallery size is required");
  require(gallery_sizes.front() >= n_pairs, ErrorCode::invalid_argument,
          "the smallest gallery must hold every paired gallery view");
  for (std::size_t i = 1; i < gallery_sizes.size(); ++i) {
    require(gallery_sizes[i] > gallery_sizes[i - 1], ErrorCode::invalid_argument,
            "gallery sizes must be strictly increasing");
  }
  require(!sigma_levels.empty(), ErrorCode::invalid_argument, "at least one sigma0 is required");
  for (double s : sigma_levels) {
    require(s >= 0.0 && std::isfinite(s), ErrorCode::invalid_argument, "sigma0 must be >= 0");
  }
  require(!mechanisms.empty(), ErrorCode::invalid_argument, "at least one mechanism is required");
  require(!attack_embedders.empty(), ErrorCode::invalid_argument,
          "at least one attack embedder is required");
  require(context_frames >= 1 && context_frames % 2 == 1, ErrorCode::invalid_argument,
          "context_frames must be odd and >= 1");
  require(!ks.empty(), ErrorCode::invalid_argument, "at least one k is required");
  for (int k : ks) require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
  require(jobs >= 0, ErrorCode::invalid_argument, "jobs must be >= 0");
  noise.validate();
}

PartialBenchmarkError::PartialBenchmarkError(BenchmarkReport partial,
                                             std::vector<JobFailure> failures)
    : Error(ErrorCode::io, std::to_string(failures.size()) + " benchmark job(s) failed; first: " +
                               (failures.empty() ? std::string("?") : failures.front().message)),
      partial_(std::move(partial)),
      failures_(std::move(failures)) {}

struct BenchmarkRunner::State {
  BenchmarkSpec spec;
  BenchmarkLayout layout;
  std::vector<Embedder> attackers;
  std::vector<Sequence> queries;           // windows, pair order
  std::vector<std::string> query_locations;
  std::vector<std::vector<MaskMap>> masks;             // configured lambda_tau
  std::vector<std::vector<MaskMap>> masks_no_temporal;  // lambda_tau = 0
  std::vector<std::vector<EmbeddingRecord>> galleries;  // [embedder], full size, nested order
  std::vector<std::vector<EmbeddingRecord>> raw_queries;  // [embedder]

  const std::vector<MaskMap>& masks_for(Mechanism m, std::size_t q) const {
    return m == Mechanism::ppedcrf_no_temporal ? masks_no_temporal[q] : masks[q];
  }

  NoiseConfig config(Mechanism m, double sigma0, std::uint64_t seed) const {
    NoiseConfig c = spec.noise;
    c.mechanism = m;
    c.sigma0 = sigma0;
    c.seed = seed;
    return c;
  }

  QueryOutcome evaluate_query(Mechanism m, double sigma0, std::uint64_t seed, std::size_t q) const {
    const Sequence& window = queries[q];
    const auto sanitized = apply_mechanism(window, masks_for(m, q), config(m, sigma0, seed));
    const std::size_t mid = window.middle_index();
    QueryOutcome out;
    for (const Embedder& e : attackers) out.embeddings.push_back(e.embed(sanitized[mid].frame));
    out.psnr = psnr(window.frames()[mid], sanitized[mid].frame);
    out.ssim = ssim(window.frames()[mid], sanitized[mid].frame);
    if (window.size() >= 2) {
      std::vector<Frame> frames;
      std::vector<double> energies;
      std::vector<MaskMap> supports;
      for (const SanitizedFrame& s : sanitized) {
        frames.push_back(s.frame);
        energies.push_back(normalized_energy(s.perturbation_energy));
        supports.push_back(s.mask_used);
      }
      out.flicker = flicker(frames);
      out.stability = perturbation_stability(energies);
      out.mask_iou = mask_iou(supports, spec.noise.mask_threshold);
    } else {
      out.mask_iou = 1.0;
    }
    return out;
  }

  std::vector<RetrievalResult> retrieval_for(std::size_t embedder,
                                             std::span<const EmbeddingRecord> query_records) const {
    std::vector<RetrievalResult> out;
    for (int size : spec.gallery_sizes) {
      const auto gallery = std::span<const EmbeddingRecord>(galleries[embedder]).first(
          static_cast<std::size_t>(size));
      out.push_back(topk_accuracy(query_records, gallery, spec.ks));
    }
    return out;
  }

  SeedOutcome aggregate(std::span<const QueryOutcome> per_query) const {
    SeedOutcome s;
    std::vector<double> psnrs, ssims, flickers, stabs, ious;
    for (const QueryOutcome& q : per_query) {
      psnrs.push_back(q.psnr);
      ssims.push_back(q.ssim);
      flickers.push_back(q.flicker);
      stabs.push_back(q.stability);
      ious.push_back(q.mask_iou);
    }
    s.quality = {mean_of(psnrs), mean_of(ssims), mean_of(flickers), mean_of(stabs), mean_of(ious)};
    for (std::size_t e = 0; e < attackers.size(); ++e) {
      std::vector<EmbeddingRecord> records;
      for (std::size_t q = 0; q < per_query.size(); ++q) {
        records.push_back({queries[q].id(), query_locations[q], per_query[q].embeddings[e],
                           attackers[e].name});
      }
      s.retrieval.push_back(retrieval_for(e, records));
    }
    return s;
  }

  BenchmarkReport run(std::span<const Mechanism> mechanisms, std::span<const double> sigmas) const;
};

namespace {

double accuracy_or_nan(const RetrievalResult& r, int k) {
  for (std::size_t i = 0; i < r.k_values.size(); ++i) {
    if (r.k_values[i] == k) return r.accuracy_at_k[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Stat point(double v) { return {v, 0.0}; }

}  // namespace

BenchmarkReport BenchmarkRunner::State::run(std::span<const Mechanism> mechanisms,
                                            std::span<const double> sigmas) const {
  const std::size_t n_q = queries.size();
  const std::size_t n_seeds = spec.seeds.size();

  // Deterministic mechanisms ignore sigma0 and the seed: evaluate once.
  struct Cell {
    std::size_t mech, sigma, seed;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> canonical;
  for (std::size_t m = 0; m < mechanisms.size(); ++m) {
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      for (std::size_t r = 0; r < n_seeds; ++r) {
        const bool stochastic = is_stochastic(mechanisms[m]);
        const Cell key = stochastic ? Cell{m, s, r} : Cell{m, 0, 0};
        const auto tag = std::make_tuple(key.mech, key.sigma, key.seed);
        if (!canonical.count(tag)) {
          canonical[tag] = cells.size();
          cells.push_back(key);
        }
      }
    }
  }

  std::vector<std::optional<QueryOutcome>> outcomes(cells.size() * n_q);
  std::vector<std::string> errors(cells.size() * n_q);
  parallel_for(outcomes.size(), spec.jobs, [&](std::size_t job) {
    const Cell& c = cells[job / n_q];
    const std::size_t q = job % n_q;
    try {
      outcomes[job] = evaluate_query(mechanisms[c.mech], sigmas[c.sigma], spec.seeds[c.seed], q);
    } catch (const std::exception& ex) {
      errors[job] = ex.what();
    }
  });

  std::vector<JobFailure> failures;
  std::vector<bool> cell_ok(cells.size(), true);
  for (std::size_t job = 0; job < outcomes.size(); ++job) {
    if (outcomes[job]) continue;
    const Cell& c = cells[job / n_q];
    cell_ok[job / n_q] = false;
    failures.push_back({std::string(to_string(mechanisms[c.mech])) + " sigma0=" +
                            std::to_string(sigmas[c.sigma]) +
                            " seed=" + std::to_string(spec.seeds[c.seed]) +
                            " query=" + queries[job % n_q].id(),
                        errors[job]});
  }

  std::vector<std::optional<SeedOutcome>> seed_outcomes(cells.size());
  parallel_for(cells.size(), spec.jobs, [&](std::size_t i) {
    if (!cell_ok[i]) return;
    std::vector<QueryOutcome> per_query;
    per_query.reserve(n_q);
    for (std::size_t q = 0; q < n_q; ++q) per_query.push_back(*outcomes[i * n_q + q]);
    seed_outcomes[i] = aggregate(per_query);
  });

  // Raw baseline, computed once.
  std::vector<std::vector<RetrievalResult>> raw(attackers.size());
  for (std::size_t e = 0; e < attackers.size(); ++e) raw[e] = retrieval_for(e, raw_queries[e]);
  QualityReport raw_quality;
  {
    std::vector<QueryOutcome> per_query;
    for (std::size_t q = 0; q < n_q; ++q) {
      per_query.push_back(evaluate_query(Mechanism::identity, 0.0, spec.seeds.front(), q));
    }
    raw_quality = aggregate(per_query).quality;
  }

  BenchmarkReport report;
  auto fill_quality = [](ResultRow& row, const QualityReport& q) {
    row.psnr_db = point(q.psnr_db);
    row.ssim = point(q.ssim);
    row.flicker = point(q.flicker);
    row.pert_stability = point(q.perturbation_stability);
    row.mask_iou = point(q.mask_iou);
  };

  for (std::size_t e = 0; e < attackers.size(); ++e) {
    for (std::size_t g = 0; g < spec.gallery_sizes.size(); ++g) {
      ResultRow row;
      row.mechanism = "raw";
      row.embedder = attackers[e].name;
      row.gallery_size = spec.gallery_sizes[g];
      row.sigma0 = 0.0;
      row.top1 = point(accuracy_or_nan(raw[e][g], 1));
      row.top5 = point(accuracy_or_nan(raw[e][g], 5));
      row.top10 = point(accuracy_or_nan(raw[e][g], 10));
      fill_quality(row, raw_quality);
      for (std::uint64_t seed : spec.seeds) {
        row.seed = std::to_string(seed);
        report.per_seed.push_back(row);
      }
      row.seed = "avg";
      report.summary.push_back(row);
    }
  }

  for (std::size_t m = 0; m < mechanisms.size(); ++m) {
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      const bool stochastic = is_stochastic(mechanisms[m]);
      std::vector<const SeedOutcome*> per_seed(n_seeds, nullptr);
      bool complete = true;
      for (std::size_t r = 0; r < n_seeds; ++r) {
        const auto tag = stochastic ? std::make_tuple(m, s, r) : std::make_tuple(m, std::size_t{0}, std::size_t{0});
        const auto& so = seed_outcomes[canonical.at(tag)];
        if (!so) complete = false;
        per_seed[r] = so ? &*so : nullptr;
      }
      if (!complete) continue;
      for (std::size_t e = 0; e < attackers.size(); ++e) {
        for (std::size_t g = 0; g < spec.gallery_sizes.size(); ++g) {
          const double raw_top1 = accuracy_or_nan(raw[e][g], 1);
          std::vector<double> t1, t5, t10, ps, ss, fl, st, io;
          ResultRow row;
          row.mechanism = std::string(to_string(mechanisms[m]));
          row.embedder = attackers[e].name;
          row.gallery_size = spec.gallery_sizes[g];
          row.sigma0 = sigmas[s];
          for (std::size_t r = 0; r < n_seeds; ++r) {
            const SeedOutcome& so = *per_seed[r];
            row.seed = std::to_string(spec.seeds[r]);
            row.top1 = point(accuracy_or_nan(so.retrieval[e][g], 1));
            row.top5 = point(accuracy_or_nan(so.retrieval[e][g], 5));
            row.top10 = point(accuracy_or_nan(so.retrieval[e][g], 10));
            fill_quality(row, so.quality);
            row.delta_vs_raw = row.top1.mean - raw_top1;
            report.per_seed.push_back(row);
            t1.push_back(row.top1.mean);
            t5.push_back(row.top5.mean);
            t10.push_back(row.top10.mean);
            ps.push_back(so.quality.psnr_db);
            ss.push_back(so.quality.ssim);
            fl.push_back(so.quality.flicker);
            st.push_back(so.quality.perturbation_stability);
            io.push_back(so.quality.mask_iou);
          }
          row.seed = "avg";
          row.top1 = summarize(t1);
          row.top5 = summarize(t5);
          row.top10 = summarize(t10);
          row.psnr_db = summarize(ps);
          row.ssim = summarize(ss);
          row.flicker = summarize(fl);
          row.pert_stability = summarize(st);
          row.mask_iou = summarize(io);
          row.delta_vs_raw = row.top1.mean - raw_top1;
          report.summary.push_back(row);
        }
      }
    }
  }

  if (!failures.empty()) throw PartialBenchmarkError(std::move(report), std::move(failures));
  return report;
}

BenchmarkRunner::BenchmarkRunner(BenchmarkSpec spec, std::vector<Sequence> candidates)
    : state_(std::make_unique<State>()) {
  spec.validate();
  State& st = *state_;
  st.spec = std::move(spec);
  const BenchmarkSpec& sp = st.spec;

  for (const Sequence& s : candidates) {
    require(s.width() == sp.resolution.width && s.height() == sp.resolution.height,
            ErrorCode::dimension_mismatch,
            "candidate '" + s.id() + "' is not at the working resolution");
  }
  const int n_distractors = sp.distractor_count();
  require(candidates.size() >= static_cast<std::size_t>(2 * sp.n_pairs + n_distractors),
          ErrorCode::invalid_argument,
          "insufficient sequences: need " + std::to_string(2 * sp.n_pairs + n_distractors) +
              ", have " + std::to_string(candidates.size()));

  std::vector<int> prefixes;
  for (int size : sp.gallery_sizes) {
    if (size > sp.n_pairs) prefixes.push_back(size - sp.n_pairs);
  }
  st.layout = build_layout(candidates, builtin_embedder(sp.anchor_embedder), sp.n_pairs,
                           n_distractors, prefixes);

  std::map<std::string, const Sequence*> by_id;
  for (const Sequence& s : candidates) by_id[s.id()] = &s;

  for (const std::string& name : sp.attack_embedders) st.attackers.push_back(builtin_embedder(name));

  const UnarySource unary = heuristic_unary(sp.noise.unary);
  DcrfParams no_temporal = sp.noise.dcrf;
  no_temporal.lambda_tau = 0.0;
  for (const ScenePair& p : st.layout.pairs) {
    st.queries.push_back(by_id.at(p.query_id)->centered_window(static_cast<std::size_t>(sp.context_frames)));
    st.query_locations.push_back(p.gallery_id);
  }
  st.masks.resize(st.queries.size());
  st.masks_no_temporal.resize(st.queries.size());
  parallel_for(st.queries.size(), sp.jobs, [&](std::size_t q) {
    st.masks[q] = refine_sequence_masks(st.queries[q], unary, sp.noise.dcrf);
    st.masks_no_temporal[q] = sp.noise.dcrf.lambda_tau == 0.0
                                  ? st.masks[q]
                                  : refine_sequence_masks(st.queries[q], unary, no_temporal);
  });

  st.galleries.resize(st.attackers.size());
  st.raw_queries.resize(st.attackers.size());
  for (std::size_t e = 0; e < st.attackers.size(); ++e) {
    const Embedder& emb = st.attackers[e];
    for (const ScenePair& p : st.layout.pairs) {
      st.galleries[e].push_back({p.gallery_id, p.gallery_id, emb.embed(by_id.at(p.gallery_id)->middle()), emb.name});
    }
    for (const Distractor& d : st.layout.distractors) {
      st.galleries[e].push_back({d.id, d.id, emb.embed(by_id.at(d.id)->middle()), emb.name});
    }
    for (std::size_t q = 0; q < st.queries.size(); ++q) {
      st.raw_queries[e].push_back({st.queries[q].id(), st.query_locations[q],
                                   emb.embed(st.queries[q].middle()), emb.name});
    }
  }
}

BenchmarkRunner::~BenchmarkRunner() = default;
BenchmarkRunner::BenchmarkRunner(BenchmarkRunner&&) noexcept = default;
BenchmarkRunner& BenchmarkRunner::operator=(BenchmarkRunner&&) noexcept = default;

const BenchmarkSpec& BenchmarkRunner::spec() const noexcept { return state_->spec; }
const BenchmarkLayout& BenchmarkRunner::layout() const noexcept { return state_->layout; }
const std::vector<Sequence>& BenchmarkRunner::queries() const noexcept { return state_->queries; }

BenchmarkReport BenchmarkRunner::run() const {
  return state_->run(state_->spec.mechanisms, state_->spec.sigma_levels);
}

std::vector<FrontierRow> BenchmarkRunner::frontier(std::span<const Mechanism> mechanisms,
                                                   std::span<const double> sigma_levels) const {
  require(sigma_levels.size() >= 2, ErrorCode::invalid_argument,
          "a frontier needs at least two sigma levels");
  const BenchmarkReport report = state_->run(mechanisms, sigma_levels);
  const int gallery = state_->spec.gallery_sizes.back();
  std::vector<FrontierRow> rows;
  for (const ResultRow& r : report.summary) {
    if (r.mechanism == "raw" || r.gallery_size != gallery) continue;
    rows.push_back({r.mechanism, r.embedder, r.gallery_size, r.sigma0, r.top1, r.psnr_db, r.ssim});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const FrontierRow& a, const FrontierRow& b) { return a.sigma0 < b.sigma0; });
  return rows;
}

double BenchmarkRunner::mean_psnr(Mechanism mechanism, double sigma0) const {
  const State& st = *state_;
  const std::size_t n_q = st.queries.size();
  const std::size_t n_s = st.spec.seeds.size();
  std::vector<double> values(n_q * n_s);
  parallel_for(values.size(), st.spec.jobs, [&](std::size_t job) {
    const std::size_t r = job / n_q;
    const std::size_t q = job % n_q;
    const Sequence& window = st.queries[q];
    const std::size_t mid = window.middle_index();
    const SanitizedFrame out = apply_mechanism_frame(window, mid, st.masks_for(mechanism, q),
                                                     st.config(mechanism, sigma0, st.spec.seeds[r]));
    values[job] = psnr(window.frames()[mid], out.frame);
  });
  std::vector<double> per_seed;
  for (std::size_t r = 0; r < n_s; ++r) {
    per_seed.push_back(mean_of(std::span<const double>(values).subspan(r * n_q, n_q)));
  }
  return mean_of(per_seed);
}

MatchedPoint BenchmarkRunner::matched_operating_point(double target_psnr_db, Mechanism mechanism,
                                                      double sigma_max, double tolerance_db,
                                                      int max_iterations) const {
  require(std::isfinite(target_psnr_db), ErrorCode::unreachable,
          "unreachable target: PSNR target must be finite");
  require(sigma_max > 0.0 && tolerance_db > 0.0 && max_iterations >= 1,
          ErrorCode::invalid_argument, "invalid bisection settings");
  require(is_stochastic(mechanism) && mechanism != Mechanism::identity,
          ErrorCode::invalid_argument, "matched operating point needs a noise mechanism");
  MatchedPoint result;
  result.mechanism = mechanism;
  result.target_psnr_db = target_psnr_db;

  const double at_max = mean_psnr(mechanism, sigma_max);
  if (std::abs(at_max - target_psnr_db) <= tolerance_db) {
    result.sigma0 = sigma_max;
    result.achieved_psnr_db = at_max;
    result.converged = true;
    return result;
  }
  require(at_max < target_psnr_db, ErrorCode::unreachable,
          "unreachable target: PSNR at sigma0=" + std::to_string(sigma_max) + " is " +
              std::to_string(at_max) + " dB, above the target");

  double lo = 0.0;
  double hi = sigma_max;
  for (int it = 1; it <= max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = mean_psnr(mechanism, mid);
    result.sigma0 = mid;
    result.achieved_psnr_db = p;
    result.iterations = it;
    if (std::abs(p - target_psnr_db) <= tolerance_db) {
      result.converged = true;
      return result;
    }
    if (p > target_psnr_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return result;
}

std::vector<SweepRow> BenchmarkRunner::baseline_param_sweep(std::span<const int> blur_kernels,
                                                            std::span<const int> mosaic_blocks) const {
  require(!blur_kernels.empty() || !mosaic_blocks.empty(), ErrorCode::invalid_argument,
          "baseline sweep needs at least one parameter");
  const State& st = *state_;
  struct Setting {
    Mechanism mechanism;
    int parameter;
  };
  std::vector<Setting> settings;
  for (int k : blur_kernels) settings.push_back({Mechanism::mask_blur, k});
  for (int b : mosaic_blocks) settings.push_back({Mechanism::mask_mosaic, b});
  for (const Setting& s : settings) {
    NoiseConfig probe = st.spec.noise;
    if (s.mechanism == Mechanism::mask_blur) probe.blur_kernel = s.parameter;
    else probe.mosaic_block = s.parameter;
    probe.validate();
  }

  const std::size_t n_q = st.queries.size();
  struct Outcome {
    std::vector<Embedding> embeddings;
    double psnr = 0.0;
    double ssim = 0.0;
  };
  std::vector<Outcome> outcomes(settings.size() * n_q);
  parallel_for(outcomes.size(), st.spec.jobs, [&](std::size_t job) {
    const Setting& s = settings[job / n_q];
    const std::size_t q = job % n_q;
    NoiseConfig cfg = st.config(s.mechanism, 0.0, st.spec.seeds.front());
    if (s.mechanism == Mechanism::mask_blur) cfg.blur_kernel = s.parameter;
    else cfg.mosaic_block = s.parameter;
    const Sequence& window = st.queries[q];
    const std::size_t mid = window.middle_index();
    const SanitizedFrame out = apply_mechanism_frame(window, mid, st.masks_for(s.mechanism, q), cfg);
    Outcome& o = outcomes[job];
    for (const Embedder& e : st.attackers) o.embeddings.push_back(e.embed(out.frame));
    o.psnr = psnr(window.frames()[mid], out.frame);
    o.ssim = ssim(window.frames()[mid], out.frame);
  });

  const int gallery = st.spec.gallery_sizes.back();
  const std::size_t g_index = st.spec.gallery_sizes.size() - 1;
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    std::vector<double> psnrs, ssims;
    for (std::size_t q = 0; q < n_q; ++q) {
      psnrs.push_back(outcomes[i * n_q + q].psnr);
      ssims.push_back(outcomes[i * n_q + q].ssim);
    }
    for (std::size_t e = 0; e < st.attackers.size(); ++e) {
      std::vector<EmbeddingRecord> records;
      for (std::size_t q = 0; q < n_q; ++q) {
        records.push_back({st.queries[q].id(), st.query_locations[q],
                           outcomes[i * n_q + q].embeddings[e], st.attackers[e].name});
      }
      const auto results = st.retrieval_for(e, records);
      rows.push_back({std::string(to_string(settings[i].mechanism)), settings[i].parameter,
                      st.attackers[e].name, gallery, accuracy_or_nan(results[g_index], 1),
                      mean_of(psnrs), mean_of(ssims)});
    }
  }
  return rows;
}

std::vector<Sequence> load_candidates(const std::filesystem::path& root, Resolution resolution) {
  const auto ids = discover_clips(root);
  require(!ids.empty(), ErrorCode::empty_input, "no clips found under '" + root.string() + "'");
  std::vector<Sequence> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) out.push_back(resize_sequence(load_sequence(root, id), resolution));
  return out;
}

}  // namespace ppedcrf
