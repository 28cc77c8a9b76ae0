#include "ppedcrf/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "ppedcrf/rng.hpp"

namespace ppedcrf {

namespace {

using Rgb = std::array<double, 3>;

struct Building {
  double x0, x1, top;
  Rgb wall;
  Rgb window;
  double pitch_x, pitch_y, win_w, win_h;
  bool windows;
};

struct Pole {
  double x, width, top;
  Rgb color;
};

struct Scene {
  Rgb sky_top, sky_horizon, ground_near, ground_far;
  double horizon;
  std::vector<Building> buildings;
  std::vector<Pole> poles;
  std::uint64_t texture_seed;
  double texture_amplitude;
  double texture_cell;
  Rgb object_color;
  double object_y, object_w, object_h, object_x0, object_speed;
};

struct View {
  double dx, dy, gain, offset, drift, noise_sigma;
  std::uint64_t noise_seed;
};

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Rgb random_color(Rng& rng, double lo = 45.0, double hi = 210.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

Building random_building(Rng& rng, double x0, double x1, const Scene& s, Resolution res) {
  Building b;
  b.x0 = x0;
  b.x1 = x1;
  b.top = uniform(rng, 0.08, 0.85) * s.horizon;
  b.wall = random_color(rng);
  b.window = random_color(rng, 40.0, 215.0);
  b.pitch_x = uniform(rng, 0.025, 0.06) * res.width;
  b.pitch_y = uniform(rng, 0.05, 0.1) * res.height;
  b.win_w = b.pitch_x * uniform(rng, 0.35, 0.7);
  b.win_h = b.pitch_y * uniform(rng, 0.35, 0.7);
  b.windows = rng.uniform() < 0.8;
  return b;
}

Scene random_scene(Rng& rng, Resolution res) {
  Scene s;
  s.sky_top = random_color(rng, 120.0, 210.0);
  s.sky_horizon = random_color(rng, 120.0, 210.0);
  s.ground_near = random_color(rng, 50.0, 130.0);
  s.ground_far = random_color(rng, 60.0, 150.0);
  s.horizon = uniform(rng, 0.5, 0.7) * res.height;
  // Facades tile a band slightly wider than the frame so camera offsets
  // never expose an undefined region.
  double x = -0.1 * res.width;
  while (x < 1.1 * res.width) {
    const double w = uniform(rng, 0.08, 0.22) * res.width;
    s.buildings.push_back(random_building(rng, x, x + w, s, res));
    x += w + (rng.uniform() < 0.3 ? uniform(rng, 0.0, 0.05) * res.width : 0.0);
  }
  const int poles = static_cast<int>(uniform(rng, 1.0, 4.0));
  for (int i = 0; i < poles; ++i) {
    s.poles.push_back({uniform(rng, 0.0, 1.0) * res.width, uniform(rng, 2.0, 5.0),
                       uniform(rng, 0.2, 0.6) * s.horizon, random_color(rng, 40.0, 110.0)});
  }
  s.texture_seed = rng.next_u64();
  s.texture_amplitude = uniform(rng, 6.0, 14.0);
  s.texture_cell = uniform(rng, 6.0, 14.0);
  s.object_color = random_color(rng, 40.0, 100.0);
  s.object_h = uniform(rng, 0.08, 0.14) * res.height;
  s.object_w = uniform(rng, 0.1, 0.18) * res.width;
  s.object_y = s.horizon + uniform(rng, 0.05, 0.2) * (res.height - s.horizon);
  s.object_x0 = uniform(rng, 0.1, 0.6) * res.width;
  s.object_speed = uniform(rng, -0.02, 0.02) * res.width;
  return s;
}

// Same layout, but a share of the facades is repainted and the texture is
// re-seeded.
Scene repaint(const Scene& base, Rng& rng, Resolution res) {
  Scene s = base;
  for (Building& b : s.buildings) {
    if (rng.uniform() < 0.45) {
      Building fresh = random_building(rng, b.x0, b.x1, s, res);
      if (rng.uniform() < 0.5) fresh.top = b.top;
      b = fresh;
    }
  }
  s.sky_horizon = lerp(s.sky_horizon, random_color(rng, 120.0, 210.0), 0.5);
  s.texture_seed = rng.next_u64();
  s.object_x0 = uniform(rng, 0.1, 0.6) * res.width;
  return s;
}

double lattice(std::uint64_t seed, long long ix, long long iy) {
  const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL +
                                             static_cast<std::uint64_t>(iy)));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Value noise along one image row: lattice values for the two bracketing
// lattice rows are hashed once per lattice column.
class NoiseRow {
 public:
  NoiseRow(std::uint64_t seed, double cell, double wy, double wx_min, double wx_max)
      : cell_(cell) {
    const double gy = wy / cell;
    const double fy = std::floor(gy);
    ty_ = smoothstep(gy - fy);
    const auto iy = static_cast<long long>(fy);
    ix0_ = static_cast<long long>(std::floor(wx_min / cell));
    const auto ix1 = static_cast<long long>(std::floor(wx_max / cell)) + 1;
    for (long long ix = ix0_; ix <= ix1; ++ix) {
      top_.push_back(lattice(seed, ix, iy));
      bottom_.push_back(lattice(seed, ix, iy + 1));
    }
  }

  double at(double wx) const {
    const double gx = wx / cell_;
    const double fx = std::floor(gx);
    const auto i = static_cast<std::size_t>(static_cast<long long>(fx) - ix0_);
    const double tx = smoothstep(gx - fx);
    const double upper = top_[i] + (top_[i + 1] - top_[i]) * tx;
    const double lower = bottom_[i] + (bottom_[i + 1] - bottom_[i]) * tx;
    return upper + (lower - upper) * ty_;
  }

 private:
  double cell_;
  double ty_ = 0.0;
  long long ix0_ = 0;
  std::vector<double> top_, bottom_;
};

// Facades tile without overlap, so each world column hits at most one
// building; resolving it once per column keeps the per-pixel work small.
struct Column {
  const Building* building = nullptr;
  bool window_column = false;
  const Pole* pole = nullptr;
};

Column resolve_column(const Scene& s, double wx) {
  Column c;
  for (const Building& b : s.buildings) {
    if (wx >= b.x0 && wx < b.x1) c.building = &b;
  }
  if (c.building && c.building->windows) {
    const Building& b = *c.building;
    const double lx = std::fmod(wx - b.x0, b.pitch_x);
    c.window_column = lx > (b.pitch_x - b.win_w) * 0.5 && lx < (b.pitch_x + b.win_w) * 0.5;
  }
  for (const Pole& p : s.poles) {
    if (wx >= p.x && wx < p.x + p.width) c.pole = &p;
  }
  return c;
}

Rgb shade(const Scene& s, const Column& col, const NoiseRow& noise, double wx, double wy) {
  Rgb color;
  if (wy < s.horizon) {
    color = lerp(s.sky_top, s.sky_horizon, std::clamp(wy / s.horizon, 0.0, 1.0));
  } else {
    color = s.ground_far;
  }
  if (const Building* b = col.building; b && wy >= b->top && wy < s.horizon) {
    color = b->wall;
    if (col.window_column) {
      const double ly = std::fmod(wy - b->top, b->pitch_y);
      if (ly > (b->pitch_y - b->win_h) * 0.5 && ly < (b->pitch_y + b->win_h) * 0.5 &&
          wy < s.horizon - b->pitch_y * 0.5) {
        color = b->window;
      }
    }
  }
  if (col.pole && wy >= col.pole->top && wy < s.horizon + 4.0) color = col.pole->color;
  if (wy >= s.horizon && !(col.building && wy < s.horizon)) {
    const double t = std::clamp((wy - s.horizon) / 40.0, 0.0, 1.0);
    color = lerp(s.ground_far, s.ground_near, t);
  }
  const double tex = s.texture_amplitude * noise.at(wx);
  return {color[0] + tex, color[1] + tex * 0.9, color[2] + tex * 0.8};
}

Frame render(const Scene& s, const View& v, int t, Resolution res) {
  Frame out(res.width, res.height);
  Rng sensor(mix64(v.noise_seed + static_cast<std::uint64_t>(t)));
  const double cam_x = v.dx + v.drift * t;
  const double obj_x = s.object_x0 + s.object_speed * t;
  std::vector<Column> columns;
  columns.reserve(static_cast<std::size_t>(res.width));
  for (int x = 0; x < res.width; ++x) columns.push_back(resolve_column(s, x + 0.5 + cam_x));
  for (int y = 0; y < res.height; ++y) {
    const NoiseRow noise(s.texture_seed, s.texture_cell, y + 0.5 + v.dy, 0.5 + cam_x,
                         res.width - 0.5 + cam_x);
    for (int x = 0; x < res.width; ++x) {
      Rgb c = shade(s, columns[static_cast<std::size_t>(x)], noise, x + 0.5 + cam_x,
                    y + 0.5 + v.dy);
      if (x >= obj_x && x < obj_x + s.object_w && y >= s.object_y && y < s.object_y + s.object_h) {
        c = s.object_color;
      }
      const double noise = v.noise_sigma > 0.0 ? v.noise_sigma * sensor.normal() : 0.0;
      for (int ch = 0; ch < 3; ++ch) {
        const double value = v.gain * c[static_cast<std::size_t>(ch)] + v.offset + noise;
        out.at(x, y, ch) = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0) + 0.5);
      }
    }
  }
  return out;
}

View random_view(Rng& rng, Resolution res, double jitter) {
  const double scale = res.width / 320.0;
  return {uniform(rng, -jitter, jitter) * scale,
          uniform(rng, -jitter * 0.5, jitter * 0.5) * scale,
          uniform(rng, 0.95, 1.05),
          uniform(rng, -8.0, 8.0),
          uniform(rng, -0.6, 0.6) * scale,
          2.0,
          rng.next_u64()};
}

Sequence render_sequence(const Scene& s, const View& v, int frames, Resolution res) {
  std::vector<Frame> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) out.push_back(render(s, v, t, res));
  return Sequence("pending", std::move(out));
}

}  // namespace

std::vector<Sequence> generate_synthetic_benchmark(const SyntheticSpec& spec) {
  require(spec.locations >= 1 && spec.siblings_per_location >= 0 && spec.unrelated >= 0,
          ErrorCode::invalid_argument, "invalid synthetic benchmark counts");
  require(spec.frames >= 1, ErrorCode::invalid_argument, "synthetic clips need >= 1 frame");
  Rng rng(spec.seed);
  std::vector<Sequence> clips;
  for (int i = 0; i < spec.locations; ++i) {
    const Scene scene = random_scene(rng, spec.resolution);
    for (int v = 0; v < 2; ++v) {
      clips.push_back(render_sequence(scene, random_view(rng, spec.resolution, 4.0), spec.frames,
                                      spec.resolution));
    }
    for (int j = 0; j < spec.siblings_per_location; ++j) {
      const Scene sibling = repaint(scene, rng, spec.resolution);
      clips.push_back(render_sequence(sibling, random_view(rng, spec.resolution, 8.0),
                                      spec.frames, spec.resolution));
    }
  }
  for (int i = 0; i < spec.unrelated; ++i) {
    const Scene scene = random_scene(rng, spec.resolution);
    clips.push_back(render_sequence(scene, random_view(rng, spec.resolution, 4.0), spec.frames,
                                    spec.resolution));
  }
  for (std::size_t i = clips.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(clips[i - 1], clips[j]);
  }
  std::vector<Sequence> named;
  named.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "clip%03zu", i);
    named.emplace_back(id, clips[i].frames());
  }
  return named;
}

Frame synthetic_frame(std::uint64_t seed, Resolution resolution) {
  Rng rng(seed);
  const Scene scene = random_scene(rng, resolution);
  const View still{0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0};
  return render(scene, still, 0, resolution);
}

}  // namespace ppedcrf
