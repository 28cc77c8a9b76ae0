#pragma once

#include <cstdint>
#include <vector>

#include "ppedcrf/image.hpp"
#include "ppedcrf/imageio.hpp"

namespace ppedcrf {

/// Procedural stand-in for monitoring footage. Each location is a layered
/// street-like scene (sky/ground gradient, textured facades, windows). Two
/// views of a location share the layout with per-view camera offset,
/// exposure and sensor noise; siblings keep the layout but repaint part of
/// it, which makes them hard distractors. A small foreground object moves
/// across the frames of every clip.
struct SyntheticSpec {
  int locations = 12;
  int siblings_per_location = 3;
  int unrelated = 24;
  int frames = 7;
  Resolution resolution{};
  std::uint64_t seed = 20240601;
};

/// Clips named clip000, clip001, ... in a seed-dependent shuffled order.
std::vector<Sequence> generate_synthetic_benchmark(const SyntheticSpec& spec);

/// One static textured frame, for tests that need realistic content.
Frame synthetic_frame(std::uint64_t seed, Resolution resolution = {});

}  // namespace ppedcrf
