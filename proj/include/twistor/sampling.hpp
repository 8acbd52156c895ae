#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "twistor/chartfield.hpp"

namespace twistor {

// Radical-inverse (Halton) low-discrepancy sequence, one prime base per
// coordinate, offset by the seed so distinct seeds give distinct but
// reproducible point sets.
double halton(std::uint64_t index, int base);

std::vector<Vec> halton_points(const Chart& chart, int count, double margin,
                               std::uint64_t seed);

// Deterministic uniform doubles from the raw mt19937_64 stream (the
// engine is pinned by the standard; std distributions are not, so the
// mapping to [0,1) is done by hand).
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vec unit_vector(int dim);

  std::mt19937_64 engine;
};

}  // namespace twistor
