#include "twistor/sampling.hpp"

#include <cmath>

namespace twistor {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::vector<Vec> halton_points(const Chart& chart, int count, double margin,
                               std::uint64_t seed) {
  if (chart.dim > static_cast<int>(std::size(kPrimes)))
    throw ConfigError("halton_points: dimension too large");
  std::vector<Vec> pts;
  pts.reserve(count);
  const std::uint64_t offset = 13 + (seed % 8191);
  for (int k = 0; k < count; ++k) {
    Vec p(chart.dim);
    for (int a = 0; a < chart.dim; ++a) {
      const double lo = chart.bounds[a][0] + margin;
      const double hi = chart.bounds[a][1] - margin;
      p[a] = lo + (hi - lo) * halton(offset + k, kPrimes[a]);
    }
    pts.push_back(p);
  }
  return pts;
}

Vec Rng::unit_vector(int dim) {
  // Box-Muller on hand-mapped uniforms keeps the stream deterministic.
  Vec v(dim);
  for (int a = 0; a < dim; ++a) {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    v[a] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  const double n = v.norm();
  return n > 0 ? Vec(v / n) : Vec(Vec::Unit(dim, 0));
}

}  // namespace twistor
