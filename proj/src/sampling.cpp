#include "infogeo/sampling.hpp"

#include <cmath>

namespace infogeo {

GridFunction random_smooth_field(const TensorGrid& grid, std::mt19937_64& rng,
                                 double amplitude) {
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  std::uniform_real_distribution<double> freq(0.2, 1.8);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  struct Mode {
    double c, w, ph;
    int axis;
  };
  std::vector<Mode> modes;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    for (int j = 0; j < 3; ++j) modes.push_back({coef(rng), freq(rng), phase(rng), axis});
  }
  const double lin = coef(rng);
  const double cross = grid.dim() == 2 ? coef(rng) : 0.0;
  const double wc = freq(rng);
  return grid.sample([&](const Point& x) {
    double v = 0.0;
    for (const auto& m : modes) v += m.c * std::sin(m.w * x[m.axis] + m.ph);
    v += lin * x[0] * std::exp(-x[0] * x[0] / 8.0);
    if (x.size() == 2) v += cross * std::sin(wc * x[0]) * std::cos(wc * x[1]);
    return v;
  });
}

GridFunction random_centred_field(const WeightedGrid& wg, std::mt19937_64& rng,
                                  double amplitude) {
  GridFunction u = random_smooth_field(wg.grid(), rng, amplitude);
  return u.array() - wg.integrate(u);
}

}  // namespace infogeo
