#ifndef SIGOPT_LOADS_HPP
#define SIGOPT_LOADS_HPP

#include <functional>
#include <string>

#include "sigopt/vec2.hpp"

namespace sigopt {

/// Analytic volume load with its gradient, (grad f)_{ij} = df_i/dx_j.
struct LoadFunction {
  std::string name;
  std::function<Vec2(Vec2)> value;
  std::function<Mat2(Vec2)> gradient;
};

/// The rightward pressure load (exp(x^2)/2, 0). The H^1 cut-off only matters
/// outside any bounded computational domain and is identically one here.
LoadFunction disk_load();

LoadFunction zero_load();

LoadFunction constant_load(Vec2 c);

/// Looks up a load by name ("disk", "zero", "unit_x", "unit_y").
LoadFunction load_by_name(const std::string& name);

}  // namespace sigopt

#endif
