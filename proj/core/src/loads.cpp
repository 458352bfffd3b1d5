#include "sigopt/loads.hpp"

#include <cmath>

#include "sigopt/error.hpp"

namespace sigopt {

LoadFunction disk_load() {
  LoadFunction f;
  f.name = "disk";
  f.value = [](Vec2 p) { return Vec2{0.5 * std::exp(p.x * p.x), 0.0}; };
  f.gradient = [](Vec2 p) {
    return Mat2{p.x * std::exp(p.x * p.x), 0.0, 0.0, 0.0};
  };
  return f;
}

LoadFunction zero_load() {
  LoadFunction f;
  f.name = "zero";
  f.value = [](Vec2) { return Vec2{}; };
  f.gradient = [](Vec2) { return Mat2{}; };
  return f;
}

LoadFunction constant_load(Vec2 c) {
  LoadFunction f;
  f.name = "constant";
  f.value = [c](Vec2) { return c; };
  f.gradient = [](Vec2) { return Mat2{}; };
  return f;
}

LoadFunction load_by_name(const std::string& name) {
  if (name == "disk") return disk_load();
  if (name == "zero") return zero_load();
  if (name == "unit_x") {
    LoadFunction f = constant_load({1.0, 0.0});
    f.name = "unit_x";
    return f;
  }
  if (name == "unit_y") {
    LoadFunction f = constant_load({0.0, 1.0});
    f.name = "unit_y";
    return f;
  }
  throw Error(ErrorCode::UnknownLabel, "unknown load \"" + name + "\"");
}

}  // namespace sigopt
