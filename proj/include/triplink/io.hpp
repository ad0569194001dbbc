#pragma once

#include <string>
#include <vector>

#include "triplink/curves.hpp"

namespace triplink {

// Link file format: {"components":[{"coeffs_x":[[re,im],...], "coeffs_y":...,
// "coeffs_z":..., "orientation":1} x3]} with modes ordered -M..M, or
// {"polyline":[[x,y,z],...]} per component (DFT-fitted, automatic degree).
Link3 load_link3(const std::string& path);
void save_link3(const Link3& link, const std::string& path);

ParametricCurve curve_from_json_text(const std::string& text);

struct TubeSpec {
  ParametricCurve core;
  double radius;
  double flux;
};

// {"tubes":[{"core":<component object>, "radius":a, "flux":phi} x3]}
std::vector<TubeSpec> load_tubes(const std::string& path);
void save_tubes(const std::vector<TubeSpec>& tubes, const std::string& path);

}  // namespace triplink
