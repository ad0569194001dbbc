#include "triplink/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "triplink/errors.hpp"

namespace triplink {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

std::vector<std::complex<double>> parse_coeff_array(const json& arr) {
  std::vector<std::complex<double>> out;
  out.reserve(arr.size());
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw IoError("coefficient entries must be [re, im] pairs");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

ParametricCurve parse_component(const json& comp) {
  if (comp.contains("polyline")) {
    std::vector<Vec3> pts;
    for (const auto& p : comp["polyline"]) {
      if (!p.is_array() || p.size() != 3) throw IoError("polyline entries must be 3-vectors");
      pts.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    try {
      return ParametricCurve::from_samples(pts);
    } catch (const DomainError& e) {
      throw IoError(std::string("polyline rejected: ") + e.what());
    }
  }
  for (const char* key : {"coeffs_x", "coeffs_y", "coeffs_z"})
    if (!comp.contains(key)) throw IoError(std::string("component missing ") + key);
  ParametricCurve::Coeffs c{parse_coeff_array(comp["coeffs_x"]),
                            parse_coeff_array(comp["coeffs_y"]),
                            parse_coeff_array(comp["coeffs_z"])};
  // pad to a common odd length so mixed-degree inputs are accepted
  std::size_t len = 0;
  for (const auto& ax : c) len = std::max(len, ax.size());
  if (len % 2 == 0) throw IoError("coefficient arrays must have odd length (modes -M..M)");
  for (auto& ax : c) {
    if (ax.size() % 2 == 0) throw IoError("coefficient arrays must have odd length (modes -M..M)");
    if (ax.size() < len) {
      std::vector<std::complex<double>> grown(len, 0.0);
      const std::size_t off = (len - ax.size()) / 2;
      for (std::size_t k = 0; k < ax.size(); ++k) grown[off + k] = ax[k];
      ax = std::move(grown);
    }
  }
  int orientation = comp.value("orientation", 1);
  if (orientation != 1 && orientation != -1) throw IoError("orientation must be +1 or -1");
  try {
    ParametricCurve curve{std::move(c)};
    return orientation == 1 ? curve : curve.reversed();
  } catch (const Error& e) {
    throw IoError(std::string("invalid component: ") + e.what());
  }
}

json dump_component(const ParametricCurve& curve) {
  json comp;
  const char* keys[3] = {"coeffs_x", "coeffs_y", "coeffs_z"};
  for (int ax = 0; ax < 3; ++ax) {
    json arr = json::array();
    for (const auto& z : curve.coeffs()[ax]) arr.push_back({z.real(), z.imag()});
    comp[keys[ax]] = std::move(arr);
  }
  comp["orientation"] = 1;
  return comp;
}

}  // namespace

Link3 load_link3(const std::string& path) {
  json j = read_json_file(path);
  if (!j.contains("components") || !j["components"].is_array() || j["components"].size() != 3)
    throw IoError(path + ": expected a \"components\" array of length 3");
  std::vector<ParametricCurve> comps;
  for (const auto& cj : j["components"]) comps.push_back(parse_component(cj));
  return Link3(comps[0], comps[1], comps[2]);
}

void save_link3(const Link3& link, const std::string& path) {
  json j;
  j["components"] = json::array();
  for (int i = 0; i < 3; ++i) j["components"].push_back(dump_component(link[i]));
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

ParametricCurve curve_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("curve parse: ") + e.what());
  }
  return parse_component(j);
}

std::vector<TubeSpec> load_tubes(const std::string& path) {
  json j = read_json_file(path);
  if (!j.contains("tubes") || !j["tubes"].is_array() || j["tubes"].size() != 3)
    throw IoError(path + ": expected a \"tubes\" array of length 3");
  std::vector<TubeSpec> out;
  for (const auto& tj : j["tubes"]) {
    if (!tj.contains("core") || !tj.contains("radius") || !tj.contains("flux"))
      throw IoError(path + ": each tube needs core, radius, flux");
    double radius = tj["radius"].get<double>();
    double flux = tj["flux"].get<double>();
    if (!(radius > 0)) throw IoError(path + ": tube radius must be positive");
    out.push_back({parse_component(tj["core"]), radius, flux});
  }
  return out;
}

void save_tubes(const std::vector<TubeSpec>& tubes, const std::string& path) {
  json j;
  j["tubes"] = json::array();
  for (const auto& t : tubes) {
    json tj;
    tj["core"] = dump_component(t.core);
    tj["radius"] = t.radius;
    tj["flux"] = t.flux;
    j["tubes"].push_back(std::move(tj));
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace triplink
