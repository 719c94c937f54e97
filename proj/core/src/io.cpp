#include "hciz/io.hpp"

#include <fstream>
#include <string>

#include "hciz/errors.hpp"

namespace hciz::io {

namespace {

const Json& unwrap(const Json& j, const char* key) {
  if (j.is_object() && j.contains(key) && j.at(key).is_object()) return j.at(key);
  return j;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw DomainError(std::string("missing numeric field \"") + key + "\"");
  return j.at(key).get<double>();
}

std::vector<double> numbers(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw DomainError(std::string("missing array field \"") + key + "\"");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw DomainError(std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json measure_to_json(const SpectralMeasure& m) {
  switch (m.kind()) {
    case SpectralMeasure::Kind::atomic:
      return {{"kind", "atomic"},
              {"points", std::vector<double>(m.points().begin(), m.points().end())},
              {"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
    case SpectralMeasure::Kind::uniform:
      return {{"kind", "uniform"}, {"a", m.lo()}, {"b", m.hi()}};
    case SpectralMeasure::Kind::semicircle:
      return {{"kind", "semicircle"}, {"center", m.center()}, {"radius", m.radius()}};
  }
  return {};
}

SpectralMeasure measure_from_json(const Json& raw) {
  const Json& j = unwrap(raw, "measure");
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw DomainError("measure JSON needs a string \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "atomic") return SpectralMeasure::atomic(numbers(j, "points"), numbers(j, "weights"));
  if (kind == "uniform") return SpectralMeasure::uniform(number(j, "a"), number(j, "b"));
  if (kind == "semicircle")
    return SpectralMeasure::semicircle(number(j, "center"), number(j, "radius"));
  throw DomainError("unknown measure kind \"" + kind + "\"");
}

Json spectrum_to_json(const Spectrum& s) {
  return {{"values", std::vector<double>(s.values().begin(), s.values().end())}};
}

Spectrum spectrum_from_json(const Json& raw) {
  const Json& j = unwrap(raw, "spectrum");
  if (!j.is_object()) throw DomainError("spectrum JSON must be an object");
  return Spectrum(numbers(j, "values"));
}

Json log_scalar_to_json(const LogScalar& x) {
  Json out{{"sign", x.sign()}};
  out["log_abs"] = x.is_zero() ? Json(nullptr) : Json(x.log_abs());
  return out;
}

Json mc_estimate_to_json(const McEstimate& e) {
  return {{"log_mean", e.log_mean.log_abs()},
          {"sign", e.log_mean.sign()},
          {"stderr", e.stderr_log},
          {"samples", e.n_samples},
          {"seed", e.seed},
          {"chunks", e.chunks}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

SpectralMeasure load_measure(const std::filesystem::path& path) {
  return measure_from_json(read_json_file(path));
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  return spectrum_from_json(read_json_file(path));
}

}  // namespace hciz::io
