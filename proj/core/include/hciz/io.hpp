#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "hciz/hciz_mc.hpp"
#include "hciz/log_scalar.hpp"
#include "hciz/measures.hpp"

namespace hciz::io {

using Json = nlohmann::json;

// Measure schema:
//   {"kind":"atomic","points":[...],"weights":[...]}
//   {"kind":"uniform","a":0.0,"b":1.0}
//   {"kind":"semicircle","center":0.0,"radius":2.0}
// Spectrum schema: {"values":[...]}
// Readers also accept either object wrapped as {"measure": ...} / {"spectrum": ...}.

Json measure_to_json(const SpectralMeasure& m);
SpectralMeasure measure_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);

/// {"sign": s, "log_abs": x}; log_abs is null for zero.
Json log_scalar_to_json(const LogScalar& x);

Json mc_estimate_to_json(const McEstimate& e);

Json read_json_file(const std::filesystem::path& path);
SpectralMeasure load_measure(const std::filesystem::path& path);
Spectrum load_spectrum(const std::filesystem::path& path);

}  // namespace hciz::io
