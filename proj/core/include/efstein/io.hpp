#pragma once

#include <filesystem>
#include <string>

#include "efstein/calculus.hpp"
#include "efstein/decomposition.hpp"
#include "efstein/generators.hpp"
#include "efstein/harness.hpp"
#include "efstein/measure.hpp"
#include "efstein/operators.hpp"

namespace efstein {

/// Complex file format:
///   { "parts": [[labels...], ...],
///     "faces": [[element index per part], ...],
///     "weights": [w, ...] }
/// Loading applies the strict weight policy (raw sum within 1e-6 of 1).
std::string complex_to_json(const WeightedComplex& mu);
ComplexPtr complex_from_json(const std::string& text);

/// Function file format:
///   { "home": [part indices], "values": [...], "complex": "<hex id>" }
/// Values are aligned to the canonical order of the named complex; the
/// "complex" field is optional on input and checked when present.
std::string fn_to_json(const Fn& f);
Fn fn_from_json(const std::string& text, const ComplexPtr& mu);

/// Certificate with the full witness list.
std::string certificate_to_json(const EpsCertificate& cert);

/// Map from subset bitmask (decimal string) to component value arrays.
std::string family_to_json(const EfronSteinFamily& family);

std::string globalness_to_json(const GlobalnessReport& report);

/// CSV rows (subset, x, influence, influence_trunc); x coordinates are
/// colon-joined element indices.
std::string influence_profile_to_csv(const InfluenceProfile& profile,
                                     const WeightedComplex& mu);

std::string genspec_to_json(const GenSpec& spec);
GenSpec genspec_from_json(const std::string& text);

std::string config_to_json(const SuiteConfig& config);
SuiteConfig config_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace efstein
