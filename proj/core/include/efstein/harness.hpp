#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "efstein/check.hpp"

namespace efstein {

/// Ceilings for O_k residual ratios, tolerance scheme and instance grids.
/// Serialized as a single JSON document; the hash pins report provenance.
struct SuiteConfig {
    int version = 1;

    double tol_exact = 1e-9;  ///< relative tolerance for exact identities
    double tol_hard = 1e-9;   ///< slack scale for explicit-constant checks

    /// Residual-ratio ceiling multipliers per REPORT-class check id; the
    /// effective ceiling on an instance with k parts is value * 2^{10 k}.
    std::map<std::string, double> ceilings;

    std::vector<double> eta_grid{0.01, 0.02, 0.05, 0.1};
    std::vector<double> gamma_grid{0.02, 0.05, 0.1};
    std::vector<double> rho_grid{0.3, 0.5, 0.8};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    int max_degree = 3;       ///< d <= min(k, max_degree)

    double sse_rho = 0.5;
    double kk_zeta = 0.01;          ///< light-label mass of the shadow fixtures
    double negative_delta_ref = 0.03;  ///< reference delta for negative controls
    double negative_zeta_ref = 0.9;    ///< reference conclusion ratio

    static SuiteConfig defaults();

    /// Throws if a REPORT-class check lacks a ceiling entry.
    void validate() const;

    /// Stable text form; basis of hash().
    std::string canonical_string() const;
    std::uint64_t hash() const;

    double effective_ceiling(const std::string& check_id, int k) const;
};

/// One catalog entry per verified statement family.
struct CatalogEntry {
    std::string id;
    std::string klass;  ///< "exact" | "hard" | "residual"
    std::string statement;
};

/// The full check catalog C1..C21, in order.
const std::vector<CatalogEntry>& catalog();

/// Names accepted by run_suite. "default" executes all of them.
std::vector<std::string> suite_names();

/// Executes the named suite over the configured instance grid.
/// Deterministic for a fixed config (modulo the runtime-ms field).
/// Throws UnknownSuite for unknown names.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& config,
                                   int threads = 1);

bool any_fail(const std::vector<CheckRecord>& records);

enum class ReportFormat { Jsonl, Csv, Markdown };

/// Stable column order; FAIL rows first, then canonical record order.
/// Includes the config hash and library version (CSV/markdown as comment
/// rows, JSONL per line).
void write_report(const std::vector<CheckRecord>& records, ReportFormat format,
                  std::ostream& out, const SuiteConfig* config = nullptr,
                  bool include_runtime = true);

}  // namespace efstein
