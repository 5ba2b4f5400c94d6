#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace efstein {

/// PASS/FAIL is reserved for inequalities whose constants are explicit;
/// REPORT tracks residuals whose constants are only known up to O_k(1).
enum class CheckStatus { Pass, Report, Fail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Report: return "REPORT";
        case CheckStatus::Fail: return "FAIL";
    }
    return "?";
}

/// One record per inequality check.
struct CheckRecord {
    std::string check_id;   ///< e.g. "C9-approx-parseval"
    std::string instance;   ///< stable encoding of the generated instance + parameters
    double lhs = 0.0;
    double rhs_explicit = 0.0;
    double residual = 0.0;  ///< lhs - rhs_explicit
    std::optional<double> residual_ratio;  ///< residual / epsilon-scale, REPORT class only
    CheckStatus status = CheckStatus::Pass;
    double runtime_ms = 0.0;
    std::string note;
};

/// Slack for explicit-constant checks: absolute 1e-9 scaled by the
/// magnitude of both sides.
inline double hard_slack(double lhs, double rhs, double tol = 1e-9) {
    return tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

inline bool hard_holds(double lhs, double rhs, double tol = 1e-9) {
    return lhs <= rhs + hard_slack(lhs, rhs, tol);
}

/// Record for an explicit-constant inequality lhs <= rhs.
inline CheckRecord hard_record(std::string id, std::string instance, double lhs, double rhs,
                               double tol = 1e-9) {
    CheckRecord r;
    r.check_id = std::move(id);
    r.instance = std::move(instance);
    r.lhs = lhs;
    r.rhs_explicit = rhs;
    r.residual = lhs - rhs;
    r.status = hard_holds(lhs, rhs, tol) ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

/// Record for a main-term inequality with an O_k residual: hard when the
/// epsilon-scale vanishes, REPORT with a residual ratio otherwise.
inline CheckRecord residual_record(std::string id, std::string instance, double lhs,
                                   double rhs_main, double eps_scale, double tol = 1e-9) {
    CheckRecord r;
    r.check_id = std::move(id);
    r.instance = std::move(instance);
    r.lhs = lhs;
    r.rhs_explicit = rhs_main;
    r.residual = lhs - rhs_main;
    if (eps_scale > 0.0) {
        r.residual_ratio = r.residual / eps_scale;
        r.status = CheckStatus::Report;
    } else {
        r.status = hard_holds(lhs, rhs_main, tol) ? CheckStatus::Pass : CheckStatus::Fail;
    }
    return r;
}

}  // namespace efstein
