#pragma once

#include <string>
#include <vector>

#include "dfcert/df_map.hpp"
#include "dfcert/jacobian.hpp"
#include "dfcert/simplex.hpp"
#include "dfcert/solver.hpp"

namespace dfcert {

enum class Stability {
    ExpStable,   // all reduced eigenvalues in (0, 1 - margin]... strictly below 1
    Unstable,    // some reduced eigenvalue > 1
    Marginal,    // spectral radius within tolerance of 1
};

enum class Verdict {
    UniqueExpStable,
    Inconsistent,   // index bookkeeping contradicts the fixed-point count
    Inconclusive,   // enumeration too weak to certify (e.g. missed starts)
};

const char* stability_name(Stability s) noexcept;
const char* verdict_name(Verdict v) noexcept;

// Spectral stability classification of one interior fixed point.
struct StabilityReport {
    SimplexPoint location;
    std::vector<double> full_spectrum;     // n eigenvalues, ascending (one ~0)
    std::vector<double> reduced_spectrum;  // n-1 eigenvalues, ascending
    double spectral_radius = 0.0;          // max reduced eigenvalue
    Stability stability = Stability::Marginal;
    int lefschetz_index = 0;               // sign det(I - dG)
};

// Corner fixed points are handled analytically: the reduced Jacobian at
// corner i has eigenvalues {(1 - gamma_i)/gamma_i, 0 x (n-2)}, and the
// dominant one exceeds 1 whenever gamma_i < 1/2, so every corner of a
// non-star topology is an unstable saddle with index sign(1 - (1-g)/g) = -1
// ... computed, not assumed, below.
struct CornerReport {
    std::size_t corner = 0;                // 0-based agent index
    std::vector<double> reduced_spectrum;  // closed form, ascending
    double spectral_radius = 0.0;
    Stability stability = Stability::Marginal;
    int lefschetz_index = 0;
};

struct LefschetzCertificate {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<StabilityReport> interior;
    std::vector<CornerReport> corners;
    int index_sum = 0;                 // over all enumerated fixed points
    int euler_characteristic = 1;      // of the simplex (contractible)
    int converged_starts = 0;
    int nonconverged_starts = 0;
    std::string detail;                // human-readable reason for the verdict
};

// Classify one interior point as a fixed point: analytic Jacobian, symmetric
// eigensolve via the similarity transform, reduced spectrum, index.
StabilityReport stability_report(const DfMap& map, const SimplexPoint& xbar,
                                 double delta = kDefaultDelta);

CornerReport corner_report(const InfluenceWeights& weights, std::size_t corner);

// Full pipeline: enumerate fixed points, classify each, check that the
// Lefschetz indices sum to the Euler characteristic, and render a verdict.
LefschetzCertificate certify(const InfluenceWeights& weights, const SolverConfig& cfg,
                             double delta = kDefaultDelta);

// Empirical contraction rate toward a known fixed point, fit on the tail of
// an orbit. Validates the orbit is actually converging to xbar.
struct RateEstimate {
    double rate = 0.0;            // fitted per-step contraction factor
    double predicted = 0.0;       // spectral radius of the reduced Jacobian
    double relative_error = 0.0;  // |rate - predicted| / predicted
    int tail_steps = 0;           // distances used in the fit
};

RateEstimate rate_estimate(const DfMap& map, const SimplexPoint& x0,
                           const SimplexPoint& xbar, long steps,
                           double delta = kDefaultDelta);

} // namespace dfcert
