#include "dfcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dfcert/errors.hpp"
#include "dfcert/linalg.hpp"

namespace dfcert {
namespace {

// Band around 1 inside which an eigenvalue disqualifies the point from
// Lefschetz treatment (the index needs det(I - dG) bounded away from 0).
constexpr double kMarginalBand = 1e-9;

Stability classify(const std::vector<double>& reduced, double spectral_radius) {
    for (double lambda : reduced)
        if (std::abs(lambda - 1.0) <= kMarginalBand) return Stability::Marginal;
    return spectral_radius < 1.0 ? Stability::ExpStable : Stability::Unstable;
}

double max_abs_eigenvalue(const std::vector<double>& values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

} // namespace

const char* stability_name(Stability s) noexcept {
    switch (s) {
        case Stability::ExpStable: return "ExpStable";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
    }
    return "Unknown";
}

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::UniqueExpStable: return "UniqueExpStable";
        case Verdict::Inconsistent: return "Inconsistent";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

StabilityReport stability_report(const DfMap& map, const SimplexPoint& xbar, double delta) {
    const FullJacobian full = fixed_point_jacobian(map, xbar, delta);
    StabilityReport report{xbar, {}, {}, 0.0, Stability::Marginal, 0};
    report.full_spectrum = df_spectrum_via_symmetrization(full, xbar);
    report.reduced_spectrum = drop_zero_eigenvalue(report.full_spectrum);

    // The dropped-zero spectrum must agree with the explicitly constructed
    // reduced Jacobian: its trace equals the eigenvalue sum and its
    // determinant the eigenvalue product.
    const ReducedJacobian dg = reduced_jacobian(full);
    double eig_sum = 0.0;
    double eig_product = 1.0;
    for (double lambda : report.reduced_spectrum) {
        eig_sum += lambda;
        eig_product *= lambda;
    }
    if (std::abs(eig_sum - dg.entries.trace()) > 1e-8)
        fail(Errc::ConsistencyCheckFailed,
             "reduced eigenvalue sum disagrees with the reduced Jacobian trace");
    if (std::abs(eig_product - signed_det(dg.entries).value()) > 1e-8)
        fail(Errc::ConsistencyCheckFailed,
             "reduced eigenvalue product disagrees with the reduced Jacobian determinant");

    report.spectral_radius = max_abs_eigenvalue(report.reduced_spectrum);
    report.stability = classify(report.reduced_spectrum, report.spectral_radius);

    if (report.stability == Stability::Marginal) {
        report.lefschetz_index = 0;
    } else {
        Matrix i_minus_dg = Matrix::identity(dg.entries.rows()) - dg.entries;
        report.lefschetz_index = signed_det(i_minus_dg).sign;
    }
    return report;
}

CornerReport corner_report(const InfluenceWeights& weights, std::size_t corner) {
    if (corner >= weights.size()) fail(Errc::InvalidArgument, "corner index out of range");
    CornerReport report;
    report.corner = corner;
    // Closed-form corner spectrum: one eigenvalue at (1 - gamma)/gamma and
    // n - 2 zeros after reduction.
    const double lambda = (1.0 - weights[corner]) / weights[corner];
    report.reduced_spectrum.assign(weights.size() - 1, 0.0);
    report.reduced_spectrum.back() = lambda;
    report.spectral_radius = max_abs_eigenvalue(report.reduced_spectrum);
    report.stability = classify(report.reduced_spectrum, report.spectral_radius);
    if (report.stability == Stability::Marginal) {
        report.lefschetz_index = 0;
    } else {
        double det = 1.0;
        for (double value : report.reduced_spectrum) det *= 1.0 - value;
        report.lefschetz_index = sign_of(det);
    }
    return report;
}

LefschetzCertificate certify(const InfluenceWeights& weights, const SolverConfig& cfg,
                             double delta) {
    const DfMap map(weights);
    const Enumeration enumeration = enumerate_fixed_points(map, cfg, delta);

    LefschetzCertificate cert;
    cert.converged_starts = enumeration.converged_starts;
    cert.nonconverged_starts = enumeration.nonconverged_starts;
    cert.euler_characteristic = 1;

    std::size_t interior_found = 0;
    std::string classification_flaw;
    for (const FixedPointRecord& record : enumeration.records) {
        if (record.is_corner) continue;
        ++interior_found;
        try {
            StabilityReport report = stability_report(map, record.location, delta);
            cert.index_sum += report.lefschetz_index;
            cert.interior.push_back(std::move(report));
        } catch (const Error& e) {
            classification_flaw = e.what();
        }
    }
    for (std::size_t i = 0; i < weights.size(); ++i)
        cert.corners.push_back(corner_report(weights, i));

    const bool marginal = std::any_of(cert.interior.begin(), cert.interior.end(),
                                      [](const StabilityReport& r) {
                                          return r.stability == Stability::Marginal;
                                      });

    if (!classification_flaw.empty()) {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = "an interior fixed point resisted spectral classification: " +
                      classification_flaw;
    } else if (marginal) {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = "an eigenvalue within 1e-9 of 1 blocks the index computation";
    } else if (interior_found == 0) {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = "no interior fixed point was located, so there is no evidence to certify";
    } else if (interior_found > 1) {
        cert.verdict = Verdict::Inconsistent;
        cert.detail = std::to_string(interior_found) +
                      " interior fixed points contradict the uniqueness identity";
    } else if (cert.index_sum != cert.euler_characteristic) {
        cert.verdict = Verdict::Inconsistent;
        cert.detail = "index sum " + std::to_string(cert.index_sum) +
                      " does not match the Euler characteristic 1";
    } else if (cert.interior.front().stability != Stability::ExpStable) {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = "the interior fixed point is not exponentially stable";
    } else if (cert.nonconverged_starts > 0) {
        cert.verdict = Verdict::Inconclusive;
        cert.detail = std::to_string(cert.nonconverged_starts) +
                      " starts did not converge, so the enumeration may be incomplete";
    } else {
        cert.verdict = Verdict::UniqueExpStable;
        cert.detail = "one exponentially stable interior fixed point; index sum matches the "
                      "Euler characteristic 1";
    }
    return cert;
}

RateEstimate rate_estimate(const DfMap& map, const SimplexPoint& x0, const SimplexPoint& xbar,
                           long steps, double delta) {
    if (steps < 50) fail(Errc::InvalidArgument, "rate estimation needs at least 50 steps");
    const StabilityReport report = stability_report(map, xbar, delta);

    const Trajectory traj = map.simulate(x0, steps);
    std::vector<double> log_distance;
    std::vector<double> step_index;
    bool entered_neighborhood = false;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        double d1 = 0.0;
        for (std::size_t i = 0; i < xbar.size(); ++i) d1 += std::abs(traj.states[k][i] - xbar[i]);
        if (d1 <= 1e-3) entered_neighborhood = true;
        // Head (pre-asymptotic) and floor (rounding noise) are both excluded
        // from the fit.
        if (d1 <= 1e-3 && d1 >= 1e-12) {
            step_index.push_back(static_cast<double>(k));
            log_distance.push_back(std::log(d1));
        }
    }
    if (!entered_neighborhood)
        fail(Errc::NotInBasin, "trajectory never approached the fixed point below 1e-3");
    if (log_distance.size() < 10)
        fail(Errc::TailTooShort, "only " + std::to_string(log_distance.size()) +
                                     " usable tail points; need at least 10");

    const double count = static_cast<double>(step_index.size());
    double mean_k = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < step_index.size(); ++i) {
        mean_k += step_index[i];
        mean_y += log_distance[i];
    }
    mean_k /= count;
    mean_y /= count;
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < step_index.size(); ++i) {
        cov += (step_index[i] - mean_k) * (log_distance[i] - mean_y);
        var += (step_index[i] - mean_k) * (step_index[i] - mean_k);
    }

    RateEstimate estimate;
    estimate.rate = std::exp(cov / var);
    estimate.predicted = report.spectral_radius;
    estimate.relative_error = std::abs(estimate.rate - estimate.predicted) / estimate.predicted;
    estimate.tail_steps = static_cast<int>(step_index.size());
    return estimate;
}

} // namespace dfcert
