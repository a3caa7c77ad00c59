#pragma once

#include <cstdint>
#include <vector>

#include "dfcert/df_map.hpp"
#include "dfcert/simplex.hpp"

namespace dfcert {

struct SolverConfig {
    double picard_tol = 1e-13;        // sup-norm of x - F(x)
    long picard_max_iters = 100000;
    double newton_tol = 1e-14;
    int newton_max_iters = 50;
    int multistart_count = 50;
    double cluster_radius = 1e-7;     // sup-norm identity radius
    std::uint64_t seed = 0;

    void validate() const;
};

struct FixedPointRecord {
    SimplexPoint location;
    double residual = 0.0;   // ||F(x) - x||_inf at location
    int basin_hits = 0;      // starts that converged to this record
    bool is_corner = false;
};

// Non-convergence is a reported outcome, not an exception: the theory
// guarantees only local convergence.
struct PicardResult {
    FixedPointRecord record; // terminal point and residual, converged or not
    long iterations = 0;
    bool converged = false;
};

PicardResult picard_solve(const DfMap& map, const SimplexPoint& x0, const SolverConfig& cfg);

// Newton steps on G(y) - y = 0 in the reduced coordinates y_i = x_i (i < n),
// starting from a point already near a fixed point (residual <= 1e-3).
// Steps are halved (up to 30 times) while they would leave the shrunken
// simplex or fail to decrease the residual.
FixedPointRecord newton_refine(const DfMap& map, const SimplexPoint& x_approx,
                               const SolverConfig& cfg, double delta = kDefaultDelta);

struct Enumeration {
    std::vector<FixedPointRecord> records; // sorted by first coordinate
    int converged_starts = 0;
    int nonconverged_starts = 0;
};

// Multistart Picard + Newton refinement + sup-norm clustering, with the n
// corner fixed points injected analytically (the Jacobian formulas are
// singular there). Deterministic given cfg.seed.
Enumeration enumerate_fixed_points(const DfMap& map, const SolverConfig& cfg,
                                   double delta = kDefaultDelta);

} // namespace dfcert
