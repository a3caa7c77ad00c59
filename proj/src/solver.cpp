#include "dfcert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfcert/errors.hpp"
#include "dfcert/jacobian.hpp"
#include "dfcert/linalg.hpp"

namespace dfcert {
namespace {

double sup_distance(const SimplexPoint& a, const SimplexPoint& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double residual_at(const DfMap& map, const SimplexPoint& x) {
    return sup_distance(map.evaluate(x), x);
}

// Union-find over record indices, used to merge numerically identical
// fixed-point locations.
struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

void SolverConfig::validate() const {
    if (!(picard_tol > 0.0) || !(newton_tol > 0.0) || !(cluster_radius > 0.0))
        fail(Errc::InvalidArgument, "solver tolerances must be positive");
    if (picard_max_iters < 1 || newton_max_iters < 1)
        fail(Errc::InvalidArgument, "iteration budgets must be at least 1");
    if (multistart_count < 0)
        fail(Errc::InvalidArgument, "multistart count must be nonnegative");
    if (!(cluster_radius > newton_tol))
        fail(Errc::InvalidArgument, "cluster radius must exceed the Newton tolerance");
}

PicardResult picard_solve(const DfMap& map, const SimplexPoint& x0, const SolverConfig& cfg) {
    cfg.validate();
    SimplexPoint x = x0;
    for (long it = 0;; ++it) {
        const SimplexPoint fx = map.evaluate(x);
        const double r = sup_distance(fx, x);
        if (r <= cfg.picard_tol || it >= cfg.picard_max_iters)
            return PicardResult{FixedPointRecord{x, r, 0, x.is_corner()}, it,
                                r <= cfg.picard_tol};
        x = fx;
    }
}

FixedPointRecord newton_refine(const DfMap& map, const SimplexPoint& x_approx,
                               const SolverConfig& cfg, double delta) {
    cfg.validate();
    const ShrunkenSimplexSpec domain(delta);
    if (!domain.contains(x_approx))
        fail(Errc::CornerPoint, "Newton refinement works on interior points only");
    if (residual_at(map, x_approx) > 1e-3)
        fail(Errc::NotAFixedPoint, "Newton refinement needs a starting residual at or below 1e-3");

    const std::size_t n = x_approx.size();
    const std::size_t m = n - 1;
    SimplexPoint x = x_approx;
    for (int step = 0; step < cfg.newton_max_iters; ++step) {
        const SimplexPoint fx = map.evaluate(x);
        const double r = sup_distance(fx, x);
        if (r <= cfg.newton_tol) return FixedPointRecord{x, r, 0, false};

        // One Newton step on G(y) - y = 0 in the coordinates y_i = x_i
        // (i < n), with x_n recovered as 1 - sum(y).
        const ReducedJacobian dg = reduced_jacobian(full_jacobian(map, x, delta));
        Matrix system = dg.entries;
        for (std::size_t i = 0; i < m; ++i) system(i, i) -= 1.0;
        std::vector<double> rhs(m);
        for (std::size_t i = 0; i < m; ++i) rhs[i] = fx[i] - x[i];
        std::vector<double> newton_step;
        try {
            newton_step = linear_solve(system, rhs);
        } catch (const Error& e) {
            if (e.code() == Errc::SingularMatrix)
                fail(Errc::SingularNewtonMatrix,
                     "dG - I is singular: an eigenvalue at 1 is not a certifiable fixed point");
            throw;
        }

        // Halve the step while it would leave the shrunken simplex or fail
        // to decrease the residual.
        bool accepted = false;
        bool stayed_inside = false;
        double scale = 1.0;
        std::vector<double> trial(n);
        for (int halving = 0; halving <= 30; ++halving, scale *= 0.5) {
            double head_sum = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i < m; ++i) {
                trial[i] = x[i] - scale * newton_step[i];
                if (trial[i] < 0.0) ok = false;
                head_sum += trial[i];
            }
            trial[m] = 1.0 - head_sum;
            if (trial[m] < 0.0) ok = false;
            if (ok) {
                for (std::size_t i = 0; i < n; ++i)
                    if (trial[i] > 1.0 - delta) ok = false;
            }
            if (!ok) continue;
            stayed_inside = true;
            SimplexPoint x_try = SimplexPoint::from_trusted(trial);
            if (residual_at(map, x_try) <= r) {
                x = std::move(x_try);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!stayed_inside)
                fail(Errc::LeftDomain, "Newton step leaves the shrunken simplex even after 30 halvings");
            fail(Errc::NoConvergence, "Newton step cannot decrease the residual");
        }
    }
    const double r = residual_at(map, x);
    if (r > cfg.newton_tol)
        fail(Errc::NoConvergence, "Newton iteration budget exhausted at residual " + std::to_string(r));
    return FixedPointRecord{x, r, 0, false};
}

Enumeration enumerate_fixed_points(const DfMap& map, const SolverConfig& cfg, double delta) {
    cfg.validate();
    const std::size_t n = map.size();
    Enumeration out;

    std::vector<FixedPointRecord> refined;
    if (cfg.multistart_count >= 1) {
        std::vector<SimplexPoint> starts =
            sample_interior(n, static_cast<std::size_t>(cfg.multistart_count), cfg.seed, delta);
        starts.push_back(SimplexPoint::barycenter(n));

        // Picard hands off to Newton once the residual is small enough for
        // quadratic convergence; driving Picard itself to 1e-13 would waste
        // thousands of linear-rate iterations.
        SolverConfig handoff = cfg;
        handoff.picard_tol = std::max(cfg.picard_tol, 1e-6);

        for (const SimplexPoint& start : starts) {
            const PicardResult coarse = picard_solve(map, start, handoff);
            if (!coarse.converged) {
                ++out.nonconverged_starts;
                continue;
            }
            try {
                refined.push_back(newton_refine(map, coarse.record.location, cfg, delta));
                ++out.converged_starts;
            } catch (const Error&) {
                // Drifted corner-near or stalled: the start yielded no
                // certifiable interior point, which taints the evidence the
                // same way a non-converged start does.
                ++out.nonconverged_starts;
            }
        }
    }

    // Merge locations within cluster_radius of each other (transitively).
    DisjointSets sets(refined.size());
    for (std::size_t i = 0; i < refined.size(); ++i)
        for (std::size_t j = i + 1; j < refined.size(); ++j)
            if (sup_distance(refined[i].location, refined[j].location) <= cfg.cluster_radius)
                sets.unite(i, j);

    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        const std::size_t root = sets.find(i);
        if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
    for (std::size_t root : roots) {
        std::size_t best = refined.size();
        int hits = 0;
        for (std::size_t i = 0; i < refined.size(); ++i) {
            if (sets.find(i) != root) continue;
            ++hits;
            if (best == refined.size() || refined[i].residual < refined[best].residual) best = i;
        }
        FixedPointRecord rec = refined[best];
        rec.basin_hits = hits;
        out.records.push_back(std::move(rec));
    }

    // The n corners are fixed points by construction; the analytic Jacobian
    // is singular there, so they are injected rather than discovered.
    for (std::size_t i = 0; i < n; ++i)
        out.records.push_back(FixedPointRecord{SimplexPoint::corner(n, i), 0.0, 0, true});

    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const FixedPointRecord& a, const FixedPointRecord& b) {
                         return a.location[0] < b.location[0];
                     });
    return out;
}

} // namespace dfcert
