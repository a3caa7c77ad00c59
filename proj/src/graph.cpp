#include "dfcert/graph.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dfcert/errors.hpp"

namespace dfcert {
namespace {

// Marks every node reachable from node 0 along edges given by
// edge(from, to). Plain BFS over the support pattern.
template <typename EdgeFn>
std::vector<bool> reachable_from_zero(std::size_t n, EdgeFn edge) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const std::size_t from = queue.back();
        queue.pop_back();
        for (std::size_t to = 0; to < n; ++to) {
            if (!seen[to] && edge(from, to)) {
                seen[to] = true;
                queue.push_back(to);
            }
        }
    }
    return seen;
}

} // namespace

InteractionMatrix::InteractionMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (!entries_.square() || entries_.rows() < 3)
        fail(Errc::InvalidMatrix, "interaction matrix must be square with n >= 3");
    const std::size_t n = entries_.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (entries_(i, i) != 0.0)
            fail(Errc::InvalidMatrix, "diagonal must be exactly zero (no self-weighting)");
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (entries_(i, j) < 0.0) fail(Errc::InvalidMatrix, "entries must be nonnegative");
            row_sum += entries_(i, j);
        }
        if (std::abs(row_sum - 1.0) > kSumTolerance)
            fail(Errc::InvalidMatrix,
                 "row " + std::to_string(i + 1) + " sums to " + std::to_string(row_sum) +
                     ", not 1 within 1e-12");
    }
}

bool validate_connectivity(const InteractionMatrix& c) {
    const std::size_t n = c.size();
    // Strong connectivity == node 0 reaches everyone and everyone reaches
    // node 0; the orientation convention (edge j -> i when C_ij > 0) does
    // not change the answer.
    const std::vector<bool> forward =
        reachable_from_zero(n, [&c](std::size_t from, std::size_t to) { return c(to, from) > 0.0; });
    const std::vector<bool> backward =
        reachable_from_zero(n, [&c](std::size_t from, std::size_t to) { return c(from, to) > 0.0; });
    for (std::size_t i = 0; i < n; ++i)
        if (!forward[i] || !backward[i]) return false;
    return true;
}

InfluenceWeights gamma_from_matrix(const InteractionMatrix& c) {
    if (!validate_connectivity(c))
        fail(Errc::NotStronglyConnected, "influence weights exist only for strongly connected graphs");

    const std::size_t n = c.size();
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    bool converged = false;
    for (long it = 0; it < 100000; ++it) {
        // Lazy power iteration on C^T: averaging with the current iterate
        // keeps the same fixed vector but damps the period-2 oscillation
        // that plain power iteration develops on bipartite-like supports
        // (the star graph being the canonical offender).
        for (std::size_t i = 0; i < n; ++i) {
            double lifted = 0.0;
            for (std::size_t j = 0; j < n; ++j) lifted += c(j, i) * v[j];
            next[i] = 0.5 * (v[i] + lifted);
        }
        double sum = 0.0;
        for (double value : next) sum += value;
        for (double& value : next) value /= sum;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - v[i]));
        v.swap(next);
        if (diff <= 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged)
        fail(Errc::NoConvergence, "power iteration did not settle within 100000 iterations");

    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] >= 0.5 - 1e-12)
            fail(Errc::StarGraphDetected,
                 "node " + std::to_string(i + 1) + " holds influence weight " +
                     std::to_string(v[i]) + " >= 1/2: star-graph topology");
    }
    return InfluenceWeights(std::move(v));
}

} // namespace dfcert
