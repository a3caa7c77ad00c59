#include "dfcert/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

namespace dfcert {
namespace {

double checked_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Uniform draw in [0, 1) built from the top 53 bits of the generator, so the
// sample stream is identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SimplexPoint::SimplexPoint(std::vector<double> raw) : coords_(std::move(raw)) {
    if (coords_.size() < 3) fail(Errc::DimensionTooSmall, "simplex points need n >= 3");
    for (double v : coords_) {
        if (v < -kSumTolerance) fail(Errc::NegativeEntry, "coordinate below -1e-12");
    }
    for (double& v : coords_) v = std::clamp(v, 0.0, 1.0);
    const double sum = checked_sum(coords_);
    if (!(sum > 0.0)) fail(Errc::ZeroSum, "coordinates sum to zero");
    for (double& v : coords_) v /= sum;
}

SimplexPoint SimplexPoint::barycenter(std::size_t n) {
    if (n < 3) fail(Errc::DimensionTooSmall, "simplex points need n >= 3");
    return SimplexPoint(Trusted{}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SimplexPoint SimplexPoint::corner(std::size_t n, std::size_t i) {
    if (n < 3) fail(Errc::DimensionTooSmall, "simplex points need n >= 3");
    if (i >= n) fail(Errc::InvalidArgument, "corner index out of range");
    std::vector<double> coords(n, 0.0);
    coords[i] = 1.0;
    return SimplexPoint(Trusted{}, std::move(coords));
}

SimplexPoint SimplexPoint::from_trusted(std::vector<double> coords) {
    assert(coords.size() >= 3);
    assert(std::all_of(coords.begin(), coords.end(), [](double v) { return v >= 0.0; }));
    assert(std::abs(checked_sum(coords) - 1.0) <= kSumTolerance);
    return SimplexPoint(Trusted{}, std::move(coords));
}

double SimplexPoint::max_coord() const noexcept {
    double m = 0.0;
    for (double v : coords_) m = std::max(m, v);
    return m;
}

InfluenceWeights::InfluenceWeights(std::vector<double> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.size() < 3) fail(Errc::DimensionTooSmall, "influence weights need n >= 3");
    for (double g : gamma_) {
        if (!(g > 0.0)) fail(Errc::NonPositiveWeight, "weights must be strictly positive");
    }
    if (std::abs(checked_sum(gamma_) - 1.0) > kSumTolerance)
        fail(Errc::WeightSumNotOne, "weights must sum to one within 1e-12");
    for (double g : gamma_) {
        if (g >= 0.5)
            fail(Errc::StarGraphDetected, "weight " + std::to_string(g) +
                                              " >= 1/2 is the excluded star-graph case");
    }
}

std::vector<SimplexPoint> sample_interior(std::size_t n, std::size_t count,
                                          std::uint64_t seed, double delta) {
    if (n < 3) fail(Errc::DimensionTooSmall, "simplex points need n >= 3");
    if (!(delta > 0.0 && delta < 1.0 / static_cast<double>(n)))
        fail(Errc::BadDelta, "delta must lie in (0, 1/n) so the shrunken simplex is nonempty");

    std::mt19937_64 rng(seed);
    std::vector<SimplexPoint> points;
    points.reserve(count);
    std::vector<double> draw(n);
    while (points.size() < count) {
        // Symmetric Dirichlet: i.i.d. exponentials renormalized, which is
        // exchangeable across coordinates, then rejection against the
        // corner-exclusion bound.
        double sum = 0.0;
        for (double& d : draw) {
            d = -std::log1p(-uniform01(rng));
            sum += d;
        }
        if (!(sum > 0.0)) continue;
        bool inside = true;
        for (double& d : draw) {
            d /= sum;
            if (d > 1.0 - delta) inside = false;
        }
        if (!inside) continue;
        points.push_back(SimplexPoint(draw));
    }
    return points;
}

bool is_permutation(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (std::size_t dst : p) {
        if (dst >= p.size() || seen[dst]) return false;
        seen[dst] = true;
    }
    return true;
}

std::vector<double> permute_values(const Permutation& p, std::span<const double> v) {
    if (p.size() != v.size() || !is_permutation(p))
        fail(Errc::InvalidArgument, "not a permutation of the coordinate indices");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[p[i]] = v[i];
    return out;
}

SimplexPoint permute(const Permutation& p, const SimplexPoint& x) {
    // Reordering is exact, so route around the renormalizing constructor to
    // keep the permutation action a genuine group action bit-for-bit.
    return SimplexPoint::from_trusted(permute_values(p, x.span()));
}

InfluenceWeights permute(const Permutation& p, const InfluenceWeights& w) {
    return InfluenceWeights(permute_values(p, w.span()));
}

} // namespace dfcert
