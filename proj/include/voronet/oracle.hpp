#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "voronet/box.hpp"
#include "voronet/network.hpp"
#include "voronet/rng.hpp"
#include "voronet/sample_set.hpp"

namespace voronet {

/// Result of a brute-force nearest-generator query.
struct NearestResult {
    std::size_t index = 0;  // smallest index attaining the minimum
    double distance = 0.0;
    bool tied = false;  // another generator attains exactly the same squared distance
};

namespace detail {

struct NearestScan {
    std::size_t index = 0;
    double best_d2 = 0.0;    // minimal squared distance
    double second_d2 = 0.0;  // second-smallest squared distance
    bool tied = false;
};

inline double squared_distance(std::span<const double> a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = a[i] - b[i];
        acc += t * t;
    }
    return acc;
}

// Single linear scan over squared distances; no square roots in the
// comparisons. Ties resolve to the lowest index (only strict < replaces).
inline NearestScan scan_nearest(const SampleSet& s, std::span<const double> x) {
    const std::size_t d = s.dim(), n = s.size();
    NearestScan r;
    r.best_d2 = squared_distance(x, s.points_flat().data(), d);
    r.second_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
        const double d2 = squared_distance(x, s.points_flat().data() + k * d, d);
        if (d2 < r.best_d2) {
            r.second_d2 = r.best_d2;
            r.best_d2 = d2;
            r.index = k;
            r.tied = false;
        } else {
            if (d2 == r.best_d2) r.tied = true;
            if (d2 < r.second_d2) r.second_d2 = d2;
        }
    }
    return r;
}

inline void check_oracle_query(const SampleSet& s, std::span<const double> x) {
    if (x.size() != s.dim())
        throw std::invalid_argument("query dimension " + std::to_string(x.size()) +
                                    " does not match sample dimension " + std::to_string(s.dim()));
    for (double c : x)
        if (!std::isfinite(c))
            throw std::invalid_argument("query has non-finite coordinate");
}

}  // namespace detail

/// Smallest index attaining min_j ||x - x^(j)||_2, by linear scan.
inline NearestResult nearest(const SampleSet& s, std::span<const double> x) {
    detail::check_oracle_query(s, x);
    const auto scan = detail::scan_nearest(s, x);
    return {scan.index, std::sqrt(scan.best_d2), scan.tied};
}

/// Closed-cell membership: ||x - x^(i)|| <= ||x - x^(j)|| for all j != i.
/// Non-strict, so points on shared boundaries belong to several cells.
inline bool in_cell(const SampleSet& s, std::size_t i, std::span<const double> x) {
    if (i >= s.size())
        throw std::out_of_range("in_cell: index " + std::to_string(i) + " out of range");
    detail::check_oracle_query(s, x);
    const std::size_t d = s.dim();
    const double di = detail::squared_distance(x, s.points_flat().data() + i * d, d);
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        if (di > detail::squared_distance(x, s.points_flat().data() + j * d, d))
            return false;
    }
    return true;
}

struct EquivalenceOptions {
    // A query is a near-tie when the two smallest squared distances agree
    // to within this relative gap. The network's half-space test and the
    // oracle's squared-distance comparison are algebraically identical but
    // round differently, so near-ties may legitimately disagree; they are
    // reported but excluded from hard-failure accounting.
    double near_tie_tol = 1e-12;
};

struct QueryCheck {
    double network_output = 0.0;
    double oracle_output = 0.0;
    bool match = false;     // bit-equal outputs
    bool tied = false;      // exact squared-distance tie
    bool near_tie = false;  // within near_tie_tol (includes exact ties)
};

struct EquivalenceReport {
    std::vector<QueryCheck> queries;
    std::size_t total = 0;
    std::size_t matched = 0;
    std::size_t hard_mismatches = 0;  // mismatches outside near-ties
    std::size_t ties = 0;
    std::size_t near_ties = 0;

    bool passed() const { return hard_mismatches == 0; }
};

/// Compares the network against the brute-force oracle on a flat batch of
/// queries. The network must carry the LowestIndex tie rule so both sides
/// realize the same partition. Mismatches are data in the report, not
/// errors; only non-near-tie queries count toward hard_mismatches.
inline EquivalenceReport check_equivalence(const SampleSet& s, const NetworkParams& p,
                                           std::span<const double> queries_flat,
                                           std::size_t count,
                                           const EquivalenceOptions& opts = {}) {
    if (p.tie_mode() != TieMode::LowestIndex)
        throw std::invalid_argument("check_equivalence: network must use the LowestIndex tie rule");
    if (p.dim() != s.dim() || p.size() != s.size())
        throw std::invalid_argument("check_equivalence: network and sample set shapes differ");
    const std::size_t d = s.dim();
    if (queries_flat.size() != count * d)
        throw std::invalid_argument("check_equivalence: flat query array size mismatch");

    EquivalenceReport rep;
    rep.total = count;
    rep.queries.resize(count);
    const std::vector<double> net = eval_batch(p, queries_flat, count);
    for (std::size_t q = 0; q < count; ++q) {
        const std::span<const double> x = queries_flat.subspan(q * d, d);
        const auto scan = detail::scan_nearest(s, x);
        QueryCheck& c = rep.queries[q];
        c.network_output = net[q];
        c.oracle_output = s.value(scan.index);
        c.match = std::bit_cast<std::uint64_t>(c.network_output) ==
                  std::bit_cast<std::uint64_t>(c.oracle_output);
        c.tied = scan.tied;
        c.near_tie = scan.tied ||
                     (scan.second_d2 - scan.best_d2) <= opts.near_tie_tol * scan.second_d2;
        rep.matched += c.match;
        rep.ties += c.tied;
        rep.near_ties += c.near_tie;
        rep.hard_mismatches += (!c.match && !c.near_tie);
    }
    return rep;
}

inline EquivalenceReport check_equivalence(const SampleSet& s, const NetworkParams& p,
                                           const std::vector<std::vector<double>>& queries,
                                           const EquivalenceOptions& opts = {}) {
    std::vector<double> flat;
    flat.reserve(queries.size() * s.dim());
    for (const auto& x : queries) {
        if (x.size() != s.dim())
            throw std::invalid_argument("check_equivalence: query dimension mismatch");
        flat.insert(flat.end(), x.begin(), x.end());
    }
    return check_equivalence(s, p, flat, queries.size(), opts);
}

struct MomentEstimate {
    double mean = 0.0;       // MC average of squared distance to the nearest generator
    double std_error = 0.0;  // standard error of that average
    std::uint64_t points = 0;
};

/// Monte-Carlo estimate of the mean squared distance from a uniform point
/// on `domain` to its nearest generator. With the uniform measure
/// normalized to total mass 1, this is the sum over cells of the second
/// moment of the distance to the cell's generator. Deterministic given
/// seed, independent of scheduling (fixed-size blocks, combined in order).
inline MomentEstimate estimate_cell_moment_detail(const SampleSet& s, const AxisBox& domain,
                                                  std::uint64_t mc_points, std::uint64_t seed) {
    if (mc_points == 0)
        throw std::invalid_argument("estimate_cell_moment: mc_points must be >= 1");
    if (domain.dim() != s.dim())
        throw std::invalid_argument("estimate_cell_moment: domain dimension mismatch");
    const std::size_t d = s.dim();
    const std::size_t n = s.size();
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> x(d);
    for (std::uint64_t block = 0; block * kMcBlock < mc_points; ++block) {
        Rng rng(derive_seed(seed, kStreamMoment, block));
        const std::uint64_t end = std::min<std::uint64_t>((block + 1) * kMcBlock, mc_points);
        double bsum = 0.0, bsumsq = 0.0;
        for (std::uint64_t pt = block * kMcBlock; pt < end; ++pt) {
            for (std::size_t i = 0; i < d; ++i) x[i] = rng.uniform(domain.lo(i), domain.hi(i));
            double best = detail::squared_distance(x, s.points_flat().data(), d);
            for (std::size_t k = 1; k < n; ++k)
                best = std::min(best, detail::squared_distance(x, s.points_flat().data() + k * d, d));
            bsum += best;
            bsumsq += best * best;
        }
        sum += bsum;
        sumsq += bsumsq;
    }
    MomentEstimate est;
    est.points = mc_points;
    est.mean = sum / static_cast<double>(mc_points);
    if (mc_points > 1) {
        const double m = static_cast<double>(mc_points);
        const double var = std::max(0.0, (sumsq - m * est.mean * est.mean) / (m - 1.0));
        est.std_error = std::sqrt(var / m);
    }
    return est;
}

inline double estimate_cell_moment(const SampleSet& s, const AxisBox& domain,
                                   std::uint64_t mc_points, std::uint64_t seed) {
    return estimate_cell_moment_detail(s, domain, mc_points, seed).mean;
}

/// Lower-bound MC estimate of the largest cell diameter within `domain`.
///
/// Uniform sample points are assigned to cells by nearest generator. For
/// each cell, take the assigned point farthest from the generator, then
/// the farthest assigned point from that one; the largest such distance
/// over all cells is returned. Distances are between actual sample points
/// inside a cell, so the estimate never exceeds the true diameter and
/// converges to it from below as mc_points grows (cells are convex).
inline double estimate_max_diameter(const SampleSet& s, const AxisBox& domain,
                                    std::uint64_t mc_points, std::uint64_t seed) {
    if (mc_points == 0)
        throw std::invalid_argument("estimate_max_diameter: mc_points must be >= 1");
    if (domain.dim() != s.dim())
        throw std::invalid_argument("estimate_max_diameter: domain dimension mismatch");
    const std::size_t d = s.dim();
    const std::size_t n = s.size();
    const std::size_t count = static_cast<std::size_t>(mc_points);

    std::vector<double> pts(count * d);
    std::vector<std::size_t> cell(count);
    std::vector<double> x(d);
    for (std::uint64_t block = 0; block * kMcBlock < mc_points; ++block) {
        Rng rng(derive_seed(seed, kStreamDiameter, block));
        const std::uint64_t end = std::min<std::uint64_t>((block + 1) * kMcBlock, mc_points);
        for (std::uint64_t pt = block * kMcBlock; pt < end; ++pt) {
            for (std::size_t i = 0; i < d; ++i) x[i] = rng.uniform(domain.lo(i), domain.hi(i));
            std::copy(x.begin(), x.end(), pts.begin() + pt * d);
            cell[pt] = detail::scan_nearest(s, x).index;
        }
    }

    // Pass 1: per cell, the assigned point farthest from the generator.
    std::vector<double> far_d2(n, -1.0);
    std::vector<std::size_t> far_idx(n, 0);
    for (std::size_t pt = 0; pt < count; ++pt) {
        const std::size_t k = cell[pt];
        const double d2 = detail::squared_distance({pts.data() + pt * d, d},
                                                   s.points_flat().data() + k * d, d);
        if (d2 > far_d2[k]) {
            far_d2[k] = d2;
            far_idx[k] = pt;
        }
    }
    // Pass 2: per cell, the farthest assigned point from that anchor.
    std::vector<double> diam_d2(n, 0.0);
    for (std::size_t pt = 0; pt < count; ++pt) {
        const std::size_t k = cell[pt];
        if (far_d2[k] < 0.0) continue;
        const double* anchor = pts.data() + far_idx[k] * d;
        const double d2 = detail::squared_distance({pts.data() + pt * d, d}, anchor, d);
        diam_d2[k] = std::max(diam_d2[k], d2);
    }
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) best = std::max(best, diam_d2[k]);
    return std::sqrt(best);
}

}  // namespace voronet
