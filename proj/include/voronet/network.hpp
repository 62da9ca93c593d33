#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "voronet/parallel.hpp"
#include "voronet/sample_set.hpp"

namespace voronet {

/// Hard-limiter activation: 1 for x >= 0, 0 for x < 0.
inline int step(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("step: non-finite input");
    return x >= 0.0 ? 1 : 0;
}

/// What to return when a query is exactly equidistant from several
/// generators, i.e. several second-layer neurons fire at once.
///
/// PaperFaithful sums the values of every firing cell (so a query on a
/// shared cell boundary adds all adjacent cell values together).
/// LowestIndex returns the value of the firing cell with the smallest
/// index, which makes the output a true partition-based piecewise-constant
/// function and agrees with the brute-force nearest-neighbor tie rule.
enum class TieMode { PaperFaithful, LowestIndex };

inline const char* to_string(TieMode m) {
    return m == TieMode::PaperFaithful ? "paper" : "lowest";
}

struct FirstLayerNeuron {
    std::vector<double> weight;  // x^(k) - x^(j)
    double threshold;            // (x^(k) - x^(j)) . (x^(k) + x^(j)) / 2
};

/// The explicitly constructed two-hidden-layer threshold network.
///
/// First hidden layer: n groups of n-1 neurons; neuron (k, j) tests whether
/// the query lies on generator k's side of the perpendicular bisector
/// between generators k and j. Second hidden layer: n AND gates, one per
/// group. Output: sum of training values gated by the second layer.
///
/// First-layer entries are deterministic functions of the stored generator
/// coordinates and are computed on demand with a fixed operation order, so
/// they are bit-identical to what a materialized n(n-1) table would hold
/// while the object stays O(n d) in memory.
///
/// Immutable after construction; concurrent reads are safe.
class NetworkParams {
public:
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return n_; }
    TieMode tie_mode() const { return tie_mode_; }
    double epsilon() const { return epsilon_; }

    /// b^(2) = n - 1 - epsilon.
    double second_layer_threshold() const { return b2_; }

    std::span<const double> output_weights() const { return values_; }
    std::span<const double> generator(std::size_t k) const {
        return {points_.data() + k * dim_, dim_};
    }
    std::span<const double> generators_flat() const { return points_; }

    std::size_t first_layer_size() const { return n_ * (n_ - 1); }

    /// Weight vector and threshold of first-layer neuron (k, j), k != j.
    FirstLayerNeuron first_layer(std::size_t k, std::size_t j) const {
        check_pair(k, j);
        const double* pk = points_.data() + k * dim_;
        const double* pj = points_.data() + j * dim_;
        FirstLayerNeuron out;
        out.weight.resize(dim_);
        double dot = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            out.weight[i] = pk[i] - pj[i];
            dot += out.weight[i] * (pk[i] + pj[i]);
        }
        out.threshold = 0.5 * dot;
        return out;
    }

    /// Pre-activation of neuron (k, j) at x: w_{k,j} . x - b_{k,j}.
    /// Non-negative exactly when x is at least as close to generator k as
    /// to generator j (in exact arithmetic).
    double pair_margin(std::size_t k, std::size_t j, std::span<const double> x) const {
        const double* pk = points_.data() + k * dim_;
        const double* pj = points_.data() + j * dim_;
        double wx = 0.0, wb = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double w = pk[i] - pj[i];
            wx += w * x[i];
            wb += w * (pk[i] + pj[i]);
        }
        return wx - 0.5 * wb;
    }

    friend NetworkParams build_network(const SampleSet&, TieMode, double);

private:
    void check_pair(std::size_t k, std::size_t j) const {
        if (k >= n_ || j >= n_ || k == j)
            throw std::invalid_argument("first layer index pair (" + std::to_string(k) +
                                        ", " + std::to_string(j) + ") out of range");
    }

    std::size_t dim_ = 0;
    std::size_t n_ = 0;
    std::vector<double> points_;
    std::vector<double> values_;
    double epsilon_ = 0.5;
    double b2_ = 0.0;
    TieMode tie_mode_ = TieMode::LowestIndex;
};

/// Builds the network directly from the training data. No optimization,
/// no randomness: weights are coordinate differences, thresholds are
/// bisector offsets, output weights are the training values.
///
/// epsilon in [0, 1) lowers the second-layer threshold from n-1 to
/// n-1-epsilon. First-layer outputs are exact 0/1 values, so any epsilon
/// in (0, 1) yields identical behavior; 0.5 maximizes the margin of the
/// integer group count against the threshold.
inline NetworkParams build_network(const SampleSet& samples,
                                   TieMode tie_mode = TieMode::LowestIndex,
                                   double epsilon = 0.5) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("build_network: epsilon must lie in [0, 1)");
    NetworkParams p;
    p.dim_ = samples.dim();
    p.n_ = samples.size();
    p.points_.assign(samples.points_flat().begin(), samples.points_flat().end());
    p.values_ = samples.values();
    p.epsilon_ = epsilon;
    p.b2_ = static_cast<double>(p.n_ - 1) - epsilon;
    p.tie_mode_ = tie_mode;
    return p;
}

/// Binary outputs of both hidden layers for one query, plus the output.
/// Diagnostic view: unlike eval(), this always materializes all n(n-1)
/// first-layer bits.
struct ActivationTrace {
    std::size_t n = 0;
    std::vector<std::uint8_t> z1_bits;  // n x (n-1), group-major
    std::vector<std::uint8_t> z2;       // n
    double output = 0.0;

    std::uint8_t z1(std::size_t k, std::size_t j) const {
        return z1_bits[k * (n - 1) + (j < k ? j : j - 1)];
    }
};

namespace detail {

inline void check_query(const NetworkParams& p, std::span<const double> x) {
    if (x.size() != p.dim())
        throw std::invalid_argument("query dimension " + std::to_string(x.size()) +
                                    " does not match network dimension " +
                                    std::to_string(p.dim()));
    for (double c : x)
        if (!std::isfinite(c))
            throw std::invalid_argument("query has non-finite coordinate");
}

// Second-layer neuron k fires iff its group count reaches n-1-epsilon.
// Counts are exact small integers, so for epsilon in [0, 1) this is
// equivalent to winning every bisector test, which permits the early exit.
inline bool group_fires(const NetworkParams& p, std::size_t k, std::span<const double> x) {
    const std::size_t n = p.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        if (p.pair_margin(k, j, x) < 0.0) return false;
    }
    return true;
}

inline double output_from_fired(const NetworkParams& p, const std::vector<std::uint8_t>& z2) {
    const std::span<const double> f = p.output_weights();
    if (p.tie_mode() == TieMode::LowestIndex) {
        for (std::size_t k = 0; k < z2.size(); ++k)
            if (z2[k]) return f[k];
        return 0.0;  // unreachable in exact arithmetic; see eval() notes
    }
    double y = 0.0;
    for (std::size_t k = 0; k < z2.size(); ++k)
        if (z2[k]) y += f[k];
    return y;
}

}  // namespace detail

/// Full forward pass with all intermediate activations.
inline ActivationTrace eval_trace(const NetworkParams& p, std::span<const double> x) {
    detail::check_query(p, x);
    const std::size_t n = p.size();
    ActivationTrace t;
    t.n = n;
    t.z1_bits.resize(n * (n - 1));
    t.z2.resize(n);
    const double b2 = p.second_layer_threshold();
    for (std::size_t k = 0; k < n; ++k) {
        double count = 0.0;
        std::size_t pos = k * (n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            const std::uint8_t bit = p.pair_margin(k, j, x) >= 0.0 ? 1 : 0;
            t.z1_bits[pos++] = bit;
            count += bit;
        }
        t.z2[k] = (count - b2) >= 0.0 ? 1 : 0;
    }
    t.output = detail::output_from_fired(p, t.z2);
    return t;
}

/// Network output at x. Bit-identical to eval_trace(p, x).output, with a
/// per-group early exit (a group is dead as soon as it loses one bisector
/// test) and, under LowestIndex, a return at the first firing group.
///
/// A query equidistant from several generators fires several groups:
/// PaperFaithful sums their values, LowestIndex picks the smallest index.
/// If floating-point rounding near a cell corner leaves no group firing
/// (impossible in exact arithmetic), the result is the empty sum 0.
inline double eval(const NetworkParams& p, std::span<const double> x) {
    detail::check_query(p, x);
    const std::size_t n = p.size();
    const std::span<const double> f = p.output_weights();
    if (p.tie_mode() == TieMode::LowestIndex) {
        for (std::size_t k = 0; k < n; ++k)
            if (detail::group_fires(p, k, x)) return f[k];
        return 0.0;
    }
    double y = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (detail::group_fires(p, k, x)) y += f[k];
    return y;
}

/// Evaluates a flat row-major batch of `count` points. Order-preserving
/// and elementwise identical to sequential eval(); points are independent,
/// so they are sharded across threads.
inline std::vector<double> eval_batch(const NetworkParams& p,
                                      std::span<const double> xs_flat,
                                      std::size_t count) {
    const std::size_t d = p.dim();
    if (xs_flat.size() != count * d)
        throw std::invalid_argument("eval_batch: flat array holds " +
                                    std::to_string(xs_flat.size()) + " reals, expected " +
                                    std::to_string(count * d));
    for (std::size_t i = 0; i < xs_flat.size(); ++i)
        if (!std::isfinite(xs_flat[i]))
            throw std::invalid_argument("eval_batch: non-finite coordinate at point index " +
                                        std::to_string(i / d));
    std::vector<double> out(count);
    parallel_for(0, count, [&](std::size_t i) {
        out[i] = eval(p, xs_flat.subspan(i * d, d));
    }, 256);
    return out;
}

inline std::vector<double> eval_batch(const NetworkParams& p,
                                      const std::vector<std::vector<double>>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i].size() != p.dim())
            throw std::invalid_argument("eval_batch: point index " + std::to_string(i) +
                                        " has dimension " + std::to_string(xs[i].size()) +
                                        ", expected " + std::to_string(p.dim()));
    std::vector<double> flat;
    flat.reserve(xs.size() * p.dim());
    for (const auto& x : xs) flat.insert(flat.end(), x.begin(), x.end());
    return eval_batch(p, flat, xs.size());
}

}  // namespace voronet
