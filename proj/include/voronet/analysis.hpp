#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "voronet/box.hpp"
#include "voronet/network.hpp"
#include "voronet/oracle.hpp"
#include "voronet/rng.hpp"
#include "voronet/sample_set.hpp"
#include "voronet/test_functions.hpp"

namespace voronet {

/// Errors of the network against a target over M random validation points.
/// eps_inf and eps_2 are the l_inf / l_2 norms of the pointwise-error
/// vector; rms = eps_2 / sqrt(M) estimates the L2(uniform) error, which is
/// what the moment-based bound controls. rms_std_error is the delta-method
/// Monte-Carlo standard error of rms.
struct ValidationReport {
    std::uint64_t m = 0;
    double eps_inf = 0.0;
    double eps_2 = 0.0;
    double rms = 0.0;
    double rms_std_error = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const ValidationReport&) const = default;
};

using TargetFn = std::function<double(std::span<const double>)>;

/// Draws m uniform points on `domain` from the validation stream of `seed`
/// (disjoint from every training stream) and measures pointwise errors.
/// Bit-reproducible for a fixed seed regardless of thread count.
inline ValidationReport validate(const NetworkParams& params, const TargetFn& target,
                                 const AxisBox& domain, std::uint64_t m, std::uint64_t seed) {
    if (m == 0) throw std::invalid_argument("validate: m must be >= 1");
    if (domain.dim() != params.dim())
        throw std::invalid_argument("validate: domain dimension mismatch");
    const std::size_t d = params.dim();
    const std::size_t count = static_cast<std::size_t>(m);

    const std::vector<double> pts = draw_uniform(domain, count, seed, kStreamValidate);
    const std::vector<double> y = eval_batch(params, pts, count);

    double eps_inf = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double e = std::abs(y[i] - target(std::span<const double>(pts.data() + i * d, d)));
        eps_inf = std::max(eps_inf, e);
        const double e2 = e * e;
        sum2 += e2;
        sum4 += e2 * e2;
    }
    ValidationReport rep;
    rep.m = m;
    rep.seed = seed;
    rep.eps_inf = eps_inf;
    rep.eps_2 = std::sqrt(sum2);
    const double mm = static_cast<double>(m);
    rep.rms = rep.eps_2 / std::sqrt(mm);
    if (m > 1 && rep.rms > 0.0) {
        const double mean2 = sum2 / mm;
        const double var2 = std::max(0.0, (sum4 - mm * mean2 * mean2) / (mm - 1.0));
        rep.rms_std_error = std::sqrt(var2 / mm) / (2.0 * rep.rms);
    }
    return rep;
}

struct BoundEstimate {
    double value = 0.0;
    double std_error = 0.0;  // propagated MC standard error
};

/// grad_sup * sqrt(mean squared distance to the nearest generator): the
/// moment-based L2 error bound for a differentiable target with
/// sup ||grad f|| <= grad_sup. The moment is estimated by Monte Carlo; the
/// standard error is propagated through the square root.
inline BoundEstimate theorem_bound_detail(const SampleSet& samples, double grad_sup,
                                          const AxisBox& domain, std::uint64_t mc_points,
                                          std::uint64_t seed) {
    if (!(grad_sup >= 0.0) || !std::isfinite(grad_sup))
        throw std::invalid_argument("theorem_bound: grad_sup must be finite and >= 0");
    const MomentEstimate mom = estimate_cell_moment_detail(samples, domain, mc_points, seed);
    BoundEstimate b;
    b.value = grad_sup * std::sqrt(mom.mean);
    if (mom.mean > 0.0)
        b.std_error = grad_sup * mom.std_error / (2.0 * std::sqrt(mom.mean));
    return b;
}

inline double theorem_bound(const SampleSet& samples, double grad_sup, const AxisBox& domain,
                            std::uint64_t mc_points, std::uint64_t seed) {
    return theorem_bound_detail(samples, grad_sup, domain, mc_points, seed).value;
}

/// grad_sup * delta, with delta the estimated largest cell diameter. The
/// diameter estimate is a lower bound, so this bound is approached from
/// below; it always dominates the moment-based bound up to MC noise.
inline double corollary_bound(const SampleSet& samples, double grad_sup, const AxisBox& domain,
                              std::uint64_t mc_points, std::uint64_t seed) {
    if (!(grad_sup >= 0.0) || !std::isfinite(grad_sup))
        throw std::invalid_argument("corollary_bound: grad_sup must be finite and >= 0");
    return grad_sup * estimate_max_diameter(samples, domain, mc_points, seed);
}

/// Least-squares slope of log(error) against log(n).
inline double fit_rate(const std::vector<std::pair<std::uint64_t, double>>& series) {
    if (series.size() < 3)
        throw std::invalid_argument("fit_rate: need at least 3 entries, got " +
                                    std::to_string(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0 && series[i].first <= series[i - 1].first)
            throw std::invalid_argument("fit_rate: n values must be strictly increasing at entry " +
                                        std::to_string(i));
        if (!(series[i].second > 0.0) || !std::isfinite(series[i].second))
            throw std::invalid_argument("fit_rate: entry " + std::to_string(i) + " (n=" +
                                        std::to_string(series[i].first) +
                                        ") has nonpositive error; cannot take log");
    }
    const double count = static_cast<double>(series.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(series.size()), ly(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        lx[i] = std::log(static_cast<double>(series[i].first));
        ly[i] = std::log(series[i].second);
        mx += lx[i];
        my += ly[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

enum class SamplingMode { UniformGrid1D, Random };

inline const char* to_string(SamplingMode m) {
    return m == SamplingMode::UniformGrid1D ? "grid1d" : "random";
}

/// Midpoint grid x_i = lo + ((i + 1/2) / n)(hi - lo), i = 0..n-1.
inline std::vector<double> midpoint_grid_1d(const AxisBox& domain, std::size_t n) {
    if (domain.dim() != 1)
        throw std::invalid_argument("midpoint_grid_1d: domain must be one-dimensional");
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        pts[i] = domain.lo(0) + t * (domain.hi(0) - domain.lo(0));
    }
    return pts;
}

/// Training data for one convergence run: points per `mode`, values from
/// the target. Random mode draws from the training stream of `seed`.
inline SampleSet draw_training_set(const TargetFunction& target, const AxisBox& domain,
                                   std::size_t n, SamplingMode mode, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("draw_training_set: n must be >= 2");
    std::vector<double> pts;
    if (mode == SamplingMode::UniformGrid1D) {
        pts = midpoint_grid_1d(domain, n);
    } else {
        pts = draw_uniform(domain, n, seed, kStreamTrain);
    }
    const std::size_t d = domain.dim();
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k)
        values[k] = target(std::span<const double>(pts.data() + k * d, d));
    return SampleSet(d, std::move(pts), std::move(values));
}

struct ConvergenceConfig {
    AxisBox domain = AxisBox::cube(1, 0.0, 1.0);
    std::vector<std::size_t> n_list;
    SamplingMode sampling = SamplingMode::Random;
    std::uint64_t m = 10000;
    std::uint64_t seed = 0;
    std::size_t repetitions = 3;  // averaged per n; random data and validation noise both shrink
    TieMode tie_mode = TieMode::LowestIndex;
    double epsilon = 0.5;
    std::uint64_t bound_mc_points = 20000;  // 0 disables the bound columns
};

struct ConvergenceEntry {
    std::size_t n = 0;
    ValidationReport report;  // rep-averaged errors
    double theorem_bound = std::numeric_limits<double>::quiet_NaN();
    double corollary_bound = std::numeric_limits<double>::quiet_NaN();
    double theorem_bound_std_error = 0.0;
};

struct ConvergenceSeries {
    std::vector<ConvergenceEntry> entries;  // sorted by strictly increasing n
    double fitted_slope = 0.0;              // least-squares slope on rms
    double reference_slope = 0.0;           // -1/d
};

/// Runs the full error-versus-n experiment: per n and repetition, draw
/// training data, build the network, validate on a fresh stream, and
/// (optionally) estimate both error bounds; then fit the log-log slope of
/// the rep-averaged rms. Seeds for training, validation and bound
/// estimation are derived per (n, repetition) from disjoint streams.
inline ConvergenceSeries run_convergence(const TargetFunction& target,
                                         const ConvergenceConfig& cfg) {
    if (cfg.n_list.size() < 3)
        throw std::invalid_argument("run_convergence: need at least 3 n values for a fit");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 2)
            throw std::invalid_argument("run_convergence: every n must be >= 2");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
            throw std::invalid_argument("run_convergence: n values must be strictly increasing");
    }
    if (cfg.sampling == SamplingMode::UniformGrid1D && cfg.domain.dim() != 1)
        throw std::invalid_argument("run_convergence: grid1d sampling requires a 1-d domain");
    if (cfg.domain.dim() != target.dim)
        throw std::invalid_argument("run_convergence: domain does not match target dimension");
    if (cfg.repetitions == 0)
        throw std::invalid_argument("run_convergence: repetitions must be >= 1");

    ConvergenceSeries series;
    series.reference_slope = -1.0 / static_cast<double>(target.dim);
    series.entries.reserve(cfg.n_list.size());

    for (const std::size_t n : cfg.n_list) {
        ConvergenceEntry entry;
        entry.n = n;
        double sum_inf = 0.0, sum_2 = 0.0, sum_rms = 0.0, sum_rms_se2 = 0.0;
        double sum_thm = 0.0, sum_cor = 0.0, sum_thm_se2 = 0.0;
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            const std::uint64_t train_seed = derive_seed(cfg.seed, kStreamTrain, n, rep);
            const std::uint64_t valid_seed = derive_seed(cfg.seed, kStreamValidate, n, rep);
            const SampleSet train =
                draw_training_set(target, cfg.domain, n, cfg.sampling, train_seed);
            const NetworkParams net = build_network(train, cfg.tie_mode, cfg.epsilon);
            const ValidationReport rep_report =
                validate(net, target.fn, cfg.domain, cfg.m, valid_seed);
            sum_inf += rep_report.eps_inf;
            sum_2 += rep_report.eps_2;
            sum_rms += rep_report.rms;
            sum_rms_se2 += rep_report.rms_std_error * rep_report.rms_std_error;
            if (cfg.bound_mc_points > 0 && target.grad_sup) {
                const std::uint64_t bound_seed = derive_seed(cfg.seed, kStreamMoment, n, rep);
                const BoundEstimate tb = theorem_bound_detail(train, *target.grad_sup, cfg.domain,
                                                              cfg.bound_mc_points, bound_seed);
                sum_thm += tb.value;
                sum_thm_se2 += tb.std_error * tb.std_error;
                sum_cor += corollary_bound(train, *target.grad_sup, cfg.domain,
                                           cfg.bound_mc_points, bound_seed);
            }
        }
        const double r = static_cast<double>(cfg.repetitions);
        entry.report.m = cfg.m;
        entry.report.seed = cfg.seed;
        entry.report.eps_inf = sum_inf / r;
        entry.report.eps_2 = sum_2 / r;
        entry.report.rms = sum_rms / r;
        entry.report.rms_std_error = std::sqrt(sum_rms_se2) / r;
        if (cfg.bound_mc_points > 0 && target.grad_sup) {
            entry.theorem_bound = sum_thm / r;
            entry.corollary_bound = sum_cor / r;
            entry.theorem_bound_std_error = std::sqrt(sum_thm_se2) / r;
        }
        series.entries.push_back(std::move(entry));
    }

    std::vector<std::pair<std::uint64_t, double>> fit_input;
    fit_input.reserve(series.entries.size());
    for (const auto& e : series.entries) fit_input.emplace_back(e.n, e.report.rms);
    series.fitted_slope = fit_rate(fit_input);
    return series;
}

}  // namespace voronet
