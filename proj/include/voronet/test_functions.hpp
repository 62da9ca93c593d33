#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voronet/box.hpp"
#include "voronet/network.hpp"

namespace voronet {

/// A named benchmark target with its natural domain and, when the target
/// is differentiable, the exact supremum of ||grad f||_2 over that domain.
struct TargetFunction {
    std::string name;
    std::size_t dim = 1;
    AxisBox domain = AxisBox::cube(1, 0.0, 1.0);
    std::function<double(std::span<const double>)> fn;
    std::optional<double> grad_sup;  // nullopt for discontinuous targets

    double operator()(std::span<const double> x) const { return fn(x); }
};

/// cos(4 pi x) on [0, 1]; |f'| peaks at 4 pi.
inline TargetFunction cos_1d() {
    return {"cos1d", 1, AxisBox::cube(1, 0.0, 1.0),
            [](std::span<const double> x) { return std::cos(4.0 * std::numbers::pi * x[0]); },
            4.0 * std::numbers::pi};
}

/// sin(4 pi x) on [0, 1]. Same magnitude profile as cos1d.
inline TargetFunction sin_1d() {
    return {"sin1d", 1, AxisBox::cube(1, 0.0, 1.0),
            [](std::span<const double> x) { return std::sin(4.0 * std::numbers::pi * x[0]); },
            4.0 * std::numbers::pi};
}

/// 3 s(x - 0.313) + s(x - 0.747) + 2 cos(4 pi x) on [0, 1], where s is the
/// same hard limiter the network uses (s(0) = 1). Discontinuous, so no
/// gradient supremum.
inline TargetFunction jump_1d() {
    return {"jump1d", 1, AxisBox::cube(1, 0.0, 1.0),
            [](std::span<const double> x) {
                return 3.0 * step(x[0] - 0.313) + step(x[0] - 0.747) +
                       2.0 * std::cos(4.0 * std::numbers::pi * x[0]);
            },
            std::nullopt};
}

/// sin(omega sum_i x_i) on [0,1]^d. ||grad|| = omega sqrt(d) |cos(.)|,
/// attained at x = 0, so grad_sup = omega sqrt(d) exactly.
inline TargetFunction sine_nd(std::size_t d, double omega) {
    if (d == 0) throw std::invalid_argument("sine_nd: dimension must be positive");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("sine_nd: omega must be positive and finite");
    std::string name = "sine:d=" + std::to_string(d) + ":omega=" + std::to_string(omega);
    return {std::move(name), d, AxisBox::cube(d, 0.0, 1.0),
            [omega](std::span<const double> x) {
                double s = 0.0;
                for (double c : x) s += c;
                return std::sin(omega * s);
            },
            omega * std::sqrt(static_cast<double>(d))};
}

/// exp(-sum_i (x_i/2)^2) on [-1,1]^d. ||grad|| at radius r = ||x|| is
/// (r/2) exp(-r^2/4), maximized at r = min(sqrt(2), sqrt(d)) inside the box.
inline TargetFunction gauss_nd(std::size_t d) {
    if (d == 0) throw std::invalid_argument("gauss_nd: dimension must be positive");
    const double r = std::sqrt(std::min(2.0, static_cast<double>(d)));
    const double grad_sup = (r / 2.0) * std::exp(-r * r / 4.0);
    return {"gauss:d=" + std::to_string(d), d, AxisBox::cube(d, -1.0, 1.0),
            [](std::span<const double> x) {
                double s = 0.0;
                for (double c : x) {
                    const double h = c * 0.5;
                    s += h * h;
                }
                return std::exp(-s);
            },
            grad_sup};
}

namespace detail {

inline double parse_double_strict(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("target: cannot parse " + what + " value '" +
                                    std::string(text) + "'");
    return v;
}

inline std::size_t parse_size_strict(std::string_view text, const std::string& what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0)
        throw std::invalid_argument("target: cannot parse " + what + " value '" +
                                    std::string(text) + "'");
    return v;
}

}  // namespace detail

/// Parses a target spec string: "cos1d", "sin1d", "jump1d",
/// "sine:d=2:omega=6.283185307179586", "gauss:d=4".
inline TargetFunction parse_target(std::string_view text) {
    std::vector<std::string_view> parts;
    while (!text.empty()) {
        const std::size_t pos = text.find(':');
        parts.push_back(text.substr(0, pos));
        text = pos == std::string_view::npos ? std::string_view{} : text.substr(pos + 1);
    }
    if (parts.empty()) throw std::invalid_argument("target: empty spec");

    std::optional<std::size_t> d;
    std::optional<double> omega;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string_view kv = parts[i];
        const std::size_t eq = kv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("target: expected key=value, got '" + std::string(kv) + "'");
        const std::string_view key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "d") d = detail::parse_size_strict(val, "d");
        else if (key == "omega") omega = detail::parse_double_strict(val, "omega");
        else throw std::invalid_argument("target: unknown parameter '" + std::string(key) + "'");
    }

    const std::string_view name = parts[0];
    if (name == "cos1d" || name == "sin1d" || name == "jump1d") {
        if (d || omega)
            throw std::invalid_argument("target: '" + std::string(name) + "' takes no parameters");
        if (name == "cos1d") return cos_1d();
        if (name == "sin1d") return sin_1d();
        return jump_1d();
    }
    if (name == "sine") {
        if (!d || !omega) throw std::invalid_argument("target: 'sine' requires d= and omega=");
        return sine_nd(*d, *omega);
    }
    if (name == "gauss") {
        if (!d || omega) throw std::invalid_argument("target: 'gauss' requires d= and no omega");
        return gauss_nd(*d);
    }
    throw std::invalid_argument("target: unknown target '" + std::string(name) +
                                "' (expected cos1d, sin1d, jump1d, sine:d=..:omega=.., gauss:d=..)");
}

}  // namespace voronet
