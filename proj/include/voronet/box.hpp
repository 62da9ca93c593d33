#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voronet {

/// Axis-aligned box with strictly positive volume in every dimension.
class AxisBox {
public:
    AxisBox(std::vector<double> lo, std::vector<double> hi)
        : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.empty() || lo_.size() != hi_.size())
            throw std::invalid_argument("AxisBox: lo/hi must be non-empty and of equal dimension");
        for (std::size_t i = 0; i < lo_.size(); ++i) {
            if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
                throw std::invalid_argument("AxisBox: non-finite bound in dimension " + std::to_string(i));
            if (!(lo_[i] < hi_[i]))
                throw std::invalid_argument("AxisBox: degenerate extent in dimension " + std::to_string(i));
        }
    }

    /// [lo, hi]^dim cube.
    static AxisBox cube(std::size_t dim, double lo, double hi) {
        return AxisBox(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
    }

    std::size_t dim() const { return lo_.size(); }
    std::span<const double> lo() const { return lo_; }
    std::span<const double> hi() const { return hi_; }
    double lo(std::size_t i) const { return lo_[i]; }
    double hi(std::size_t i) const { return hi_[i]; }

    bool contains(std::span<const double> x) const {
        if (x.size() != lo_.size()) return false;
        for (std::size_t i = 0; i < lo_.size(); ++i)
            if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
        return true;
    }

private:
    std::vector<double> lo_;
    std::vector<double> hi_;
};

}  // namespace voronet
