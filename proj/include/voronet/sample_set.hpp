#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "voronet/box.hpp"

namespace voronet {

/// Two generators share every coordinate (exact equality). Near-duplicates
/// are legal; exact coincidence makes the tessellation ill-defined.
struct DuplicatePointsError : std::invalid_argument {
    DuplicatePointsError(std::size_t a, std::size_t b)
        : std::invalid_argument("duplicate points at indices " + std::to_string(a) +
                                " and " + std::to_string(b)),
          first(a), second(b) {}
    std::size_t first;
    std::size_t second;
};

/// Immutable training set: n distinct points in R^d with one value each.
/// Validated once at construction; safe for concurrent reads afterwards.
class SampleSet {
public:
    SampleSet(std::size_t dim, std::vector<double> points, std::vector<double> values)
        : dim_(dim), points_(std::move(points)), values_(std::move(values)) {
        if (dim_ == 0)
            throw std::invalid_argument("SampleSet: dimension must be positive");
        if (points_.empty() || points_.size() % dim_ != 0)
            throw std::invalid_argument("SampleSet: point array size is not a multiple of dim");
        n_ = points_.size() / dim_;
        if (n_ < 2)
            throw std::invalid_argument("SampleSet: need at least 2 samples, got " + std::to_string(n_));
        if (values_.size() != n_)
            throw std::invalid_argument("SampleSet: expected " + std::to_string(n_) +
                                        " values, got " + std::to_string(values_.size()));
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!std::isfinite(points_[i]))
                throw std::invalid_argument("SampleSet: non-finite coordinate at point " +
                                            std::to_string(i / dim_));
        for (std::size_t k = 0; k < n_; ++k)
            if (!std::isfinite(values_[k]))
                throw std::invalid_argument("SampleSet: non-finite value at index " + std::to_string(k));
        check_distinct();
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return n_; }

    std::span<const double> point(std::size_t k) const {
        return {points_.data() + k * dim_, dim_};
    }
    double value(std::size_t k) const { return values_[k]; }

    std::span<const double> points_flat() const { return points_; }
    const std::vector<double>& values() const { return values_; }

    /// Tight axis-aligned bounding box of the points, inflated where needed
    /// so every extent is positive (AxisBox requires positive volume).
    AxisBox bounding_box() const {
        std::vector<double> lo(points_.begin(), points_.begin() + dim_);
        std::vector<double> hi = lo;
        for (std::size_t k = 1; k < n_; ++k)
            for (std::size_t i = 0; i < dim_; ++i) {
                lo[i] = std::min(lo[i], points_[k * dim_ + i]);
                hi[i] = std::max(hi[i], points_[k * dim_ + i]);
            }
        for (std::size_t i = 0; i < dim_; ++i)
            if (!(lo[i] < hi[i])) {
                const double pad = std::max(1.0, std::abs(lo[i])) * 0.5;
                lo[i] -= pad;
                hi[i] += pad;
            }
        return AxisBox(std::move(lo), std::move(hi));
    }

private:
    // Lexicographic sort brings exact duplicates adjacent; O(n log n · d).
    void check_distinct() const {
        std::vector<std::size_t> order(n_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto less = [&](std::size_t a, std::size_t b) {
            const double* pa = points_.data() + a * dim_;
            const double* pb = points_.data() + b * dim_;
            for (std::size_t i = 0; i < dim_; ++i) {
                if (pa[i] < pb[i]) return true;
                if (pa[i] > pb[i]) return false;
            }
            return false;
        };
        std::sort(order.begin(), order.end(), less);
        for (std::size_t r = 1; r < n_; ++r) {
            const std::size_t a = order[r - 1], b = order[r];
            if (!less(a, b) && !less(b, a))
                throw DuplicatePointsError(std::min(a, b), std::max(a, b));
        }
    }

    std::size_t dim_;
    std::size_t n_ = 0;
    std::vector<double> points_;
    std::vector<double> values_;
};

}  // namespace voronet
