#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfsfd {

/// n points in the closed unit cube [0,1]^d, stored row-major.
class DesignMatrix {
public:
    /// Throws std::invalid_argument on n == 0, d == 0, a size mismatch, or a
    /// coordinate outside [0,1] (NaN included).
    DesignMatrix(std::size_t n, std::size_t d, std::vector<double> coords);

    /// Unchecked construction for generators that produce in-range values by
    /// construction.
    static DesignMatrix from_trusted(std::size_t n, std::size_t d, std::vector<double> coords);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }

    std::span<const double> row(std::size_t i) const noexcept { return {coords_.data() + i * d_, d_}; }
    double operator()(std::size_t i, std::size_t k) const noexcept { return coords_[i * d_ + k]; }
    std::span<const double> data() const noexcept { return coords_; }

    bool operator==(const DesignMatrix&) const = default;

private:
    DesignMatrix() = default;

    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<double> coords_;
};

}  // namespace sfsfd
