#include "sfsfd/design.hpp"

#include <stdexcept>
#include <string>

namespace sfsfd {

DesignMatrix::DesignMatrix(std::size_t n, std::size_t d, std::vector<double> coords)
    : n_(n), d_(d), coords_(std::move(coords)) {
    if (n_ == 0 || d_ == 0) {
        throw std::invalid_argument("design must have at least one point and one dimension");
    }
    if (coords_.size() != n_ * d_) {
        throw std::invalid_argument("design has " + std::to_string(coords_.size()) +
                                    " coordinates, expected " + std::to_string(n_ * d_));
    }
    for (std::size_t idx = 0; idx < coords_.size(); ++idx) {
        const double x = coords_[idx];
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument("coordinate (" + std::to_string(idx / d_) + ", " +
                                        std::to_string(idx % d_) + ") = " + std::to_string(x) +
                                        " lies outside [0,1]");
        }
    }
}

DesignMatrix DesignMatrix::from_trusted(std::size_t n, std::size_t d, std::vector<double> coords) {
    DesignMatrix m;
    m.n_ = n;
    m.d_ = d;
    m.coords_ = std::move(coords);
    return m;
}

}  // namespace sfsfd
