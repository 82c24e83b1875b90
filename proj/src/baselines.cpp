#include "sfsfd/baselines.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sfsfd {

namespace {
void require_shape(std::size_t n, std::size_t d) {
    if (n == 0 || d == 0) throw std::invalid_argument("design size and dimension must be positive");
}
}  // namespace

DesignMatrix uniform_random_design(std::size_t n, std::size_t d, RandomStream& rng) {
    require_shape(n, d);
    std::vector<double> coords(n * d);
    for (double& x : coords) x = rng.uniform();
    return DesignMatrix::from_trusted(n, d, std::move(coords));
}

DesignMatrix latin_hypercube_design(std::size_t n, std::size_t d, RandomStream& rng) {
    require_shape(n, d);
    const auto cells = static_cast<double>(n);
    std::vector<double> coords(n * d);
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < d; ++k) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        for (std::size_t i = 0; i < n; ++i) {
            const auto cell = static_cast<double>(perm[i]);
            double x = (cell + rng.uniform()) / cells;
            const double top = (cell + 1.0) / cells;
            if (x >= top) x = std::nextafter(top, 0.0);
            coords[i * d + k] = x;
        }
    }
    return DesignMatrix::from_trusted(n, d, std::move(coords));
}

DesignMatrix sobol_design(std::size_t n, std::size_t d, std::uint64_t seed, SobolMode mode) {
    require_shape(n, d);
    SobolEngine engine(d, mode, seed);
    std::vector<double> coords(n * d);
    for (std::size_t i = 0; i < n; ++i) engine.next(std::span<double>(coords.data() + i * d, d));
    return DesignMatrix::from_trusted(n, d, std::move(coords));
}

}  // namespace sfsfd
