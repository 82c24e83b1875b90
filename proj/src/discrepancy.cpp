#include "sfsfd/discrepancy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sfsfd/summation.hpp"

namespace sfsfd {

std::string_view to_string(DiscrepancyVariant v) noexcept {
    switch (v) {
        case DiscrepancyVariant::kClassical: return "classical";
        case DiscrepancyVariant::kSquaredCross: return "squared-cross";
    }
    return "classical";
}

DiscrepancyVariant parse_discrepancy_variant(std::string_view name) {
    if (name == "classical") return DiscrepancyVariant::kClassical;
    if (name == "squared-cross") return DiscrepancyVariant::kSquaredCross;
    throw std::invalid_argument("unknown discrepancy variant '" + std::string(name) +
                                "' (expected classical or squared-cross)");
}

namespace {

// Sum over j > i of prod_k (1 + a_ik/2 + a_jk/2 - g(|x_ik - x_jk|)/2).
double upper_row_sum(const DesignMatrix& x, const std::vector<double>& centered, std::size_t i,
                     DiscrepancyVariant variant) {
    const std::size_t n = x.size();
    const std::size_t d = x.dim();
    const double* xi = x.row(i).data();
    const double* ai = centered.data() + i * d;
    CompensatedSum acc;
    for (std::size_t j = i + 1; j < n; ++j) {
        const double* xj = x.row(j).data();
        const double* aj = centered.data() + j * d;
        double prod = 1.0;
        if (variant == DiscrepancyVariant::kClassical) {
            for (std::size_t k = 0; k < d; ++k) {
                prod *= 1.0 + 0.5 * ai[k] + 0.5 * aj[k] - 0.5 * std::fabs(xi[k] - xj[k]);
            }
        } else {
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = xi[k] - xj[k];
                prod *= 1.0 + 0.5 * ai[k] + 0.5 * aj[k] - 0.5 * diff * diff;
            }
        }
        acc.add(prod);
    }
    return acc.value();
}

double evaluate(const DesignMatrix& x, DiscrepancyVariant variant, bool parallel) {
    const std::size_t n = x.size();
    const std::size_t d = x.dim();

    std::vector<double> centered(n * d);
    for (std::size_t idx = 0; idx < n * d; ++idx) centered[idx] = std::fabs(x.data()[idx] - 0.5);

    // Per-row terms: single-point products and the diagonal of the pair sum.
    std::vector<double> single(n), diagonal(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* ai = centered.data() + i * d;
        double ps = 1.0, pd = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            ps *= 1.0 + 0.5 * ai[k] - 0.5 * ai[k] * ai[k];
            pd *= 1.0 + ai[k];
        }
        single[i] = ps;
        diagonal[i] = pd;
    }

    const auto rows = static_cast<std::ptrdiff_t>(n);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            upper[i] = upper_row_sum(x, centered, static_cast<std::size_t>(i), variant);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < rows; ++i) {
            upper[i] = upper_row_sum(x, centered, static_cast<std::size_t>(i), variant);
        }
    }

    CompensatedSum pairs;
    for (std::size_t i = 0; i < n; ++i) {
        pairs.add(diagonal[i]);
        pairs.add(2.0 * upper[i]);
    }
    const double nn = static_cast<double>(n);
    const double first = std::pow(13.0 / 12.0, static_cast<double>(d));
    const double second = 2.0 / nn * compensated_sum(single);
    const double third = pairs.value() / (nn * nn);
    return first - second + third;
}

}  // namespace

double centered_l2_discrepancy(const DesignMatrix& design, DiscrepancyVariant variant) {
    return evaluate(design, variant, true);
}

double centered_l2_discrepancy_serial(const DesignMatrix& design, DiscrepancyVariant variant) {
    return evaluate(design, variant, false);
}

double mean_squared_distance_to_center(const DesignMatrix& design) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < design.size(); ++i) {
        double r2 = 0.0;
        for (double v : design.row(i)) r2 += (v - 0.5) * (v - 0.5);
        acc.add(r2);
    }
    return acc.value() / static_cast<double>(design.size());
}

}  // namespace sfsfd
