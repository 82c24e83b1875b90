#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sfsfd {

struct BoxBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static BoxBounds uniform(std::size_t n, double lo, double hi) {
        return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
    }
};

struct BlackboxOptions {
    std::size_t max_evaluations = 1000;
    double rho_begin = 0.5;
    double rho_end = 1e-4;
};

enum class TerminationStatus {
    kTrustRegionConverged,  // rho reached rho_end with no further progress
    kBudgetExhausted,       // max_evaluations used up; a normal outcome
};

struct BlackboxResult {
    std::vector<double> x;  // best point seen
    double value = 0.0;     // objective at x
    std::size_t evaluations = 0;
    TerminationStatus status = TerminationStatus::kBudgetExhausted;
};

using BlackboxObjective = std::function<double(std::span<const double>)>;

/// Derivative-free minimization over a box by linear approximation on a
/// simplex of n+1 points inside a trust region of radius rho (in the style of
/// Powell's COBYLA, with the bounds handled exactly in the step subproblem).
///
/// Every point handed to `f` lies inside the box, `f` is called at most
/// options.max_evaluations times, and the first call is at the clamped x0.
/// Throws std::invalid_argument on inconsistent sizes, an empty box side
/// (lower > upper), a zero budget, or non-positive radii.
BlackboxResult minimize_blackbox(const BlackboxObjective& f, std::span<const double> x0,
                                 const BoxBounds& bounds, const BlackboxOptions& options = {});

}  // namespace sfsfd
