#pragma once

#include <string>
#include <string_view>

#include "sfsfd/design.hpp"

namespace sfsfd {

/// Which cross term the centered L2 discrepancy uses.
///
/// kClassical is the standard centered discrepancy, whose cross factor is
/// 1 + |x_ik - .5|/2 + |x_jk - .5|/2 - |x_ik - x_jk|/2. kSquaredCross replaces
/// the last term by |x_ik - x_jk|^2 / 2. Only kClassical is a true squared
/// discrepancy (the uniform expectation is ((5/4)^d - (13/12)^d) / n).
enum class DiscrepancyVariant { kClassical, kSquaredCross };

std::string_view to_string(DiscrepancyVariant v) noexcept;
/// Accepts "classical" and "squared-cross"; throws std::invalid_argument otherwise.
DiscrepancyVariant parse_discrepancy_variant(std::string_view name);

/// Centered L2 discrepancy (squared form, no square root taken).
///
/// The O(n^2 d) pair sum visits i < j once and is split into per-row partial
/// sums that are reduced in fixed row order with compensated summation, so
/// the result is bit-identical for every OpenMP thread count and equals
/// centered_l2_discrepancy_serial exactly.
double centered_l2_discrepancy(const DesignMatrix& design,
                               DiscrepancyVariant variant = DiscrepancyVariant::kClassical);

/// Single-threaded reference of the same kernel.
double centered_l2_discrepancy_serial(const DesignMatrix& design,
                                      DiscrepancyVariant variant = DiscrepancyVariant::kClassical);

/// (1/n) sum_i ||x_i - (1/2,...,1/2)||^2.
double mean_squared_distance_to_center(const DesignMatrix& design);

}  // namespace sfsfd
