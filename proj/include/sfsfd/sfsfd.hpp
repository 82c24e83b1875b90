#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sfsfd/blackbox.hpp"
#include "sfsfd/discrepancy.hpp"
#include "sfsfd/spectral_pdf.hpp"

namespace sfsfd {

/// Problem and budget for one SF-SFD run.
struct ObjectiveSpec {
    std::size_t n = 100;  // design size
    std::size_t d = 5;    // dimension
    std::size_t m = 10;   // pmf cells
    std::size_t a_initial = 50;
    std::size_t a_growth_period = 10;
    std::size_t max_iterations = 1000;  // objective evaluations
    std::uint64_t seed = 0;
    double rho_begin = 0.5;
    double rho_end = 1e-4;
    std::size_t rescore_factor = 4;
    DiscrepancyVariant variant = DiscrepancyVariant::kClassical;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TraceEntry {
    std::size_t iteration = 0;
    EulerAngleVector theta;
    std::size_t replicates = 0;
    double objective = 0.0;
};

struct OptimizationTrace {
    std::vector<TraceEntry> iterates;
    EulerAngleVector best_angles = EulerAngleVector::zeros(1);
    double best_objective = 0.0;  // min over iterates[].objective
    std::size_t best_iteration = 0;
    // Best iterate re-estimated once with rescore_factor x the last replicate count.
    double rescored_objective = 0.0;
    std::size_t rescore_replicates = 0;
    TerminationStatus status = TerminationStatus::kBudgetExhausted;

    double initial_objective() const { return iterates.front().objective; }
};

struct SfsfdResult {
    ProbabilityMassFunction pmf;
    OptimizationTrace trace;
};

/// a_initial + floor(iteration / period), iteration zero-based.
std::size_t replicate_schedule(std::size_t iteration, std::size_t a_initial, std::size_t period);

/// Mean centered L2 discrepancy over `replicates` independent n x d designs
/// drawn from `pmf`. Replicate r uses the stream derive_seed(stream_seed, {r});
/// replicates run concurrently and are reduced in index order, so the value
/// depends only on the arguments.
double estimate_expected_discrepancy(const ProbabilityMassFunction& pmf, std::size_t n, std::size_t d,
                                     std::size_t replicates, std::uint64_t stream_seed,
                                     DiscrepancyVariant variant = DiscrepancyVariant::kClassical);

double estimate_expected_discrepancy(const EulerAngleVector& theta, const ObjectiveSpec& spec,
                                     std::size_t replicates, std::uint64_t stream_seed);

/// Angles of the uniform pmf with m cells (the optimizer's starting point).
EulerAngleVector uniform_start_angles(std::size_t m);

/// Stream seed used for objective evaluation `iteration` of a run rooted at `root`.
std::uint64_t evaluation_seed(std::uint64_t root, std::size_t iteration);

/// Minimizes the estimated expected discrepancy over the Euler angles of the
/// 1D pmf, starting from the uniform pmf. Evaluation i uses
/// replicate_schedule(i, ...) replicates and evaluation_seed(seed, i).
SfsfdResult run_sfsfd(const ObjectiveSpec& spec);

}  // namespace sfsfd
