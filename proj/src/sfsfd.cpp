#include "sfsfd/sfsfd.hpp"

#include <stdexcept>
#include <string>

#include "sfsfd/random.hpp"
#include "sfsfd/summation.hpp"

namespace sfsfd {

namespace {
constexpr std::uint64_t kEvaluationTag = hash_tag("sfsfd/evaluation");
constexpr std::uint64_t kRescoreTag = hash_tag("sfsfd/rescore");
}  // namespace

void ObjectiveSpec::validate() const {
    auto require = [](bool ok, const char* field) {
        if (!ok) throw std::invalid_argument(std::string("ObjectiveSpec.") + field + " must be >= 1");
    };
    require(n >= 1, "n");
    require(d >= 1, "d");
    require(m >= 1, "m");
    require(a_initial >= 1, "a_initial");
    require(a_growth_period >= 1, "a_growth_period");
    require(max_iterations >= 1, "max_iterations");
    require(rescore_factor >= 1, "rescore_factor");
    if (!(rho_begin > 0.0 && rho_end > 0.0 && rho_end <= rho_begin)) {
        throw std::invalid_argument("ObjectiveSpec needs 0 < rho_end <= rho_begin");
    }
}

std::size_t replicate_schedule(std::size_t iteration, std::size_t a_initial, std::size_t period) {
    if (period == 0) throw std::invalid_argument("replicate schedule period must be >= 1");
    return a_initial + iteration / period;
}

double estimate_expected_discrepancy(const ProbabilityMassFunction& pmf, std::size_t n, std::size_t d,
                                     std::size_t replicates, std::uint64_t stream_seed,
                                     DiscrepancyVariant variant) {
    if (replicates == 0) throw std::invalid_argument("need at least one replicate");
    std::vector<double> values(replicates);
    const auto count = static_cast<std::ptrdiff_t>(replicates);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
        RandomStream rng(derive_seed(stream_seed, {static_cast<std::uint64_t>(r)}));
        values[static_cast<std::size_t>(r)] = centered_l2_discrepancy(sample_design(pmf, n, d, rng), variant);
    }
    return compensated_sum(values) / static_cast<double>(replicates);
}

double estimate_expected_discrepancy(const EulerAngleVector& theta, const ObjectiveSpec& spec,
                                     std::size_t replicates, std::uint64_t stream_seed) {
    return estimate_expected_discrepancy(angles_to_pmf(theta), spec.n, spec.d, replicates, stream_seed,
                                         spec.variant);
}

EulerAngleVector uniform_start_angles(std::size_t m) {
    return coefficients_to_angles(forward_dft(sqrt_transform(ProbabilityMassFunction::uniform(m))));
}

std::uint64_t evaluation_seed(std::uint64_t root, std::size_t iteration) {
    return derive_seed(root, {kEvaluationTag, static_cast<std::uint64_t>(iteration)});
}

SfsfdResult run_sfsfd(const ObjectiveSpec& spec) {
    spec.validate();
    const EulerAngleVector start = uniform_start_angles(spec.m);

    OptimizationTrace trace;
    auto objective = [&](std::span<const double> x) {
        const std::size_t iteration = trace.iterates.size();
        EulerAngleVector theta(std::vector<double>(x.begin(), x.end()));
        const std::size_t a = replicate_schedule(iteration, spec.a_initial, spec.a_growth_period);
        const double value = estimate_expected_discrepancy(theta, spec, a, evaluation_seed(spec.seed, iteration));
        trace.iterates.push_back({iteration, std::move(theta), a, value});
        return value;
    };

    const BlackboxResult result =
        minimize_blackbox(objective, start.angles(), BoxBounds::uniform(start.size(), 0.0, kTwoPi),
                          {spec.max_iterations, spec.rho_begin, spec.rho_end});

    // First minimum over the trace (the optimizer reports the same point).
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
        if (trace.iterates[i].objective < trace.iterates[best].objective) best = i;
    }
    trace.best_iteration = best;
    trace.best_angles = trace.iterates[best].theta;
    trace.best_objective = trace.iterates[best].objective;
    trace.status = result.status;
    // The starting iterate keeps the exact uniform masses.
    ProbabilityMassFunction pmf =
        best == 0 ? ProbabilityMassFunction::uniform(spec.m) : angles_to_pmf(trace.best_angles);
    trace.rescore_replicates = spec.rescore_factor * trace.iterates.back().replicates;
    trace.rescored_objective = estimate_expected_discrepancy(pmf, spec.n, spec.d, trace.rescore_replicates,
                                                             derive_seed(spec.seed, {kRescoreTag}), spec.variant);
    return {std::move(pmf), std::move(trace)};
}

}  // namespace sfsfd
