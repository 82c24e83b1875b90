#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfsfd/discrepancy.hpp"
#include "sfsfd/sobol.hpp"

namespace sfsfd {

/// Design generators compared by the benchmark, in table order.
enum class Method { kSfsfd, kLhs, kSobol, kUniform };

std::string_view to_string(Method m) noexcept;
/// Accepts "sfsfd", "lhs", "sobol", "uniform".
Method parse_method(std::string_view name);

using VariantFlags = std::map<std::string, std::string>;

struct ExperimentRecord {
    Method method = Method::kUniform;
    std::size_t d = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double discrepancy = 0.0;  // NaN when `error` is set
    double wall_time_seconds = 0.0;
    VariantFlags variant_flags;
    // Extra per-record numbers that are not part of the identity (for SF-SFD:
    // the optimizer's objective estimates).
    std::map<std::string, double> metrics;
    std::optional<std::string> error;

    /// Identity of the record: method, d, n, seed and variant flags.
    std::string key() const;
};

struct AggregateCell {
    Method method = Method::kUniform;
    std::size_t d = 0;
    std::size_t n = 0;
    double mean_discrepancy = 0.0;
    double std_discrepancy = 0.0;  // sample standard deviation, 0 for a single seed
    std::size_t seed_count = 0;
    VariantFlags variant_flags;
};

struct GridAxes {
    std::vector<Method> methods;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> sizes;
    std::vector<std::uint64_t> seeds;
};

struct GridConfig {
    std::size_t m = 10;
    std::size_t budget = 1000;
    std::size_t a_initial = 50;
    std::size_t a_growth_period = 10;
    double rho_begin = 0.5;
    double rho_end = 1e-4;
    DiscrepancyVariant variant = DiscrepancyVariant::kClassical;
    SobolMode sobol_mode = SobolMode::kUnscrambled;
    std::size_t workers = 1;
    /// Stop after computing this many new cells (simulates an interruption).
    std::optional<std::size_t> max_new_cells;
};

/// Provenance flags stored with each record of `method` under `config`.
VariantFlags variant_flags_for(Method method, const GridConfig& config);

/// Seed of the random stream for one grid cell.
std::uint64_t cell_seed(Method method, std::size_t d, std::size_t n, std::uint64_t seed);

/// Computes one grid cell. SF-SFD cells optimize a pmf and score one fresh
/// n-point design drawn from it. Exceptions are captured into `error`.
ExperimentRecord run_cell(Method method, std::size_t d, std::size_t n, std::uint64_t seed,
                          const GridConfig& config);

/// Append-only JSON-lines record store. Wall-clock times live in a sidecar
/// file (`<stem>.timings.jsonl`) so the record file itself is a pure function
/// of the grid and its seeds.
class RecordStore {
public:
    /// Loads existing records; later lines win for duplicate keys.
    explicit RecordStore(std::filesystem::path path);

    bool contains_completed(const std::string& key) const;
    /// Thread-safe; the line is flushed before returning.
    void append(const ExperimentRecord& record);
    /// Deduplicated records in canonical (method, d, n, seed, flags) order.
    std::vector<ExperimentRecord> records() const;
    /// Rewrites the record file in canonical order.
    void finalize();

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path timings_path() const;

private:
    std::filesystem::path path_;
    std::map<std::string, ExperimentRecord> by_key_;
    mutable std::mutex mutex_;
};

std::string to_json_line(const ExperimentRecord& record);
ExperimentRecord parse_record_line(const std::string& line);

struct GridRunSummary {
    std::size_t computed = 0;
    std::size_t skipped = 0;  // already present in the store
    std::size_t failed = 0;   // among computed
    bool interrupted = false;
};

/// Runs every (method, d, n, seed) cell not yet completed in `store`, up to
/// config.workers cells concurrently, then finalizes the store.
GridRunSummary run_grid(const GridAxes& axes, const GridConfig& config, RecordStore& store);

/// Per-(method, d, n) mean and sample standard deviation of the successful
/// records, ordered by (method, d, n). Throws std::invalid_argument when one
/// group mixes variant flags.
std::vector<AggregateCell> aggregate(std::span<const ExperimentRecord> records);

struct ConcentrationPoint {
    std::size_t d = 0;
    double mean_radius_sq = 0.0;       // mean ||x - 1/2||^2
    double relative_std_radius = 0.0;  // std(||x - 1/2||) / mean(||x - 1/2||)
    bool degenerate = false;           // a single point: std reported as 0
};

/// Uniform random designs of n points per seed, pooled per dimension.
std::vector<ConcentrationPoint> concentration_sweep(std::span<const std::size_t> dims, std::size_t n,
                                                    std::span<const std::uint64_t> seeds);

/// One line of the dimension-sweep chart: equal-weight average over n of the
/// per-(d, n) means, log10'd for the log chart.
struct SweepSeries {
    Method method = Method::kUniform;
    std::vector<std::size_t> dims;
    std::vector<double> values;
};
std::vector<SweepSeries> dimension_sweep(std::span<const AggregateCell> cells, bool log_scale);

/// CSV header `method,d,n,seed_count,mean_discrepancy,std_discrepancy`,
/// floats with 6 significant digits.
std::string render_csv(std::span<const AggregateCell> cells);
std::string render_svg(std::span<const AggregateCell> cells, bool log_scale);

enum class ReportFormat { kCsv, kSvg };

/// Writes `summary.csv`, and for kSvg also `discrepancy_vs_d_linear.svg` and
/// `discrepancy_vs_d_log.svg`, into `out_dir`. Returns the written paths.
std::vector<std::filesystem::path> emit_report(std::span<const AggregateCell> cells,
                                               const std::filesystem::path& out_dir, ReportFormat format);

}  // namespace sfsfd
