#include "sfsfd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "sfsfd/baselines.hpp"
#include "sfsfd/random.hpp"
#include "sfsfd/sfsfd.hpp"
#include "sfsfd/summation.hpp"

namespace sfsfd {

using nlohmann::json;

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::kSfsfd: return "sfsfd";
        case Method::kLhs: return "lhs";
        case Method::kSobol: return "sobol";
        case Method::kUniform: return "uniform";
    }
    return "uniform";
}

Method parse_method(std::string_view name) {
    if (name == "sfsfd") return Method::kSfsfd;
    if (name == "lhs") return Method::kLhs;
    if (name == "sobol") return Method::kSobol;
    if (name == "uniform") return Method::kUniform;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected sfsfd, lhs, sobol, uniform)");
}

namespace {

std::string flags_string(const VariantFlags& flags) {
    std::string out;
    for (const auto& [k, v] : flags) {
        if (!out.empty()) out += ',';
        out += k + '=' + v;
    }
    return out;
}

auto sort_key(const ExperimentRecord& r) {
    return std::make_tuple(static_cast<int>(r.method), r.d, r.n, r.seed, flags_string(r.variant_flags));
}

std::string format_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace

std::string ExperimentRecord::key() const {
    return std::string(to_string(method)) + '|' + std::to_string(d) + '|' + std::to_string(n) + '|' +
           std::to_string(seed) + '|' + flags_string(variant_flags);
}

VariantFlags variant_flags_for(Method method, const GridConfig& config) {
    VariantFlags flags{{"discrepancy", std::string(to_string(config.variant))}};
    if (method == Method::kSobol) flags["sobol_mode"] = std::string(to_string(config.sobol_mode));
    if (method == Method::kSfsfd) {
        flags["budget"] = std::to_string(config.budget);
        flags["m"] = std::to_string(config.m);
        flags["a_initial"] = std::to_string(config.a_initial);
        flags["a_period"] = std::to_string(config.a_growth_period);
    }
    return flags;
}

std::uint64_t cell_seed(Method method, std::size_t d, std::size_t n, std::uint64_t seed) {
    return derive_seed(seed, {hash_tag(to_string(method)), static_cast<std::uint64_t>(d),
                              static_cast<std::uint64_t>(n)});
}

ExperimentRecord run_cell(Method method, std::size_t d, std::size_t n, std::uint64_t seed,
                          const GridConfig& config) {
    ExperimentRecord rec;
    rec.method = method;
    rec.d = d;
    rec.n = n;
    rec.seed = seed;
    rec.variant_flags = variant_flags_for(method, config);

    const auto started = std::chrono::steady_clock::now();
    try {
        const std::uint64_t stream = cell_seed(method, d, n, seed);
        switch (method) {
            case Method::kUniform: {
                RandomStream rng(stream);
                rec.discrepancy = centered_l2_discrepancy(uniform_random_design(n, d, rng), config.variant);
                break;
            }
            case Method::kLhs: {
                RandomStream rng(stream);
                rec.discrepancy = centered_l2_discrepancy(latin_hypercube_design(n, d, rng), config.variant);
                break;
            }
            case Method::kSobol:
                rec.discrepancy = centered_l2_discrepancy(sobol_design(n, d, stream, config.sobol_mode), config.variant);
                break;
            case Method::kSfsfd: {
                ObjectiveSpec spec;
                spec.n = n;
                spec.d = d;
                spec.m = config.m;
                spec.a_initial = config.a_initial;
                spec.a_growth_period = config.a_growth_period;
                spec.max_iterations = config.budget;
                spec.seed = stream;
                spec.rho_begin = config.rho_begin;
                spec.rho_end = config.rho_end;
                spec.variant = config.variant;
                const SfsfdResult result = run_sfsfd(spec);
                RandomStream rng(derive_seed(stream, {hash_tag("score")}));
                rec.discrepancy = centered_l2_discrepancy(sample_design(result.pmf, n, d, rng), config.variant);
                rec.metrics["objective_estimate"] = result.trace.rescored_objective;
                rec.metrics["initial_objective"] = result.trace.initial_objective();
                rec.metrics["best_objective"] = result.trace.best_objective;
                rec.metrics["evaluations"] = static_cast<double>(result.trace.iterates.size());
                break;
            }
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.discrepancy = std::numeric_limits<double>::quiet_NaN();
        rec.metrics.clear();
    }
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

std::string to_json_line(const ExperimentRecord& r) {
    json j;
    j["method"] = std::string(to_string(r.method));
    j["d"] = r.d;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["discrepancy"] = r.error ? json(nullptr) : json(r.discrepancy);
    j["variant_flags"] = r.variant_flags;
    j["metrics"] = r.metrics;
    if (r.error) j["error"] = *r.error;
    return j.dump();
}

ExperimentRecord parse_record_line(const std::string& line) {
    const json j = json::parse(line);
    ExperimentRecord r;
    r.method = parse_method(j.at("method").get<std::string>());
    r.d = j.at("d").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.discrepancy = j.at("discrepancy").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : j.at("discrepancy").get<double>();
    r.variant_flags = j.value("variant_flags", VariantFlags{});
    r.metrics = j.value("metrics", std::map<std::string, double>{});
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    if (!r.error && !(r.discrepancy >= 0.0)) throw std::runtime_error("record has no valid discrepancy");
    return r;
}

RecordStore::RecordStore(std::filesystem::path path) : path_(std::move(path)) {
    if (std::ifstream in{path_}) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                ExperimentRecord r = parse_record_line(line);
                by_key_[r.key()] = std::move(r);
            } catch (const std::exception& e) {
                // A torn final line from an interrupted append is dropped; the
                // cell is simply recomputed.
                std::fprintf(stderr, "warning: %s:%zu: skipping unreadable record (%s)\n", path_.string().c_str(),
                             line_no, e.what());
            }
        }
    }
    if (std::ifstream in{timings_path()}) {
        std::string line;
        while (std::getline(in, line)) {
            try {
                const json j = json::parse(line);
                auto it = by_key_.find(j.at("key").get<std::string>());
                if (it != by_key_.end()) it->second.wall_time_seconds = j.at("wall_time_seconds").get<double>();
            } catch (const std::exception&) {
                // timings are informational only
            }
        }
    }
}

std::filesystem::path RecordStore::timings_path() const {
    auto p = path_;
    p.replace_extension(".timings.jsonl");
    return p;
}

bool RecordStore::contains_completed(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = by_key_.find(key);
    return it != by_key_.end() && !it->second.error;
}

void RecordStore::append(const ExperimentRecord& record) {
    std::lock_guard lock(mutex_);
    if (!path_.parent_path().empty()) std::filesystem::create_directories(path_.parent_path());
    {
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw std::runtime_error("cannot append to " + path_.string());
        out << to_json_line(record) << '\n' << std::flush;
    }
    {
        std::ofstream out(timings_path(), std::ios::app | std::ios::binary);
        out << json{{"key", record.key()}, {"wall_time_seconds", record.wall_time_seconds}}.dump() << '\n';
    }
    by_key_[record.key()] = record;
}

std::vector<ExperimentRecord> RecordStore::records() const {
    std::lock_guard lock(mutex_);
    std::vector<ExperimentRecord> out;
    out.reserve(by_key_.size());
    for (const auto& [key, r] : by_key_) out.push_back(r);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    return out;
}

void RecordStore::finalize() {
    const auto all = records();
    std::lock_guard lock(mutex_);
    if (!path_.parent_path().empty()) std::filesystem::create_directories(path_.parent_path());
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        for (const auto& r : all) out << to_json_line(r) << '\n';
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
}

GridRunSummary run_grid(const GridAxes& axes, const GridConfig& config, RecordStore& store) {
    if (axes.methods.empty() || axes.dims.empty() || axes.sizes.empty() || axes.seeds.empty()) {
        throw std::invalid_argument("benchmark grid axes must all be nonempty");
    }
    struct Cell {
        Method method;
        std::size_t d, n;
        std::uint64_t seed;
    };
    GridRunSummary summary;
    std::vector<Cell> pending;
    for (Method method : axes.methods) {
        for (std::size_t d : axes.dims) {
            for (std::size_t n : axes.sizes) {
                for (std::uint64_t seed : axes.seeds) {
                    ExperimentRecord probe;
                    probe.method = method;
                    probe.d = d;
                    probe.n = n;
                    probe.seed = seed;
                    probe.variant_flags = variant_flags_for(method, config);
                    if (store.contains_completed(probe.key())) {
                        ++summary.skipped;
                    } else {
                        pending.push_back({method, d, n, seed});
                    }
                }
            }
        }
    }
    if (config.max_new_cells && pending.size() > *config.max_new_cells) {
        pending.resize(*config.max_new_cells);
        summary.interrupted = true;
    }

    const auto count = static_cast<std::ptrdiff_t>(pending.size());
    const int workers = static_cast<int>(std::max<std::size_t>(1, config.workers));
    std::size_t failed = 0;
    std::string append_error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1) reduction(+ : failed)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const Cell& c = pending[static_cast<std::size_t>(i)];
        const ExperimentRecord rec = run_cell(c.method, c.d, c.n, c.seed, config);
        if (rec.error) ++failed;
        try {
            store.append(rec);
        } catch (const std::exception& e) {
#pragma omp critical(sfsfd_append_error)
            append_error = e.what();
        }
    }
    if (!append_error.empty()) throw std::runtime_error(append_error);
    summary.computed = pending.size();
    summary.failed = failed;
    store.finalize();
    return summary;
}

std::vector<AggregateCell> aggregate(std::span<const ExperimentRecord> records) {
    using GroupKey = std::tuple<int, std::size_t, std::size_t>;
    struct Group {
        VariantFlags flags;
        std::vector<double> values;
    };
    std::map<GroupKey, Group> groups;
    for (const auto& r : records) {
        if (r.error) continue;
        const GroupKey key{static_cast<int>(r.method), r.d, r.n};
        auto [it, inserted] = groups.try_emplace(key, Group{r.variant_flags, {}});
        if (!inserted && it->second.flags != r.variant_flags) {
            throw std::invalid_argument("records for " + std::string(to_string(r.method)) + " d=" +
                                        std::to_string(r.d) + " n=" + std::to_string(r.n) +
                                        " mix variant flags {" + flags_string(it->second.flags) + "} and {" +
                                        flags_string(r.variant_flags) + "}");
        }
        it->second.values.push_back(r.discrepancy);
    }

    std::vector<AggregateCell> cells;
    for (auto& [key, g] : groups) {
        // Sorted values make the sums independent of record order.
        std::sort(g.values.begin(), g.values.end());
        AggregateCell c;
        c.method = static_cast<Method>(std::get<0>(key));
        c.d = std::get<1>(key);
        c.n = std::get<2>(key);
        c.seed_count = g.values.size();
        c.variant_flags = g.flags;
        c.mean_discrepancy = compensated_sum(g.values) / static_cast<double>(c.seed_count);
        if (c.seed_count > 1) {
            CompensatedSum ss;
            for (double v : g.values) ss.add((v - c.mean_discrepancy) * (v - c.mean_discrepancy));
            c.std_discrepancy = std::sqrt(ss.value() / static_cast<double>(c.seed_count - 1));
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

std::vector<ConcentrationPoint> concentration_sweep(std::span<const std::size_t> dims, std::size_t n,
                                                    std::span<const std::uint64_t> seeds) {
    if (dims.empty()) throw std::invalid_argument("concentration sweep needs at least one dimension");
    if (n == 0 || seeds.empty()) throw std::invalid_argument("concentration sweep needs n >= 1 and a seed");
    std::vector<ConcentrationPoint> out;
    for (std::size_t d : dims) {
        CompensatedSum r2_sum, r_sum;
        std::vector<double> radii;
        for (std::uint64_t seed : seeds) {
            RandomStream rng(derive_seed(seed, {hash_tag("concentration"), static_cast<std::uint64_t>(d),
                                                static_cast<std::uint64_t>(n)}));
            const DesignMatrix x = uniform_random_design(n, d, rng);
            for (std::size_t i = 0; i < x.size(); ++i) {
                double r2 = 0.0;
                for (double v : x.row(i)) r2 += (v - 0.5) * (v - 0.5);
                r2_sum.add(r2);
                radii.push_back(std::sqrt(r2));
                r_sum.add(radii.back());
            }
        }
        const auto count = static_cast<double>(radii.size());
        ConcentrationPoint p;
        p.d = d;
        p.mean_radius_sq = r2_sum.value() / count;
        if (radii.size() == 1) {
            p.degenerate = true;
        } else {
            const double mean_r = r_sum.value() / count;
            CompensatedSum var;
            for (double r : radii) var.add((r - mean_r) * (r - mean_r));
            p.relative_std_radius = std::sqrt(var.value() / count) / mean_r;
        }
        out.push_back(p);
    }
    return out;
}

std::vector<SweepSeries> dimension_sweep(std::span<const AggregateCell> cells, bool log_scale) {
    std::map<int, std::map<std::size_t, std::vector<double>>> by_method;
    for (const auto& c : cells) by_method[static_cast<int>(c.method)][c.d].push_back(c.mean_discrepancy);
    std::vector<SweepSeries> out;
    for (const auto& [method, per_dim] : by_method) {
        SweepSeries s;
        s.method = static_cast<Method>(method);
        for (const auto& [d, means] : per_dim) {
            const double avg = compensated_sum(means) / static_cast<double>(means.size());
            s.dims.push_back(d);
            s.values.push_back(log_scale ? std::log10(avg) : avg);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string render_csv(std::span<const AggregateCell> cells) {
    std::string out = "method,d,n,seed_count,mean_discrepancy,std_discrepancy\n";
    for (const auto& c : cells) {
        out += std::string(to_string(c.method)) + ',' + std::to_string(c.d) + ',' + std::to_string(c.n) + ',' +
               std::to_string(c.seed_count) + ',' + format_g(c.mean_discrepancy, 6) + ',' +
               format_g(c.std_discrepancy, 6) + '\n';
    }
    return out;
}

std::string render_svg(std::span<const AggregateCell> cells, bool log_scale) {
    const auto series = dimension_sweep(cells, log_scale);
    constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 150, kTop = 30, kBottom = 50;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.dims.size(); ++i) {
            if (!std::isfinite(s.values[i])) continue;
            xmin = std::min(xmin, static_cast<double>(s.dims[i]));
            xmax = std::max(xmax, static_cast<double>(s.dims[i]));
            ymin = std::min(ymin, s.values[i]);
            ymax = std::max(ymax, s.values[i]);
        }
    }
    if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 1, xmax += 1;
    if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };
    auto f2 = [](double v) { return format_g(std::round(v * 100.0) / 100.0, 10); };

    static constexpr const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#7f7f7f"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << f2(kLeft + plot_w / 2) << "\" y=\"18\" text-anchor=\"middle\">"
        << (log_scale ? "log10 mean discrepancy vs dimension" : "mean discrepancy vs dimension") << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double y = ymin + (ymax - ymin) * t / 4.0;
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << f2(py(y) + 4) << "\" text-anchor=\"end\">"
            << format_g(y, 3) << "</text>\n";
    }
    std::vector<std::size_t> ticks;
    for (const auto& s : series) ticks.insert(ticks.end(), s.dims.begin(), s.dims.end());
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    for (std::size_t d : ticks) {
        svg << "<text x=\"" << f2(px(static_cast<double>(d))) << "\" y=\"" << f2(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << d << "</text>\n";
    }
    svg << "<text x=\"" << f2(kLeft + plot_w / 2) << "\" y=\"" << f2(kHeight - 10)
        << "\" text-anchor=\"middle\">dimension d</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[static_cast<int>(s.method) % 4];
        svg << "<polyline class=\"series\" data-method=\"" << to_string(s.method) << "\" fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.dims.size(); ++i) {
            if (!std::isfinite(s.values[i])) continue;
            svg << (i ? " " : "") << f2(px(static_cast<double>(s.dims[i]))) << ',' << f2(py(s.values[i]));
        }
        svg << "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        svg << "<line class=\"legend\" data-method=\"" << to_string(s.method) << "\" x1=\""
            << f2(kLeft + plot_w + 10) << "\" y1=\"" << f2(ly) << "\" x2=\"" << f2(kLeft + plot_w + 30)
            << "\" y2=\"" << f2(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << f2(kLeft + plot_w + 36) << "\" y=\"" << f2(ly + 4) << "\">" << to_string(s.method)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::filesystem::path> emit_report(std::span<const AggregateCell> cells,
                                               const std::filesystem::path& out_dir, ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& p, const std::string& body) {
        std::ofstream out(p, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << body;
        if (!out) throw std::runtime_error("failed writing " + p.string());
        written.push_back(p);
    };
    write(out_dir / "summary.csv", render_csv(cells));
    if (format == ReportFormat::kSvg) {
        write(out_dir / "discrepancy_vs_d_linear.svg", render_svg(cells, false));
        write(out_dir / "discrepancy_vs_d_log.svg", render_svg(cells, true));
    }
    return written;
}

}  // namespace sfsfd
