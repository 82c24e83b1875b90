#include "sfsfd/cli.hpp"

#include <charconv>
#include <filesystem>
#include <optional>
#include <set>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfsfd/baselines.hpp"
#include "sfsfd/discrepancy.hpp"
#include "sfsfd/harness.hpp"
#include "sfsfd/pdf_file.hpp"
#include "sfsfd/sfsfd.hpp"

namespace sfsfd::cli {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

class OutputFile {
public:
    explicit OutputFile(const std::string& path) : file_(path, std::ios::trunc | std::ios::binary) {
        if (!file_) throw std::runtime_error("cannot write " + path);
    }
    std::ostream& stream() { return file_; }

private:
    std::ofstream file_;
};

void write_design_csv(std::ostream& out, const DesignMatrix& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < x.dim(); ++k) {
            if (k) out << ',';
            out << fmt("%.17g", x(i, k));
        }
        out << '\n';
    }
}

// Splices values from a JSON config file into the argument list as long
// flags placed right after the subcommand name, skipping any flag given
// explicitly. Explicit flags therefore win over the file.
std::vector<std::string> merge_config(std::vector<std::string> args, const CLI::App& app) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args.front());
    } catch (const CLI::OptionNotFound&) {
        return args;
    }

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw std::runtime_error("config file " + path + " must hold a JSON object");

    auto given = [&](const std::string& flag) {
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };
    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || key == "config") {
            throw std::runtime_error("config file " + path + ": unknown setting '" + key + "' for " + args.front());
        }
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) injected.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ',';
                joined += item.is_string() ? item.get<std::string>() : item.dump();
            }
            injected.push_back(flag);
            injected.push_back(joined);
        } else {
            injected.push_back(flag);
            injected.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

struct OptimizeArgs {
    std::size_t n = 0, d = 0, m = 10, budget = 1000, a_initial = 50, a_period = 10;
    std::uint64_t seed = 0;
    double rho_begin = 0.5, rho_end = 1e-4;
    std::string variant = "classical";
    std::string out = "sfsfd_pdf.json";
    std::string trace;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
    ObjectiveSpec spec;
    spec.n = a.n;
    spec.d = a.d;
    spec.m = a.m;
    spec.max_iterations = a.budget;
    spec.a_initial = a.a_initial;
    spec.a_growth_period = a.a_period;
    spec.seed = a.seed;
    spec.rho_begin = a.rho_begin;
    spec.rho_end = a.rho_end;
    spec.variant = parse_discrepancy_variant(a.variant);
    const SfsfdResult result = run_sfsfd(spec);

    PdfDocument doc{result.pmf, result.trace.best_angles, {a.n, a.d, a.seed, result.trace.rescored_objective}};
    write_pdf_file(a.out, doc);

    std::string trace_path = a.trace;
    if (trace_path.empty()) {
        std::filesystem::path p(a.out);
        p.replace_extension(".trace.jsonl");
        trace_path = p.string();
    }
    OutputFile trace(trace_path);
    for (const auto& it : result.trace.iterates) {
        trace.stream() << nlohmann::json{{"iter", it.iteration}, {"a", it.replicates}, {"objective", it.objective}}.dump()
                       << '\n';
    }
    out << fmt("%.10g", result.trace.rescored_objective) << '\n';
    return 0;
}

struct SampleArgs {
    std::string method;
    std::size_t n = 0, d = 0;
    std::uint64_t seed = 0;
    bool unscrambled = false;
    std::string sobol_mode = "shift";
    std::string pdf;
    std::string out;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
    std::optional<DesignMatrix> design;
    const Method method = parse_method(a.method);
    const std::uint64_t stream = cell_seed(method, a.d, a.n, a.seed);
    switch (method) {
        case Method::kUniform: {
            RandomStream rng(stream);
            design = uniform_random_design(a.n, a.d, rng);
            break;
        }
        case Method::kLhs: {
            RandomStream rng(stream);
            design = latin_hypercube_design(a.n, a.d, rng);
            break;
        }
        case Method::kSobol:
            design = sobol_design(a.n, a.d, stream, a.unscrambled ? SobolMode::kUnscrambled : parse_sobol_mode(a.sobol_mode));
            break;
        case Method::kSfsfd: {
            if (a.pdf.empty()) throw std::invalid_argument("--method sfsfd needs --pdf <file written by optimize>");
            const PdfDocument doc = read_pdf_file(a.pdf);
            RandomStream rng(stream);
            design = sample_design(doc.pmf, a.n, a.d, rng);
            break;
        }
    }
    if (a.out.empty()) {
        write_design_csv(out, *design);
    } else {
        OutputFile file(a.out);
        write_design_csv(file.stream(), *design);
    }
    return 0;
}

int cmd_discrepancy(const std::string& path, const std::string& variant, std::ostream& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open design file " + path);
    const auto rows = read_design_csv(in);
    std::vector<double> coords;
    for (const auto& r : rows) coords.insert(coords.end(), r.begin(), r.end());
    const DesignMatrix design(rows.size(), rows.front().size(), std::move(coords));
    out << fmt("%.10g", centered_l2_discrepancy(design, parse_discrepancy_variant(variant))) << '\n';
    return 0;
}

struct BenchmarkArgs {
    std::string preset = "desk";
    std::vector<std::string> methods;
    std::vector<std::size_t> dims, sizes;
    std::optional<std::size_t> seeds, budget, a_initial, max_cells;
    std::size_t m = 10, a_period = 10, workers = 1;
    std::string variant = "classical";
    std::string sobol_mode = "unscrambled";
    std::string out = "benchmark_out";
    std::string format = "svg";
};

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
    GridAxes axes;
    GridConfig config;
    std::size_t seed_count = 0;
    if (a.preset == "desk") {
        axes.dims = {5, 20, 30};
        axes.sizes = {100};
        seed_count = 3;
        config.budget = 200;
        config.a_initial = 20;
    } else if (a.preset == "paper") {
        axes.dims = {5, 10, 15, 20, 25, 30};
        axes.sizes = {100, 200, 300, 400, 500};
        seed_count = 10;
        config.budget = 1000;
        config.a_initial = 50;
    } else {
        throw std::invalid_argument("unknown preset '" + a.preset + "' (expected desk or paper)");
    }
    axes.methods = {Method::kSfsfd, Method::kLhs, Method::kSobol, Method::kUniform};
    if (!a.methods.empty()) {
        axes.methods.clear();
        for (const auto& name : a.methods) axes.methods.push_back(parse_method(name));
    }
    if (!a.dims.empty()) axes.dims = a.dims;
    if (!a.sizes.empty()) axes.sizes = a.sizes;
    if (a.seeds) seed_count = *a.seeds;
    for (std::size_t s = 0; s < seed_count; ++s) axes.seeds.push_back(s);
    if (a.budget) config.budget = *a.budget;
    if (a.a_initial) config.a_initial = *a.a_initial;
    config.m = a.m;
    config.a_growth_period = a.a_period;
    config.variant = parse_discrepancy_variant(a.variant);
    config.sobol_mode = parse_sobol_mode(a.sobol_mode);
    config.workers = a.workers;
    config.max_new_cells = a.max_cells;
    if (a.format != "csv" && a.format != "svg") throw std::invalid_argument("--format must be csv or svg");

    const std::filesystem::path dir(a.out);
    RecordStore store(dir / "records.jsonl");
    const GridRunSummary summary = run_grid(axes, config, store);

    // Report only the requested grid, even if the store holds more.
    std::set<std::string> wanted;
    for (Method method : axes.methods)
        for (std::size_t d : axes.dims)
            for (std::size_t n : axes.sizes)
                for (std::uint64_t seed : axes.seeds) {
                    ExperimentRecord probe;
                    probe.method = method;
                    probe.d = d;
                    probe.n = n;
                    probe.seed = seed;
                    probe.variant_flags = variant_flags_for(method, config);
                    wanted.insert(probe.key());
                }
    std::vector<ExperimentRecord> records;
    std::size_t failed = 0;
    for (auto& r : store.records()) {
        if (!wanted.count(r.key())) continue;
        if (r.error) ++failed;
        records.push_back(std::move(r));
    }
    const auto cells = aggregate(records);
    emit_report(cells, dir, a.format == "svg" ? ReportFormat::kSvg : ReportFormat::kCsv);

    out << "computed " << summary.computed << " cells, skipped " << summary.skipped << " already stored";
    if (summary.interrupted) out << " (stopped early at --max-cells)";
    out << '\n' << render_csv(cells);
    if (failed) out << failed << " cell(s) failed; see " << store.path().string() << '\n';
    return failed ? 1 : 0;
}

}  // namespace

std::vector<std::vector<double>> read_design_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cell = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
            }
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": coordinate " + cell +
                                         " lies outside [0,1]");
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(rows.front().size()) + " columns, found " +
                                     std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("design file holds no points");
    return rows;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Space-filling designs from stochastically optimized Fourier coefficients of a 1D pmf"};
    app.name("sfsfd");
    app.require_subcommand(1);
    std::string config_path;

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "Optimize a pmf and write it with its trace");
    optimize->add_option("--n", opt.n, "Design size")->required()->check(CLI::PositiveNumber);
    optimize->add_option("--d", opt.d, "Dimension")->required()->check(CLI::PositiveNumber);
    optimize->add_option("--m", opt.m, "Number of pmf cells")->check(CLI::PositiveNumber)->capture_default_str();
    optimize->add_option("--seed", opt.seed, "Root random seed")->capture_default_str();
    optimize->add_option("--budget", opt.budget, "Objective evaluations")->check(CLI::PositiveNumber)->capture_default_str();
    optimize->add_option("--a-initial", opt.a_initial, "Initial replicates per evaluation")
        ->check(CLI::PositiveNumber)->capture_default_str();
    optimize->add_option("--a-period", opt.a_period, "Evaluations per replicate increment")
        ->check(CLI::PositiveNumber)->capture_default_str();
    optimize->add_option("--rho-begin", opt.rho_begin, "Initial trust radius (rad)")->capture_default_str();
    optimize->add_option("--rho-end", opt.rho_end, "Final trust radius (rad)")->capture_default_str();
    optimize->add_option("--variant", opt.variant, "Discrepancy variant: classical | squared-cross")->capture_default_str();
    optimize->add_option("--out", opt.out, "Output pmf JSON")->capture_default_str();
    optimize->add_option("--trace", opt.trace, "Output JSON-lines trace (default: <out>.trace.jsonl)");
    optimize->add_option("--config", config_path, "JSON file of flag values");

    SampleArgs smp;
    auto* sample = app.add_subcommand("sample", "Write an n x d design as headerless CSV");
    sample->add_option("--method", smp.method, "sfsfd | lhs | sobol | uniform")->required();
    sample->add_option("--n", smp.n, "Design size")->required()->check(CLI::PositiveNumber);
    sample->add_option("--d", smp.d, "Dimension")->required()->check(CLI::PositiveNumber);
    sample->add_option("--seed", smp.seed, "Random seed")->capture_default_str();
    sample->add_flag("--unscrambled", smp.unscrambled, "Sobol without randomization");
    sample->add_option("--sobol-mode", smp.sobol_mode, "unscrambled | shift | scramble")->capture_default_str();
    sample->add_option("--pdf", smp.pdf, "pmf JSON written by optimize (method sfsfd)");
    sample->add_option("--out", smp.out, "Output CSV (default: standard output)");
    sample->add_option("--config", config_path, "JSON file of flag values");

    std::string design_file;
    std::string disc_variant = "classical";
    auto* discrepancy = app.add_subcommand("discrepancy", "Print the centered L2 discrepancy of a CSV design");
    discrepancy->add_option("file", design_file, "Headerless CSV design")->required();
    discrepancy->add_option("--variant", disc_variant, "classical | squared-cross")->capture_default_str();
    discrepancy->add_option("--config", config_path, "JSON file of flag values");

    BenchmarkArgs bench;
    auto* benchmark = app.add_subcommand("benchmark", "Run the method x d x n x seed grid and report");
    benchmark->add_option("--preset", bench.preset, "desk | paper")->capture_default_str();
    benchmark->add_option("--methods", bench.methods, "Comma list of methods")->delimiter(',');
    benchmark->add_option("--dims", bench.dims, "Comma list of dimensions")->delimiter(',');
    benchmark->add_option("--sizes", bench.sizes, "Comma list of sample sizes")->delimiter(',');
    benchmark->add_option("--seeds", bench.seeds, "Number of seeds (0..k-1)");
    benchmark->add_option("--budget", bench.budget, "SF-SFD objective evaluations");
    benchmark->add_option("--a-initial", bench.a_initial, "SF-SFD initial replicates");
    benchmark->add_option("--a-period", bench.a_period, "SF-SFD replicate period")->capture_default_str();
    benchmark->add_option("--m", bench.m, "SF-SFD pmf cells")->capture_default_str();
    benchmark->add_option("--variant", bench.variant, "classical | squared-cross")->capture_default_str();
    benchmark->add_option("--sobol-mode", bench.sobol_mode, "unscrambled | shift | scramble")->capture_default_str();
    benchmark->add_option("--workers", bench.workers, "Concurrent grid cells")
        ->envname("SFSFD_WORKERS")->check(CLI::PositiveNumber)->capture_default_str();
    benchmark->add_option("--max-cells", bench.max_cells, "Stop after computing this many new cells");
    benchmark->add_option("--out", bench.out, "Output directory")->capture_default_str();
    benchmark->add_option("--format", bench.format, "csv | svg")->capture_default_str();
    benchmark->add_option("--config", config_path, "JSON file of flag values");

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args, app);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    try {
        if (*optimize) return cmd_optimize(opt, out);
        if (*sample) return cmd_sample(smp, out);
        if (*discrepancy) return cmd_discrepancy(design_file, disc_variant, out);
        if (*benchmark) return cmd_benchmark(bench, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace sfsfd::cli
