#include "sfsfd/pdf_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sfsfd {

using nlohmann::json;

std::string to_json_string(const PdfDocument& doc) {
    json j;
    j["m"] = doc.pmf.cells();
    j["masses"] = std::vector<double>(doc.pmf.masses().begin(), doc.pmf.masses().end());
    j["angles"] = doc.angles ? std::vector<double>(doc.angles->angles().begin(), doc.angles->angles().end())
                             : std::vector<double>{};
    j["meta"] = {{"n", doc.meta.n},
                 {"d", doc.meta.d},
                 {"seed", doc.meta.seed},
                 {"objective_value", doc.meta.objective_value}};
    return j.dump(2) + "\n";
}

PdfDocument parse_pdf_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("pdf file is not valid JSON: ") + e.what());
    }
    try {
        const auto m = j.at("m").get<std::size_t>();
        auto masses = j.at("masses").get<std::vector<double>>();
        if (masses.size() != m) {
            throw std::runtime_error("pdf file: \"m\" is " + std::to_string(m) + " but \"masses\" has " +
                                     std::to_string(masses.size()) + " entries");
        }
        // Masses written by to_json_string round-trip exactly; the slack
        // admits hand-written files with 12-digit decimals.
        PdfDocument doc{ProbabilityMassFunction(std::move(masses), 1e-9), std::nullopt, {}};
        if (j.contains("angles")) {
            auto angles = j.at("angles").get<std::vector<double>>();
            if (!angles.empty()) {
                if (angles.size() != 2 * m - 1) {
                    throw std::runtime_error("pdf file: expected 2m-1 = " + std::to_string(2 * m - 1) +
                                             " angles, got " + std::to_string(angles.size()));
                }
                doc.angles = EulerAngleVector(std::move(angles));
            }
        }
        if (j.contains("meta")) {
            const auto& meta = j.at("meta");
            doc.meta.n = meta.value("n", std::size_t{0});
            doc.meta.d = meta.value("d", std::size_t{0});
            doc.meta.seed = meta.value("seed", std::uint64_t{0});
            doc.meta.objective_value = meta.value("objective_value", 0.0);
        }
        return doc;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("pdf file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("pdf file: ") + e.what());
    }
}

void write_pdf_file(const std::filesystem::path& path, const PdfDocument& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json_string(doc);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

PdfDocument read_pdf_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pdf file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pdf_document(ss.str());
}

}  // namespace sfsfd
