#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sfsfd/spectral_pdf.hpp"

namespace sfsfd {

struct PdfMeta {
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t seed = 0;
    double objective_value = 0.0;
};

/// Persisted optimized pdf:
///   { "m": int, "masses": [...], "angles": [...],
///     "meta": { "n": int, "d": int, "seed": int, "objective_value": float } }
struct PdfDocument {
    ProbabilityMassFunction pmf;
    std::optional<EulerAngleVector> angles;
    PdfMeta meta;
};

std::string to_json_string(const PdfDocument& doc);
/// Throws std::runtime_error describing the first schema violation.
PdfDocument parse_pdf_document(const std::string& text);

void write_pdf_file(const std::filesystem::path& path, const PdfDocument& doc);
PdfDocument read_pdf_file(const std::filesystem::path& path);

}  // namespace sfsfd
