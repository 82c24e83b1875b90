#include "sfsfd/sobol.hpp"

#include <bit>
#include <cctype>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sfsfd/random.hpp"

namespace sfsfd {

namespace detail {
// Generated from data/sobol_joe_kuo_1000.txt at configure time.
extern const char* const kJoeKuoTable;
}  // namespace detail

namespace {

[[noreturn]] void table_error(std::size_t line, const std::string& what) {
    throw std::runtime_error("direction table line " + std::to_string(line) + ": " + what);
}

}  // namespace

DirectionTable DirectionTable::parse(std::istream& in) {
    DirectionTable table;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (!seen_data && !std::isdigit(static_cast<unsigned char>(line[first]))) continue;  // header
        seen_data = true;

        std::istringstream fields(line);
        long long dim = 0, degree = 0, poly = 0;
        if (!(fields >> dim >> degree >> poly)) table_error(line_no, "expected 'dim degree polynomial m_1..m_s'");
        const std::size_t expected_dim = table.entries_.size() + 2;
        if (dim < 0 || static_cast<std::size_t>(dim) != expected_dim) {
            table_error(line_no, "dimension " + std::to_string(dim) + " out of sequence, expected " +
                                     std::to_string(expected_dim));
        }
        if (degree < 1 || degree > 31) table_error(line_no, "degree must be in [1, 31]");
        if (poly < 0 || poly >= (1LL << (degree - 1))) {
            table_error(line_no, "polynomial " + std::to_string(poly) + " needs more than degree-1 bits");
        }
        DirectionEntry e;
        e.dim = static_cast<std::size_t>(dim);
        e.degree = static_cast<unsigned>(degree);
        e.polynomial = static_cast<std::uint32_t>(poly);
        for (long long i = 1; i <= degree; ++i) {
            long long mi = 0;
            if (!(fields >> mi)) table_error(line_no, "expected " + std::to_string(degree) + " initial m values");
            if (mi <= 0 || mi % 2 == 0 || mi >= (1LL << i)) {
                table_error(line_no, "m_" + std::to_string(i) + " = " + std::to_string(mi) +
                                         " must be odd and below 2^" + std::to_string(i));
            }
            e.m.push_back(static_cast<std::uint32_t>(mi));
        }
        std::string extra;
        if (fields >> extra) table_error(line_no, "trailing field '" + extra + "'");
        table.entries_.push_back(std::move(e));
    }
    return table;
}

DirectionTable DirectionTable::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

const DirectionTable& DirectionTable::builtin() {
    static const DirectionTable table = parse(std::string_view(detail::kJoeKuoTable));
    return table;
}

std::string_view to_string(SobolMode mode) noexcept {
    switch (mode) {
        case SobolMode::kUnscrambled: return "unscrambled";
        case SobolMode::kDigitalShift: return "shift";
        case SobolMode::kLinearScrambleShift: return "scramble";
    }
    return "shift";
}

SobolMode parse_sobol_mode(std::string_view name) {
    if (name == "unscrambled") return SobolMode::kUnscrambled;
    if (name == "shift") return SobolMode::kDigitalShift;
    if (name == "scramble") return SobolMode::kLinearScrambleShift;
    throw std::invalid_argument("unknown Sobol mode '" + std::string(name) +
                                "' (expected unscrambled, shift or scramble)");
}

void SobolEngine::load_directions(const DirectionTable& table) {
    const std::size_t dim = directions_.size();
    if (dim == 0) throw std::invalid_argument("Sobol dimension must be >= 1");
    if (dim > table.max_dimension()) {
        throw std::invalid_argument("Sobol dimension " + std::to_string(dim) + " exceeds the supported maximum of " +
                                    std::to_string(table.max_dimension()));
    }
    for (int i = 0; i < kBits; ++i) directions_[0][i] = std::uint32_t{1} << (kBits - 1 - i);
    for (std::size_t k = 1; k < dim; ++k) {
        const DirectionEntry& e = table.entry(k + 1);
        auto& v = directions_[k];
        const int s = static_cast<int>(e.degree);
        for (int i = 0; i < std::min(s, kBits); ++i) v[i] = e.m[i] << (kBits - 1 - i);
        for (int i = s; i < kBits; ++i) {
            v[i] = v[i - s] ^ (v[i - s] >> s);
            for (int j = 1; j < s; ++j) {
                if ((e.polynomial >> (s - 1 - j)) & 1U) v[i] ^= v[i - j];
            }
        }
    }
}

SobolEngine::SobolEngine(std::size_t dim, SobolMode mode, std::uint64_t seed, const DirectionTable& table)
    : directions_(dim), state_(dim, 0), shift_(dim, 0) {
    load_directions(table);
    if (mode == SobolMode::kUnscrambled) return;

    RandomStream rng(seed);
    if (mode == SobolMode::kLinearScrambleShift) {
        // Lower-triangular bit matrix with unit diagonal, rows ordered from the
        // most significant output bit. Row r's mask has bit (31 - c) set for
        // each column c <= r that is 1.
        for (auto& v : directions_) {
            std::array<std::uint32_t, kBits> rows{};
            for (int r = 0; r < kBits; ++r) {
                const std::uint32_t diag = std::uint32_t{1} << (kBits - 1 - r);
                const std::uint32_t above = r == 0 ? 0 : ~((diag << 1) - 1);  // columns c < r
                rows[r] = (static_cast<std::uint32_t>(rng.bits()) & above) | diag;
            }
            for (auto& word : v) {
                std::uint32_t scrambled = 0;
                for (int r = 0; r < kBits; ++r) {
                    if (std::popcount(word & rows[r]) & 1) scrambled |= std::uint32_t{1} << (kBits - 1 - r);
                }
                word = scrambled;
            }
        }
    }
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng.bits() >> 32);
}

SobolEngine::SobolEngine(std::size_t dim, std::vector<std::uint32_t> shift, const DirectionTable& table)
    : directions_(dim), state_(dim, 0), shift_(std::move(shift)) {
    if (shift_.size() != dim) throw std::invalid_argument("Sobol shift needs one word per dimension");
    load_directions(table);
}

void SobolEngine::next(std::span<double> out) {
    if (out.size() != dim()) throw std::invalid_argument("Sobol output span has the wrong size");
    if (index_ >= (std::uint64_t{1} << kBits)) throw std::out_of_range("Sobol sequence exhausted (2^32 points)");
    if (index_ > 0) {
        // Gray code: flip the direction of the lowest zero bit of index-1.
        const int c = std::countr_one(index_ - 1);
        for (std::size_t k = 0; k < dim(); ++k) state_[k] ^= directions_[k][c];
    }
    for (std::size_t k = 0; k < dim(); ++k) out[k] = static_cast<double>(state_[k] ^ shift_[k]) * 0x1.0p-32;
    ++index_;
}

}  // namespace sfsfd
