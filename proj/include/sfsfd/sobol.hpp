#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace sfsfd {

/// One line of a Joe-Kuo direction-number table.
struct DirectionEntry {
    std::size_t dim = 0;
    unsigned degree = 0;            // s
    std::uint32_t polynomial = 0;   // a: interior coefficients, s-1 bits
    std::vector<std::uint32_t> m;   // m_1..m_s, m_i odd and < 2^i
};

/// Direction numbers for dimensions 2..max_dimension(); dimension 1 is the
/// van der Corput sequence and needs no entry.
///
/// Text format: one line per dimension, whitespace separated
///   dim degree polynomial m_1 ... m_degree
/// Blank lines, lines starting with '#', and a leading header line whose first
/// token is not a number are ignored. Dimensions must be consecutive from 2.
class DirectionTable {
public:
    /// Throws std::runtime_error naming the 1-based line number of the first bad line.
    static DirectionTable parse(std::istream& in);
    static DirectionTable parse(std::string_view text);

    /// Joe-Kuo new-joe-kuo-6.21201 table, dimensions 1..1000, compiled in.
    static const DirectionTable& builtin();

    std::size_t max_dimension() const noexcept { return entries_.size() + 1; }
    /// dim in [2, max_dimension()].
    const DirectionEntry& entry(std::size_t dim) const { return entries_.at(dim - 2); }

private:
    std::vector<DirectionEntry> entries_;
};

enum class SobolMode {
    kUnscrambled,          // plain Gray-code Sobol, first point is the origin
    kDigitalShift,         // random XOR shift per dimension
    kLinearScrambleShift,  // random lower-triangular matrix scramble, then shift
};

std::string_view to_string(SobolMode mode) noexcept;
/// Accepts "unscrambled", "shift", "scramble".
SobolMode parse_sobol_mode(std::string_view name);

/// Gray-code Sobol generator with 32-bit resolution.
class SobolEngine {
public:
    static constexpr int kBits = 32;

    /// Throws std::invalid_argument if dim is 0 or exceeds the table, naming
    /// the supported maximum.
    SobolEngine(std::size_t dim, SobolMode mode, std::uint64_t seed,
                const DirectionTable& table = DirectionTable::builtin());

    /// Unscrambled directions with an explicit digital shift (one word per dimension).
    SobolEngine(std::size_t dim, std::vector<std::uint32_t> shift,
                const DirectionTable& table = DirectionTable::builtin());

    std::size_t dim() const noexcept { return directions_.size(); }
    std::uint64_t index() const noexcept { return index_; }

    /// Writes point `index()` into out (size dim()) and advances.
    void next(std::span<double> out);

    /// Direction integers v_1..v_32 for dimension k (0-based), after any scrambling.
    const std::array<std::uint32_t, kBits>& directions(std::size_t k) const { return directions_.at(k); }

private:
    void load_directions(const DirectionTable& table);

    std::vector<std::array<std::uint32_t, kBits>> directions_;
    std::vector<std::uint32_t> state_;
    std::vector<std::uint32_t> shift_;
    std::uint64_t index_ = 0;
};

}  // namespace sfsfd
