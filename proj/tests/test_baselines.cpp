#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sfsfd/baselines.hpp"
#include "sfsfd/discrepancy.hpp"
#include "sfsfd/harness.hpp"

using namespace sfsfd;

namespace {

// Textbook Sobol: direction integers from the recurrence, point i is the XOR
// of the directions selected by the bits of gray(i).
std::vector<std::vector<double>> naive_sobol(std::size_t n, std::size_t d) {
    const auto& table = DirectionTable::builtin();
    std::vector<std::vector<std::uint64_t>> v(d, std::vector<std::uint64_t>(33));
    for (unsigned b = 1; b <= 32; ++b) v[0][b] = std::uint64_t{1} << (32 - b);
    for (std::size_t k = 1; k < d; ++k) {
        const auto& e = table.entry(k + 1);
        const unsigned s = e.degree;
        std::vector<std::uint64_t> m(33);
        for (unsigned i = 1; i <= s; ++i) m[i] = e.m[i - 1];
        for (unsigned i = s + 1; i <= 32; ++i) {
            std::uint64_t mi = m[i - s] ^ (m[i - s] << s);
            for (unsigned j = 1; j < s; ++j) {
                if ((e.polynomial >> (s - 1 - j)) & 1u) mi ^= m[i - j] << j;
            }
            m[i] = mi;
        }
        for (unsigned b = 1; b <= 32; ++b) v[k][b] = m[b] << (32 - b);
    }
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t g = i ^ (i >> 1);
        for (std::size_t k = 0; k < d; ++k) {
            std::uint64_t x = 0;
            for (unsigned b = 0; b < 32; ++b)
                if ((g >> b) & 1u) x ^= v[k][b + 1];
            pts[i][k] = std::ldexp(static_cast<double>(x), -32);
        }
    }
    return pts;
}

}  // namespace

TEST_CASE("sobol first points") {
    const auto x = sobol_design(4, 2, 0, SobolMode::kUnscrambled);
    const std::vector<double> expect{0.0, 0.0, 0.5, 0.5, 0.75, 0.25, 0.25, 0.75};
    CHECK(std::vector<double>(x.data().begin(), x.data().end()) == expect);
}

TEST_CASE("sobol matches the textbook construction") {
    for (std::size_t d : {1u, 5u, 30u, 200u}) {
        CAPTURE(d);
        const std::size_t n = d > 100 ? 64 : 300;
        const auto x = sobol_design(n, d, 0, SobolMode::kUnscrambled);
        const auto ref = naive_sobol(n, d);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) mismatches += x(i, k) != ref[i][k];
        CHECK(mismatches == 0);
    }
}

TEST_CASE("sobol 1D projections are dyadically balanced") {
    for (SobolMode mode : {SobolMode::kUnscrambled, SobolMode::kDigitalShift, SobolMode::kLinearScrambleShift}) {
        for (unsigned k = 0; k <= 8; ++k) {
            const std::size_t n = std::size_t{1} << k;
            const std::size_t d = 30;
            const auto x = sobol_design(n, d, 17 + k, mode);
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<int> count(n, 0);
                for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(x(i, j) * n)];
                CHECK(std::all_of(count.begin(), count.end(), [](int c) { return c == 1; }));
            }
        }
    }
}

TEST_CASE("zero shift equals the unscrambled sequence") {
    SobolEngine shifted(7, std::vector<std::uint32_t>(7, 0u));
    SobolEngine plain(7, SobolMode::kUnscrambled, 99);
    std::vector<double> a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        shifted.next(a);
        plain.next(b);
        CHECK(a == b);
    }
}

TEST_CASE("explicit shift XORs the bits") {
    SobolEngine e(1, std::vector<std::uint32_t>{0x80000000u});
    std::vector<double> p(1);
    e.next(p);
    CHECK(p[0] == 0.5);
    e.next(p);
    CHECK(p[0] == 0.0);
}

TEST_CASE("randomized sobol is seed dependent and reproducible") {
    for (SobolMode mode : {SobolMode::kDigitalShift, SobolMode::kLinearScrambleShift}) {
        CHECK(sobol_design(32, 4, 1, mode) == sobol_design(32, 4, 1, mode));
        CHECK_FALSE(sobol_design(32, 4, 1, mode) == sobol_design(32, 4, 2, mode));
    }
}

TEST_CASE("sobol discrepancy values at n = 100") {
    const auto x30 = sobol_design(100, 30, 0, SobolMode::kUnscrambled);
    CHECK(centered_l2_discrepancy(x30) == doctest::Approx(25.54997713).epsilon(1e-8));
    const auto x5 = sobol_design(100, 5, 0, SobolMode::kUnscrambled);
    CHECK(centered_l2_discrepancy(x5) == doctest::Approx(0.0017137).epsilon(1e-4));
}

TEST_CASE("direction table parser") {
    const auto t = DirectionTable::parse(std::string_view(
        "d s a m_i\n"
        "2 1 0 1\n"
        "# comment\n"
        "\n"
        "3 2 1 1 3\n"
        "4 3 1 1 3 1\n"));
    REQUIRE(t.max_dimension() == 4);
    CHECK(t.entry(3).degree == 2);
    CHECK(t.entry(3).polynomial == 1);
    CHECK(t.entry(4).m == std::vector<std::uint32_t>{1, 3, 1});

    // A custom table drives the engine: dims 1..3 agree with the builtin one.
    SobolEngine mine(3, SobolMode::kUnscrambled, 0, t);
    SobolEngine ref(3, SobolMode::kUnscrambled, 0);
    std::vector<double> a(3), b(3);
    for (int i = 0; i < 64; ++i) {
        mine.next(a);
        ref.next(b);
        CHECK(a == b);
    }

    auto fails_on_line = [](const char* text, const char* line) {
        try {
            DirectionTable::parse(std::string_view(text));
            FAIL("no error for: " << text);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(line) != std::string::npos);
        }
    };
    fails_on_line("2 1 0 1\n4 2 1 1 3\n", "line 2");
    fails_on_line("2 1 0 2\n", "line 1");
    fails_on_line("2 1 0 1\n3 2 1 1 5\n", "line 2");
    fails_on_line("2 1 0 1\n3 2 2 1 3\n", "line 2");
    fails_on_line("2 1 0 1\n3 2 1 1\n", "line 2");
    fails_on_line("2 1 0 1 1\n", "line 1");
    fails_on_line("2 x 0 1\n", "line 1");
}

TEST_CASE("builtin table covers 1000 dimensions") {
    const auto& t = DirectionTable::builtin();
    CHECK(t.max_dimension() == 1000);
    CHECK(t.entry(30).m == std::vector<std::uint32_t>{1, 1, 3, 9, 25, 29, 41});
    CHECK_NOTHROW(sobol_design(2, 1000, 0));
    try {
        sobol_design(2, 1001, 0);
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("1000") != std::string::npos);
    }
}

TEST_CASE("sobol mode names") {
    for (SobolMode m : {SobolMode::kUnscrambled, SobolMode::kDigitalShift, SobolMode::kLinearScrambleShift})
        CHECK(parse_sobol_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_sobol_mode("owen"), std::invalid_argument);
}

TEST_CASE("latin hypercube stratification") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rng(seed);
        const std::size_t n = 1 + seed % 37, d = 1 + seed % 9;
        const auto x = latin_hypercube_design(n, d, rng);
        for (std::size_t k = 0; k < d; ++k) {
            std::set<std::size_t> cells;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = x(i, k);
                const auto c = static_cast<std::size_t>(std::floor(v * static_cast<double>(n)));
                CHECK(v >= static_cast<double>(c) / n);
                CHECK(v < static_cast<double>(c + 1) / n);
                cells.insert(c);
            }
            CHECK(cells.size() == n);
            CHECK(*cells.rbegin() == n - 1);
        }
    }
    RandomStream rng(3);
    const auto one = latin_hypercube_design(1, 4, rng);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(one(0, k) >= 0.0);
        CHECK(one(0, k) < 1.0);
    }
}

TEST_CASE("uniform design reproducibility and range") {
    RandomStream a(8), b(8), c(9);
    const auto xa = uniform_random_design(50, 3, a);
    CHECK(xa == uniform_random_design(50, 3, b));
    CHECK_FALSE(xa == uniform_random_design(50, 3, c));
    for (double v : xa.data()) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    RandomStream r(1);
    CHECK_THROWS_AS(uniform_random_design(0, 3, r), std::invalid_argument);
    CHECK_THROWS_AS(latin_hypercube_design(3, 0, r), std::invalid_argument);
}

TEST_CASE("distance to the centre concentrates as d grows") {
    // E||x - 1/2||^2 = d/12 for uniform points.
    const std::vector<std::size_t> dims{1, 12, 200};
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    const auto sweep = concentration_sweep(dims, 500, seeds);
    REQUIRE(sweep.size() == 3);
    for (const auto& p : sweep) {
        CAPTURE(p.d);
        CHECK(p.mean_radius_sq == doctest::Approx(static_cast<double>(p.d) / 12.0).epsilon(0.05));
        CHECK_FALSE(p.degenerate);
    }
    CHECK(sweep[1].relative_std_radius < sweep[0].relative_std_radius);
    CHECK(sweep[2].relative_std_radius < sweep[1].relative_std_radius);
    // Var (x - 1/2)^2 = 1/180 per coordinate, so at d = 12 std(r)/mean(r) is about 0.13.
    CHECK(sweep[1].relative_std_radius > 0.05);
    CHECK(sweep[1].relative_std_radius < 0.3);

    const std::vector<std::uint64_t> one_seed{1};
    const auto single = concentration_sweep(std::vector<std::size_t>{5}, 1, one_seed);
    CHECK(single[0].degenerate);
    CHECK(single[0].relative_std_radius == 0.0);
}
