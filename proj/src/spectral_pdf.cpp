#include "sfsfd/spectral_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sfsfd/summation.hpp"

namespace sfsfd {

namespace {

void check_unit_norm(double norm2, double tolerance, const char* what) {
    if (!(std::fabs(norm2 - 1.0) <= tolerance)) {
        throw std::invalid_argument(std::string(what) + " must have unit 2-norm (squared norm " +
                                    std::to_string(norm2) + ")");
    }
}

// exp(sign * 2 pi i * r / m) with r reduced mod m first.
Complex twiddle(std::size_t r, std::size_t m, double sign) {
    return std::polar(1.0, sign * kTwoPi * static_cast<double>(r % m) / static_cast<double>(m));
}

std::vector<Complex> unitary_dft(std::span<const Complex> x, double sign) {
    const std::size_t m = x.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<Complex> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) acc += x[j] * twiddle(j * k, m, sign);
        out[k] = acc * scale;
    }
    return out;
}

}  // namespace

ProbabilityMassFunction::ProbabilityMassFunction(std::vector<double> masses, double tolerance)
    : masses_(std::move(masses)) {
    if (masses_.empty()) throw std::invalid_argument("pmf needs at least one cell");
    for (double p : masses_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("pmf masses must be finite and nonnegative");
        }
    }
    const double total = compensated_sum(masses_);
    if (!(std::fabs(total - 1.0) <= tolerance)) {
        throw std::invalid_argument("pmf masses sum to " + std::to_string(total) + ", not 1");
    }
}

ProbabilityMassFunction ProbabilityMassFunction::uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("pmf needs at least one cell");
    return ProbabilityMassFunction(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SqrtMassVector::SqrtMassVector(std::vector<double> amplitudes, double tolerance)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw std::invalid_argument("sqrt-mass vector is empty");
    CompensatedSum n2;
    for (double q : amplitudes_) {
        if (!std::isfinite(q) || q < 0.0) {
            throw std::invalid_argument("sqrt-mass amplitudes must be finite and nonnegative");
        }
        n2.add(q * q);
    }
    check_unit_norm(n2.value(), tolerance, "sqrt-mass vector");
}

FourierCoefficientVector::FourierCoefficientVector(std::vector<Complex> coefficients, double tolerance)
    : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw std::invalid_argument("coefficient vector is empty");
    CompensatedSum n2;
    for (const Complex& c : coefficients_) n2.add(std::norm(c));
    check_unit_norm(n2.value(), tolerance, "Fourier coefficient vector");
}

EulerAngleVector::EulerAngleVector(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty() || angles_.size() % 2 == 0) {
        throw std::invalid_argument("Euler angle vector must have odd length 2m-1, got " +
                                    std::to_string(angles_.size()));
    }
    for (double& t : angles_) {
        if (std::isnan(t)) throw std::invalid_argument("Euler angle is NaN");
        if (t < 0.0 || t > kTwoPi) {
            t = std::clamp(t, 0.0, kTwoPi);
            clamped_ = true;
        }
    }
}

EulerAngleVector EulerAngleVector::zeros(std::size_t m) {
    if (m == 0) throw std::invalid_argument("complex dimension must be positive");
    return EulerAngleVector(std::vector<double>(2 * m - 1, 0.0));
}

SqrtMassVector sqrt_transform(const ProbabilityMassFunction& pmf) {
    std::vector<double> q(pmf.cells());
    std::transform(pmf.masses().begin(), pmf.masses().end(), q.begin(),
                   [](double p) { return std::sqrt(p); });
    return SqrtMassVector(std::move(q));
}

std::vector<Complex> forward_dft(std::span<const Complex> x) { return unitary_dft(x, -1.0); }

std::vector<Complex> inverse_dft(std::span<const Complex> c) { return unitary_dft(c, +1.0); }

FourierCoefficientVector forward_dft(const SqrtMassVector& q) {
    std::vector<Complex> x(q.amplitudes().begin(), q.amplitudes().end());
    return FourierCoefficientVector(forward_dft(std::span<const Complex>(x)));
}

FourierCoefficientVector angles_to_coefficients(const EulerAngleVector& theta) {
    const auto t = theta.angles();
    const std::size_t reals = t.size() + 1;
    std::vector<double> v(reals);
    double sin_prefix = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        v[j] = sin_prefix * std::cos(t[j]);
        sin_prefix *= std::sin(t[j]);
    }
    v[reals - 1] = sin_prefix;

    std::vector<Complex> c(reals / 2);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = Complex(v[2 * i], v[2 * i + 1]);
    return FourierCoefficientVector(std::move(c));
}

EulerAngleVector coefficients_to_angles(const FourierCoefficientVector& c) {
    const std::size_t reals = 2 * c.size();
    std::vector<double> v(reals);
    for (std::size_t i = 0; i < c.size(); ++i) {
        v[2 * i] = c[i].real();
        v[2 * i + 1] = c[i].imag();
    }
    // tail[j] = ||v_{j..end}||, accumulated from the back.
    std::vector<double> tail(reals + 1, 0.0);
    for (std::size_t j = reals; j-- > 0;) tail[j] = std::hypot(tail[j + 1], v[j]);

    std::vector<double> theta(reals - 1, 0.0);
    for (std::size_t j = 0; j + 1 < reals; ++j) {
        if (tail[j] == 0.0) break;  // singular: remaining angles stay 0
        if (j + 2 == reals) {
            double last = std::atan2(v[j + 1], v[j]);
            if (last < 0.0) last += kTwoPi;
            theta[j] = last;
        } else {
            theta[j] = std::atan2(tail[j + 1], v[j]);
        }
    }
    return EulerAngleVector(std::move(theta));
}

ProbabilityMassFunction coefficients_to_pmf(const FourierCoefficientVector& c) {
    const std::vector<Complex> q = inverse_dft(c);
    std::vector<double> masses(q.size());
    std::transform(q.begin(), q.end(), masses.begin(), [](const Complex& z) { return std::norm(z); });
    return ProbabilityMassFunction(std::move(masses));
}

DesignMatrix sample_design(const ProbabilityMassFunction& pmf, std::size_t n, std::size_t d,
                           RandomStream& rng) {
    if (n == 0 || d == 0) throw std::invalid_argument("sample size and dimension must be positive");
    const std::size_t m = pmf.cells();

    // Cumulative masses; everything from the last positive cell on is pinned
    // to +inf so rounding can neither select an empty trailing cell nor run
    // off the end.
    std::vector<double> cdf(m);
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < m; ++i) {
        running += pmf[i];
        cdf[i] = running;
        if (pmf[i] > 0.0) last_positive = i;
    }
    for (std::size_t i = last_positive; i < m; ++i) cdf[i] = HUGE_VAL;

    const auto cells = static_cast<double>(m);
    std::vector<double> coords(n * d);
    for (double& x : coords) {
        const double u = rng.uniform();
        const auto cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        double value = (static_cast<double>(cell) + rng.uniform()) / cells;
        if (value >= 1.0) value = std::nextafter(1.0, 0.0);
        x = value;
    }
    return DesignMatrix::from_trusted(n, d, std::move(coords));
}

}  // namespace sfsfd
