#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sfsfd/design.hpp"
#include "sfsfd/random.hpp"

namespace sfsfd {

using Complex = std::complex<double>;

/// Masses of m equal-width cells partitioning [0,1].
class ProbabilityMassFunction {
public:
    /// Throws std::invalid_argument if empty, any mass is negative or
    /// non-finite, or the masses do not sum to 1 within `tolerance`.
    explicit ProbabilityMassFunction(std::vector<double> masses, double tolerance = 1e-12);

    static ProbabilityMassFunction uniform(std::size_t m);

    std::size_t cells() const noexcept { return masses_.size(); }
    std::span<const double> masses() const noexcept { return masses_; }
    double operator[](std::size_t i) const noexcept { return masses_[i]; }

private:
    std::vector<double> masses_;
};

/// Element-wise square roots of a pmf; unit 2-norm.
class SqrtMassVector {
public:
    explicit SqrtMassVector(std::vector<double> amplitudes, double tolerance = 1e-12);

    std::size_t size() const noexcept { return amplitudes_.size(); }
    std::span<const double> amplitudes() const noexcept { return amplitudes_; }

private:
    std::vector<double> amplitudes_;
};

/// m complex coefficients on the unit sphere of C^m.
class FourierCoefficientVector {
public:
    explicit FourierCoefficientVector(std::vector<Complex> coefficients, double tolerance = 1e-12);

    std::size_t size() const noexcept { return coefficients_.size(); }
    std::span<const Complex> coefficients() const noexcept { return coefficients_; }
    const Complex& operator[](std::size_t i) const noexcept { return coefficients_[i]; }

private:
    std::vector<Complex> coefficients_;
};

/// 2m - 1 angles in [0, 2pi]. Out-of-range entries are clamped on
/// construction and reported through was_clamped().
class EulerAngleVector {
public:
    explicit EulerAngleVector(std::vector<double> angles);

    /// All-zero angles for a sphere in C^m (maps to c = e_0).
    static EulerAngleVector zeros(std::size_t m);

    std::size_t size() const noexcept { return angles_.size(); }
    /// Number of complex coefficients this vector parametrizes.
    std::size_t complex_dim() const noexcept { return (angles_.size() + 1) / 2; }
    std::span<const double> angles() const noexcept { return angles_; }
    bool was_clamped() const noexcept { return clamped_; }

    bool operator==(const EulerAngleVector& o) const { return angles_ == o.angles_; }

private:
    std::vector<double> angles_;
    bool clamped_ = false;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

SqrtMassVector sqrt_transform(const ProbabilityMassFunction& pmf);

/// Unitary DFT: c_k = m^{-1/2} sum_j q_j exp(-2 pi i jk / m).
FourierCoefficientVector forward_dft(const SqrtMassVector& q);
/// Unitary DFT of an arbitrary complex vector.
std::vector<Complex> forward_dft(std::span<const Complex> x);
/// Unitary inverse DFT: q_j = m^{-1/2} sum_k c_k exp(+2 pi i jk / m).
std::vector<Complex> inverse_dft(std::span<const Complex> c);
inline std::vector<Complex> inverse_dft(const FourierCoefficientVector& c) {
    return inverse_dft(c.coefficients());
}

/// Hyperspherical map from 2m - 1 angles onto the unit sphere in R^{2m},
/// packed pairwise into C^m:
///   v_j    = sin(t_1)...sin(t_{j-1}) cos(t_j),   j = 1..2m-1
///   v_{2m} = sin(t_1)...sin(t_{2m-1})
///   c_t    = v_{2t+1} + i v_{2t+2}  (1-based v, 0-based t)
FourierCoefficientVector angles_to_coefficients(const EulerAngleVector& theta);

/// Inverse of angles_to_coefficients via atan2 of trailing norms. The first
/// 2m - 2 angles land in [0, pi], the last in [0, 2pi). When the trailing
/// norm from position j onwards is zero, angles j..2m-1 are set to 0.
EulerAngleVector coefficients_to_angles(const FourierCoefficientVector& c);

/// masses_i = |(IDFT c)_i|^2. Sums to 1 by Parseval.
ProbabilityMassFunction coefficients_to_pmf(const FourierCoefficientVector& c);

/// Composite used by the optimizer: angles -> coefficients -> pmf.
inline ProbabilityMassFunction angles_to_pmf(const EulerAngleVector& theta) {
    return coefficients_to_pmf(angles_to_coefficients(theta));
}

/// n x d design with every coordinate drawn independently from the pmf:
/// cell by inverse CDF, then uniform on [i/m, (i+1)/m).
DesignMatrix sample_design(const ProbabilityMassFunction& pmf, std::size_t n, std::size_t d,
                           RandomStream& rng);

}  // namespace sfsfd
