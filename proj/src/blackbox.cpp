#include "sfsfd/blackbox.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfsfd {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Simplex acceptability constants from Powell's COBYLA.
constexpr double kAlpha = 0.25;  // min vertex-to-face distance, in units of rho
constexpr double kBeta = 2.1;    // max edge length from the best vertex, in units of rho
constexpr double kGamma = 0.5;   // geometry step length, in units of rho
constexpr double kDelta = 1.1;   // distance weighting when choosing a vertex to drop

// argmin g.s  s.t. |s| <= rho, lo <= s <= hi  (lo <= 0 <= hi).
// KKT solution s(t) = clamp(-t g, lo, hi) with |s(t)| = rho, found by bisection on t.
Vec trust_region_step(const Vec& g, const Vec& lo, const Vec& hi, double rho) {
    const Eigen::Index n = g.size();
    const double gnorm = g.norm();
    if (gnorm == 0.0 || !std::isfinite(gnorm)) return Vec::Zero(n);

    auto step_at = [&](double t) {
        Vec s(n);
        for (Eigen::Index i = 0; i < n; ++i) s[i] = std::clamp(-t * g[i], lo[i], hi[i]);
        return s;
    };
    Vec far(n);
    for (Eigen::Index i = 0; i < n; ++i) far[i] = g[i] > 0.0 ? lo[i] : (g[i] < 0.0 ? hi[i] : 0.0);
    if (far.norm() <= rho) return far;

    double t_lo = 0.0;
    double t_hi = rho / gnorm;
    while (step_at(t_hi).norm() < rho) t_hi *= 2.0;
    for (int it = 0; it < 200 && t_hi - t_lo > 1e-15 * t_hi; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        (step_at(mid).norm() <= rho ? t_lo : t_hi) = mid;
    }
    return step_at(t_lo);
}

class SimplexSolver {
public:
    SimplexSolver(const BlackboxObjective& f, const BoxBounds& bounds, const BlackboxOptions& options)
        : f_(f), options_(options), rho_(options.rho_begin) {
        const auto n = static_cast<Eigen::Index>(bounds.lower.size());
        lower_ = Eigen::Map<const Vec>(bounds.lower.data(), n);
        upper_ = Eigen::Map<const Vec>(bounds.upper.data(), n);
    }

    BlackboxResult run(std::span<const double> x0) {
        const Eigen::Index n = lower_.size();
        Vec start(n);
        for (Eigen::Index i = 0; i < n; ++i) start[i] = x0[static_cast<std::size_t>(i)];
        start = clamp(start);

        double f0 = 0.0;
        evaluate(start, f0);  // budget >= 1 is validated by the caller
        points_.push_back(start);
        values_.push_back(f0);
        best_ = 0;
        if (!seed_simplex()) return finish(TerminationStatus::kBudgetExhausted);

        bool poor_step = false;
        while (true) {
            if (!factorize()) {
                if (!seed_simplex()) return finish(TerminationStatus::kBudgetExhausted);
                continue;
            }
            if (poor_step || degenerate()) {
                poor_step = false;
                if (!acceptable()) {
                    if (!geometry_step()) return finish(TerminationStatus::kBudgetExhausted);
                    continue;
                }
                if (!reduce_rho()) return finish(TerminationStatus::kTrustRegionConverged);
            }

            const Vec& xb = points_[best_];
            const Vec s = trust_region_step(gradient_, lower_ - xb, upper_ - xb, rho_);
            const double predicted = -gradient_.dot(s);
            if (s.norm() < 0.5 * rho_ || !(predicted > 0.0)) {
                if (!acceptable()) {
                    if (!geometry_step()) return finish(TerminationStatus::kBudgetExhausted);
                } else if (!reduce_rho()) {
                    return finish(TerminationStatus::kTrustRegionConverged);
                }
                continue;
            }

            const Vec trial = clamp(xb + s);
            double ft = 0.0;
            if (!evaluate(trial, ft)) return finish(TerminationStatus::kBudgetExhausted);
            const double ratio = (values_[best_] - ft) / predicted;
            accept_trial(trial, ft, s);
            poor_step = ratio < 0.1;
        }
    }

private:
    Vec clamp(Vec x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

    bool evaluate(const Vec& x, double& value) {
        if (evaluations_ >= options_.max_evaluations) return false;
        ++evaluations_;
        value = f_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
        if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
        return true;
    }

    void add_vertex(Vec x, double value) {
        points_.push_back(std::move(x));
        values_.push_back(value);
        if (value < values_[best_]) best_ = points_.size() - 1;
    }

    // Surrounds the best point with rho-steps along each axis, stepping
    // backwards where the forward step would leave the box.
    bool seed_simplex() {
        const Vec base = points_[best_];
        const double fbase = values_[best_];
        points_.assign(1, base);
        values_.assign(1, fbase);
        best_ = 0;
        for (Eigen::Index j = 0; j < base.size(); ++j) {
            const double up = upper_[j] - base[j];
            const double down = base[j] - lower_[j];
            Vec y = base;
            if (up >= rho_ || up >= down) {
                y[j] += std::min(rho_, up);
            } else {
                y[j] -= std::min(rho_, down);
            }
            double fy = 0.0;
            if (!evaluate(y, fy)) return false;
            add_vertex(std::move(y), fy);
        }
        return true;
    }

    // Builds the edge matrix D (rows x_j - x_best), its inverse W, the
    // linear-model gradient and the acceptability measures.
    bool factorize() {
        const Eigen::Index n = lower_.size();
        others_.clear();
        for (std::size_t j = 0; j < points_.size(); ++j) {
            if (j != best_) others_.push_back(j);
        }
        Mat edges(n, n);
        Vec df(n);
        for (Eigen::Index l = 0; l < n; ++l) {
            const std::size_t j = others_[static_cast<std::size_t>(l)];
            edges.row(l) = (points_[j] - points_[best_]).transpose();
            df[l] = values_[j] - values_[best_];
        }
        Eigen::FullPivLU<Mat> lu(edges);
        if (!lu.isInvertible()) return false;
        inverse_ = lu.inverse();
        if (!inverse_.allFinite()) return false;
        gradient_ = inverse_ * df;
        if (!gradient_.allFinite()) {
            // Infinite objective values at some vertex: move away from them.
            for (Eigen::Index l = 0; l < n; ++l) {
                if (!std::isfinite(df[l])) df[l] = std::copysign(1e300, df[l]);
            }
            gradient_ = inverse_ * df;
        }
        edge_length_.resize(n);
        face_distance_.resize(n);
        for (Eigen::Index l = 0; l < n; ++l) {
            edge_length_[l] = edges.row(l).norm();
            face_distance_[l] = 1.0 / inverse_.col(l).norm();
        }
        return true;
    }

    bool acceptable() const {
        return edge_length_.maxCoeff() <= kBeta * rho_ && face_distance_.minCoeff() >= kAlpha * rho_;
    }

    bool degenerate() const { return face_distance_.minCoeff() < 1e-8 * rho_; }

    // Replaces the worst-shaped vertex by a point gamma*rho from the best
    // vertex, normal to the opposite face.
    bool geometry_step() {
        Eigen::Index l = 0;
        if (edge_length_.maxCoeff() > kBeta * rho_) {
            edge_length_.maxCoeff(&l);
        } else {
            face_distance_.minCoeff(&l);
        }
        const Vec& xb = points_[best_];
        const Vec w = inverse_.col(l);
        const Vec dir = w / w.norm();
        const double len = kGamma * rho_;

        Vec plus = clamp(xb + len * dir);
        Vec minus = clamp(xb - len * dir);
        const double gain_plus = std::fabs(w.dot(plus - xb));
        const double gain_minus = std::fabs(w.dot(minus - xb));
        Vec candidate = gain_plus >= gain_minus ? plus : minus;
        const double ideal = len * w.norm();
        if (std::max(gain_plus, gain_minus) < 0.25 * ideal) {
            // Clamping flattened the step; use the axis the face normal leans on most.
            Eigen::Index k = 0;
            w.cwiseAbs().maxCoeff(&k);
            const double up = upper_[k] - xb[k];
            const double down = xb[k] - lower_[k];
            candidate = xb;
            candidate[k] += up >= down ? std::min(len, up) : -std::min(len, down);
        }
        double fc = 0.0;
        if (!evaluate(candidate, fc)) return false;
        const std::size_t j = others_[static_cast<std::size_t>(l)];
        points_[j] = std::move(candidate);
        values_[j] = fc;
        if (fc < values_[best_]) best_ = j;
        return true;
    }

    // Chooses which vertex the trial point replaces: the one whose removal
    // keeps the largest simplex volume, weighted towards distant vertices.
    void accept_trial(const Vec& trial, double ft, const Vec& step) {
        const bool improved = ft < values_[best_];
        const Vec& anchor = improved ? trial : points_[best_];
        const Vec lambda = inverse_.transpose() * step;

        auto weight = [&](const Vec& vertex) {
            const double r = (vertex - anchor).norm() / (kDelta * rho_);
            return std::max(1.0, r * r);
        };

        double best_score = 0.0;
        std::size_t drop = points_.size();
        for (Eigen::Index l = 0; l < lambda.size(); ++l) {
            const std::size_t j = others_[static_cast<std::size_t>(l)];
            const double score = std::fabs(lambda[l]) * weight(points_[j]);
            if (score > best_score) {
                best_score = score;
                drop = j;
            }
        }
        if (improved) {
            const double score = std::fabs(1.0 - lambda.sum()) * weight(points_[best_]);
            if (score > best_score) {
                best_score = score;
                drop = best_;
            }
        } else if (best_score <= 1.0) {
            return;
        }
        if (drop == points_.size()) return;
        points_[drop] = trial;
        values_[drop] = ft;
        if (improved) best_ = drop;
    }

    bool reduce_rho() {
        if (rho_ <= options_.rho_end) return false;
        rho_ *= 0.5;
        if (rho_ <= 1.5 * options_.rho_end) rho_ = options_.rho_end;
        return true;
    }

    BlackboxResult finish(TerminationStatus status) const {
        BlackboxResult r;
        r.x.assign(points_[best_].data(), points_[best_].data() + points_[best_].size());
        r.value = values_[best_];
        r.evaluations = evaluations_;
        r.status = status;
        return r;
    }

    const BlackboxObjective& f_;
    BlackboxOptions options_;
    Vec lower_, upper_;
    double rho_;
    std::size_t evaluations_ = 0;

    std::vector<Vec> points_;
    std::vector<double> values_;
    std::size_t best_ = 0;

    std::vector<std::size_t> others_;
    Mat inverse_;
    Vec gradient_;
    Vec edge_length_;
    Vec face_distance_;
};

}  // namespace

BlackboxResult minimize_blackbox(const BlackboxObjective& f, std::span<const double> x0,
                                 const BoxBounds& bounds, const BlackboxOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("minimize_blackbox: empty starting point");
    if (bounds.lower.size() != n || bounds.upper.size() != n) {
        throw std::invalid_argument("minimize_blackbox: bounds do not match the starting point");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds.lower[i] <= bounds.upper[i])) {
            throw std::invalid_argument("minimize_blackbox: lower bound exceeds upper bound");
        }
    }
    if (options.max_evaluations == 0) throw std::invalid_argument("minimize_blackbox: budget must be >= 1");
    if (!(options.rho_begin > 0.0) || !(options.rho_end > 0.0) || options.rho_end > options.rho_begin) {
        throw std::invalid_argument("minimize_blackbox: need 0 < rho_end <= rho_begin");
    }
    SimplexSolver solver(f, bounds, options);
    return solver.run(x0);
}

}  // namespace sfsfd
