#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coop_lms::chebyshev {

/// Periodic over-relaxation factors tuned to the interval [a, b]:
///
///   omega_k = 1 / ( (b+a)/2 + (b-a)/2 * cos((2k+1) pi / (2T)) ),  k = 0..T-1
///
/// i.e. the reciprocals of the roots of the Chebyshev polynomial of degree T
/// mapped affinely onto [a, b]. Factors are computed once at construction.
class ChebyshevSchedule {
public:
    /// Throws ConfigError unless 0 < a < b and period >= 1.
    ChebyshevSchedule(double a, double b, std::size_t period);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t period() const noexcept { return factors_.size(); }
    std::span<const double> factors() const noexcept { return factors_; }

    /// Periodic extension: factors[t mod T].
    double factor_at(std::size_t t) const noexcept { return factors_[t % factors_.size()]; }

private:
    double a_;
    double b_;
    std::vector<double> factors_;
};

ChebyshevSchedule chebyshev_factors(double a, double b, std::size_t period);

inline double factor_at(const ChebyshevSchedule& s, std::size_t t) { return s.factor_at(t); }

/// beta(lambda) = prod_k (1 - omega_k lambda). Its values at the eigenvalues
/// of B = I - Q are the eigenvalues of one full period of the relaxed update.
double beta_eval(double lambda, const ChebyshevSchedule& s);

inline constexpr std::size_t kDefaultBetaGrid = 10000;

/// max |beta| over `grid_points` uniformly spaced samples of [lo, hi],
/// endpoints included. Throws ConfigError unless lo < hi and grid_points >= 2.
double beta_max_abs(const ChebyshevSchedule& s, double lo, double hi,
                    std::size_t grid_points = kDefaultBetaGrid);

}  // namespace coop_lms::chebyshev
