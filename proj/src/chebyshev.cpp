#include "coop_lms/chebyshev.hpp"

#include "coop_lms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coop_lms::chebyshev {

ChebyshevSchedule::ChebyshevSchedule(double a, double b, std::size_t period) : a_(a), b_(b) {
    if (!(a > 0.0)) throw ConfigError("chebyshev: interval lower end a must be positive");
    if (!(a < b)) throw ConfigError("chebyshev: need a < b");
    if (period < 1) throw ConfigError("chebyshev: period T must be at least 1");

    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const auto t = static_cast<double>(period);
    factors_.reserve(period);
    for (std::size_t k = 0; k < period; ++k) {
        const double angle = (2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi / (2.0 * t);
        factors_.push_back(1.0 / (mid + half * std::cos(angle)));
    }
}

ChebyshevSchedule chebyshev_factors(double a, double b, std::size_t period) {
    return ChebyshevSchedule(a, b, period);
}

double beta_eval(double lambda, const ChebyshevSchedule& s) {
    double prod = 1.0;
    for (double w : s.factors()) prod *= 1.0 - w * lambda;
    return prod;
}

double beta_max_abs(const ChebyshevSchedule& s, double lo, double hi, std::size_t grid_points) {
    if (!(lo < hi)) throw ConfigError("beta_max_abs: need lo < hi");
    if (grid_points < 2) throw ConfigError("beta_max_abs: need at least 2 grid points");
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    double best = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double lambda = i + 1 == grid_points ? hi : lo + step * static_cast<double>(i);
        best = std::max(best, std::abs(beta_eval(lambda, s)));
    }
    return best;
}

}  // namespace coop_lms::chebyshev
