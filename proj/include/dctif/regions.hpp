#pragma once
// Pass / Processing / Saturation region boundaries for a target maximum error.
//
//   pass_end  = sup{ x >= 0 : x - tanh(x) <= eps }   (bisection)
//   sat_start = atanh(1 - eps) = 0.5 * ln((2 - eps) / eps)   (closed form)
//
// For eps large enough (~0.23 and above) the true pass_end overtakes
// sat_start; pass_end is then clamped to sat_start and the processing region
// is empty — the region guarantees alone bound the error in that regime.

#include <cmath>
#include <stdexcept>
#include <string>

namespace dctif {

enum class Region { Pass, Processing, Saturation };

struct RegionBoundaries {
    double eps_max = 0.0;
    double pass_end = 0.0;   // inclusive: x <= pass_end is Pass
    double sat_start = 0.0;  // inclusive: x >= sat_start is Saturation
};

inline double saturation_start_closed(double eps) {
    return 0.5 * std::log((2.0 - eps) / eps);
}

// Independent check of the closed form: bisect 1 - tanh(x) = eps.
inline double saturation_start_bisect(double eps) {
    double lo = 0.0, hi = 30.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - std::tanh(mid) >= eps)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace detail {
inline double pass_end_bisect(double eps) {
    // x - tanh(x) is strictly increasing for x > 0.
    double lo = 0.0, hi = 20.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - std::tanh(mid) <= eps)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}
}  // namespace detail

inline RegionBoundaries compute_boundaries(double eps_max) {
    if (!(eps_max > 0.0) || !(eps_max < 0.5))
        throw std::invalid_argument("eps_max must be in (0, 0.5), got " +
                                    std::to_string(eps_max));
    RegionBoundaries b;
    b.eps_max = eps_max;
    b.sat_start = saturation_start_closed(eps_max);
    b.pass_end = detail::pass_end_bisect(eps_max);
    if (b.pass_end > b.sat_start) b.pass_end = b.sat_start;  // empty processing region
    return b;
}

// Callers fold negative inputs by symmetry; x is expected >= 0. Boundary
// points land in the cheaper region (Pass wins at pass_end, Saturation at
// sat_start; Pass is checked first when the two coincide).
inline Region classify(double x, const RegionBoundaries& b) {
    if (x <= b.pass_end) return Region::Pass;
    if (x >= b.sat_start) return Region::Saturation;
    return Region::Processing;
}

}  // namespace dctif
