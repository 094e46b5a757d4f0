// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>

namespace pinching
{

struct BisectionResult
{
    double x;
    double residual; // f(x)
    std::size_t iterations;
    bool converged; // |f(x)| < tolerance
};

// Bisection for a root of a non-decreasing function on [lo, hi] with
// f(lo) <= 0 <= f(hi). Stops once |f(mid)| < tolerance or the interval
// cannot be split any further in double precision.
template <class Fn>
BisectionResult bisect_increasing(const Fn &f, double lo, double hi, double tolerance, std::size_t max_iterations = 200)
{
    double f_lo = f(lo), f_hi = f(hi);
    if (std::abs(f_lo) < tolerance)
        return {lo, f_lo, 0, true};
    if (std::abs(f_hi) < tolerance)
        return {hi, f_hi, 0, true};

    BisectionResult best{std::abs(f_lo) < std::abs(f_hi) ? lo : hi,
                         std::abs(f_lo) < std::abs(f_hi) ? f_lo : f_hi, 0, false};
    for (std::size_t it = 1; it <= max_iterations; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f_mid = f(mid);
        best.iterations = it;
        if (std::abs(f_mid) < std::abs(best.residual))
        {
            best.x = mid;
            best.residual = f_mid;
        }
        if (std::abs(f_mid) < tolerance)
        {
            best.converged = true;
            return best;
        }
        if (f_mid < 0.0)
            lo = mid, f_lo = f_mid;
        else
            hi = mid, f_hi = f_mid;
    }
    return best;
}

} // namespace pinching
