#pragma once

#include "zm/types.hpp"

namespace zm {

/// 4th-order central difference of f along coordinate j.
template <class F>
auto central_diff(const F& f, const Vec& x, int j, double step) {
    Vec xp1 = x, xm1 = x, xp2 = x, xm2 = x;
    xp1(j) += step;
    xm1(j) -= step;
    xp2(j) += 2.0 * step;
    xm2(j) -= 2.0 * step;
    return ((8.0 * (f(xp1) - f(xm1)) - (f(xp2) - f(xm2))) / (12.0 * step)).eval();
}

/// 4th-order central second difference of scalar f along coordinate j.
template <class F>
double central_second_diff(const F& f, const Vec& x, int j, double step) {
    Vec xp1 = x, xm1 = x, xp2 = x, xm2 = x;
    xp1(j) += step;
    xm1(j) -= step;
    xp2(j) += 2.0 * step;
    xm2(j) -= 2.0 * step;
    return (-f(xp2) + 16.0 * f(xp1) - 30.0 * f(x) + 16.0 * f(xm1) - f(xm2)) /
           (12.0 * step * step);
}

/// Gradient of a scalar function by central differences.
template <class F>
Vec fd_gradient(const F& f, const Vec& x, double step) {
    Vec g(x.size());
    for (int j = 0; j < x.size(); ++j) {
        Vec xp1 = x, xm1 = x, xp2 = x, xm2 = x;
        xp1(j) += step;
        xm1(j) -= step;
        xp2(j) += 2.0 * step;
        xm2(j) -= 2.0 * step;
        g(j) = (8.0 * (f(xp1) - f(xm1)) - (f(xp2) - f(xm2))) / (12.0 * step);
    }
    return g;
}

}  // namespace zm
