#include "zm/geometry.hpp"

#include <cmath>
#include <string>

#include "zm/errors.hpp"

namespace zm {

ConformalFactor::ConformalFactor(int n, ValueFn value, GradFn gradient)
    : n_(n), value_(std::move(value)), gradient_(std::move(gradient)) {
    if (n < 3) throw DomainError("conformal factor needs n >= 3");
}

ConformalFactor ConformalFactor::identity(int n) {
    return ConformalFactor(
        n, [](const Vec&) { return 1.0; }, [n](const Vec&) { return Vec(Vec::Zero(n)); });
}

double ConformalFactor::scale(const Vec& x) const {
    return std::pow(value_(x), 2.0 / (n_ - 2.0));
}

Vec ConformalFactor::log_scale_gradient(const Vec& x) const {
    return (2.0 / (n_ - 2.0)) * gradient_(x) / value_(x);
}

double ConformalFactor::volume_density(const Vec& x) const {
    return std::pow(scale(x), static_cast<double>(n_));
}

namespace {

ConformalFactor stereographic_factor(int n) {
    const double e = (n - 2.0) / 2.0;
    return ConformalFactor(
        n,
        [e](const Vec& x) { return std::pow(2.0 / (1.0 + x.squaredNorm()), e); },
        [e](const Vec& x) {
            const double q = 1.0 + x.squaredNorm();
            // d/dx (2/q)^e = e (2/q)^{e-1} * (-2/q^2) * 2x
            return Vec(-4.0 * e * std::pow(2.0 / q, e - 1.0) / (q * q) * x);
        });
}

}  // namespace

StereographicChart::StereographicChart(int n) : n_(n), factor_(stereographic_factor(n)) {}

double StereographicChart::h(const Vec& x) const { return factor_.value(x); }

Vec StereographicChart::grad_h(const Vec& x) const { return factor_.gradient(x); }

double StereographicChart::scale(const Vec& x) const { return 2.0 / (1.0 + x.squaredNorm()); }

double StereographicChart::round_density(const Vec& x) const {
    return std::pow(scale(x), static_cast<double>(n_));
}

Vec StereographicChart::to_sphere(const Vec& x) const {
    const double r2 = x.squaredNorm();
    Vec p(n_ + 1);
    p.head(n_) = 2.0 * x / (1.0 + r2);
    p(n_) = (1.0 - r2) / (1.0 + r2);
    return p;
}

StereographicChart make_chart(int n) {
    if (n < 3)
        throw DomainError("stereographic chart needs n >= 3 (conformal exponent 4/(n-2)), got " +
                          std::to_string(n));
    return StereographicChart(n);
}

double sphere_volume(int n) {
    return 2.0 * std::pow(kPi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
}

SphereConstants sphere_constants(int n) {
    if (n < 3) throw DomainError("sphere constants need n >= 3");
    SphereConstants c;
    c.n = n;
    c.vol = sphere_volume(n);
    const double v2n = std::pow(c.vol, 2.0 / n);
    c.yamabe = n * (n - 1.0) * v2n;
    c.sobolev = n * (n - 2.0) / 4.0 * v2n;
    c.a_n = 4.0 * (n - 1.0) / (n - 2.0);
    c.v_n = n / 2;
    c.rhs_bound = c.yamabe / (4.0 * std::sqrt(static_cast<double>(c.v_n)));
    return c;
}

}  // namespace zm
