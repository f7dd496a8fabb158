#pragma once

// The conformal model pair: flat R^n chart (metric g0) and the round unit
// sphere g = h^{4/(n-2)} g0 via inverse stereographic projection.

#include <functional>
#include <iosfwd>
#include <vector>

#include "zm/types.hpp"

namespace zm {

/// Positive function H on the chart defining the metric g_H = H^{4/(n-2)} g0.
/// The local length scale rho = H^{2/(n-2)} rescales frames: E_bar = rho^{-1} E.
class ConformalFactor {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;

    ConformalFactor(int n, ValueFn value, GradFn gradient);

    /// H == 1: the flat metric itself.
    static ConformalFactor identity(int n);

    int dim() const { return n_; }
    double value(const Vec& x) const { return value_(x); }
    Vec gradient(const Vec& x) const { return gradient_(x); }

    /// rho = H^{2/(n-2)}
    double scale(const Vec& x) const;
    /// grad(log rho) = (2/(n-2)) grad(H)/H
    Vec log_scale_gradient(const Vec& x) const;
    /// dv_g / dx = rho^n = H^{2n/(n-2)}
    double volume_density(const Vec& x) const;

private:
    int n_;
    ValueFn value_;
    GradFn gradient_;
};

class StereographicChart {
public:
    explicit StereographicChart(int n);

    int dim() const { return n_; }
    /// h(x) = (2/(1+|x|^2))^{(n-2)/2}
    double h(const Vec& x) const;
    Vec grad_h(const Vec& x) const;
    /// rho(x) = 2/(1+|x|^2) = h^{2/(n-2)}
    double scale(const Vec& x) const;
    /// rho^n = h^{2n/(n-2)}
    double round_density(const Vec& x) const;
    /// Inverse stereographic projection into the unit sphere of R^{n+1}; the
    /// last coordinate is cos(chi) with chi the polar angle from x = 0.
    Vec to_sphere(const Vec& x) const;

    double scalar_curvature_round() const { return n_ * (n_ - 1.0); }
    double scalar_curvature_flat() const { return 0.0; }

    const ConformalFactor& factor() const { return factor_; }

private:
    int n_;
    ConformalFactor factor_;
};

/// Throws DomainError for n < 3 (the conformal exponent 4/(n-2) is singular).
StereographicChart make_chart(int n);

/// Volume of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

struct SphereConstants {
    int n = 0;
    double vol = 0.0;        ///< vol(S^n), radius 1
    double yamabe = 0.0;     ///< Y = n(n-1) vol^{2/n}
    double sobolev = 0.0;    ///< S_n = (n(n-2)/4) vol^{2/n}
    double a_n = 0.0;        ///< 4(n-1)/(n-2)
    int v_n = 0;             ///< floor(n/2)
    double rhs_bound = 0.0;  ///< Y / (4 sqrt(v_n))
};

SphereConstants sphere_constants(int n);

enum class Density { Flat, Round };

/// Tensor rule in hyperspherical coordinates pulled back to the chart.
///
/// chi in (0, pi) is the polar angle on S^n (Gauss-Legendre), mapped to the
/// chart radius r = tan(chi/2); theta_1..theta_{n-2} in (0, pi) are
/// Gauss-Legendre; phi in [0, 2pi) is the trapezoid rule with 2*resolution
/// points. Nodes are ordered with chi outermost and phi innermost.
struct QuadratureRule {
    int n = 0;
    int resolution = 0;
    Density density = Density::Round;
    std::vector<Vec> nodes;
    std::vector<double> round_weights;  ///< integrate f dv_g (round)
    std::vector<double> flat_weights;   ///< integrate f dx

    // 1-D factors; weights include the hyperspherical measure.
    std::vector<double> chi, chi_weights;
    std::vector<std::vector<double>> theta, theta_weights;
    std::vector<double> phi, phi_weights;

    std::size_t size() const { return nodes.size(); }
    const std::vector<double>& weights() const {
        return density == Density::Round ? round_weights : flat_weights;
    }
    const std::vector<double>& weights(Density d) const {
        return d == Density::Round ? round_weights : flat_weights;
    }
};

/// Throws std::invalid_argument for resolution < 4 or n < 3.
QuadratureRule make_quadrature(int n, int resolution, Density density);

/// Weighted sum of f over the rule's nodes in its density mode. Throws
/// NonFiniteSample naming the node when f is not finite there.
double integrate(const QuadratureRule& rule, const std::function<double(const Vec&)>& f);

/// Same, in an explicit density mode.
double integrate(const QuadratureRule& rule, Density density,
                 const std::function<double(const Vec&)>& f);

/// Integral in the metric g_H = H^{4/(n-2)} g0: sum flat_w * rho_H^n * f.
double integrate_in_metric(const QuadratureRule& rule, const ConformalFactor& factor,
                           const std::function<double(const Vec&)>& f);

/// Sum of weights[i] * values[i] in fixed order.
double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values);

/// Gauss-Legendre nodes/weights on [a, b] (Golub-Welsch).
void gauss_legendre(int count, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Columnar text: one line per node, "x_1 ... x_n weight".
void write_columns(const QuadratureRule& rule, std::ostream& os);

}  // namespace zm
