#pragma once

// Coordinate-component fields on the flat chart: scalars, one-forms (magnetic
// potentials), two-forms (field strengths) and spinors, together with the
// exterior derivative, divergence, gauge transformations and the
// conformally invariant norms ||dA||_{n/2}, ||A||_n.

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "zm/geometry.hpp"
#include "zm/tolerances.hpp"
#include "zm/types.hpp"

namespace zm {

struct DiffScheme {
    enum class Kind { ClosedForm, CentralFD };
    Kind kind = Kind::ClosedForm;
    double step = tol::kFdStep;

    static DiffScheme closed_form() { return {}; }
    /// Throws std::invalid_argument for step <= 0.
    static DiffScheme central_fd(double step = tol::kFdStep);
};

struct ScalarField {
    int n = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;  ///< optional
    std::function<Mat(const Vec&)> hessian;   ///< optional

    Vec grad(const Vec& x, const DiffScheme& scheme) const;
};

/// Magnetic potential A, flat-frame components a_j = A(E_j).
struct OneFormField {
    int n = 0;
    std::function<Vec(const Vec&)> value;
    /// Optional closed-form Jacobian, J(j, k) = d_j a_k.
    std::function<Mat(const Vec&)> jacobian;

    Mat jac(const Vec& x, const DiffScheme& scheme) const;
};

/// Field strength dA, flat-frame components F_jk = dA(E_j, E_k).
struct TwoFormField {
    int n = 0;
    std::function<Mat(const Vec&)> value;
};

/// Spinor field in the flat-chart trivialization.
struct SpinorField {
    int n = 0;
    int N = 0;
    std::function<Spinor(const Vec&)> value;
    /// Optional: column j is d_j phi.
    std::function<CMat(const Vec&)> jacobian;
    /// Optional: entry j is the N x n matrix with columns d_j d_k phi.
    std::function<std::vector<CMat>(const Vec&)> hessian;

    CMat derivatives(const Vec& x, const DiffScheme& scheme) const;
};

/// F_jk = d_j a_k - d_k a_j.
TwoFormField exterior_derivative(const OneFormField& A, const DiffScheme& scheme);

/// Flat divergence sum_j d_j a_j.
double divergence(const OneFormField& A, const Vec& x, const DiffScheme& scheme);

/// (e^{if} phi, A + df). Closed-form derivatives are propagated when both
/// inputs provide them (phi's Jacobian with f's gradient; A's Jacobian with
/// f's Hessian).
std::pair<SpinorField, OneFormField> gauge_transform(const SpinorField& phi,
                                                     const OneFormField& A,
                                                     const ScalarField& f);

/// Gradient one-form df (pure gauge).
OneFormField gradient_field(const ScalarField& f);

OneFormField scaled(const OneFormField& A, double c);
TwoFormField negated(const TwoFormField& F);

enum class MetricMode { Flat, Round };

/// (int |F|_g^p dv_g)^{1/p}. In round mode the frame components are rescaled
/// by rho^{-2} = h^{-4/(n-2)} and the round volume is used.
double lp_norm_twoform(const TwoFormField& F, double p, const StereographicChart& chart,
                       const QuadratureRule& rule, MetricMode mode);

/// (int |A|_g^n dv_g)^{1/n}; one-form components rescale by rho^{-1}.
double ln_norm_oneform(const OneFormField& A, const StereographicChart& chart,
                       const QuadratureRule& rule, MetricMode mode);

/// A quantity evaluated at two quadrature resolutions (R, 2R).
struct ConvergedValue {
    double coarse = 0.0;
    double fine = 0.0;
    double value() const { return fine; }
    double error() const;
    double relative_error() const;
};

/// Evaluates `eval` on rules at `coarse` and `fine` resolution. Throws
/// ConvergenceError when the relative pair difference exceeds `tolerance`.
ConvergedValue quadrature_ladder(int n, int coarse, int fine, Density density,
                                 const std::function<double(const QuadratureRule&)>& eval,
                                 double tolerance);

/// Columnar export "x_1..x_n a_1..a_n".
void write_samples(const OneFormField& A, const std::vector<Vec>& points, std::ostream& os);
/// Columnar export "x_1..x_n F_12 F_13 ... F_{n-1,n}".
void write_samples(const TwoFormField& F, const std::vector<Vec>& points, std::ostream& os);

}  // namespace zm
