#include "zm/fields.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "zm/clifford.hpp"
#include "zm/errors.hpp"
#include "zm/fd.hpp"

namespace zm {

DiffScheme DiffScheme::central_fd(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
    return {Kind::CentralFD, step};
}

namespace {

void check_step(const DiffScheme& s) {
    if (s.kind == DiffScheme::Kind::CentralFD && !(s.step > 0.0))
        throw std::invalid_argument("finite-difference step must be > 0");
}

}  // namespace

Vec ScalarField::grad(const Vec& x, const DiffScheme& scheme) const {
    check_step(scheme);
    if (scheme.kind == DiffScheme::Kind::ClosedForm) {
        if (!gradient) throw std::invalid_argument("scalar field has no closed-form gradient");
        return gradient(x);
    }
    return fd_gradient(value, x, scheme.step);
}

Mat OneFormField::jac(const Vec& x, const DiffScheme& scheme) const {
    check_step(scheme);
    if (scheme.kind == DiffScheme::Kind::ClosedForm) {
        if (!jacobian) throw std::invalid_argument("one-form has no closed-form Jacobian");
        return jacobian(x);
    }
    Mat J(n, n);
    for (int j = 0; j < n; ++j) J.row(j) = central_diff(value, x, j, scheme.step).transpose();
    return J;
}

CMat SpinorField::derivatives(const Vec& x, const DiffScheme& scheme) const {
    check_step(scheme);
    if (scheme.kind == DiffScheme::Kind::ClosedForm) {
        if (!jacobian) throw std::invalid_argument("spinor field has no closed-form derivatives");
        return jacobian(x);
    }
    CMat J(N, n);
    for (int j = 0; j < n; ++j) J.col(j) = central_diff(value, x, j, scheme.step);
    return J;
}

TwoFormField exterior_derivative(const OneFormField& A, const DiffScheme& scheme) {
    check_step(scheme);
    if (scheme.kind == DiffScheme::Kind::ClosedForm && !A.jacobian)
        throw std::invalid_argument("exterior_derivative: one-form has no closed-form Jacobian");
    return {A.n, [A, scheme](const Vec& x) {
                const Mat J = A.jac(x, scheme);
                return Mat(J - J.transpose());
            }};
}

double divergence(const OneFormField& A, const Vec& x, const DiffScheme& scheme) {
    return A.jac(x, scheme).trace();
}

std::pair<SpinorField, OneFormField> gauge_transform(const SpinorField& phi,
                                                     const OneFormField& A,
                                                     const ScalarField& f) {
    const cplx i(0.0, 1.0);
    SpinorField out_phi;
    out_phi.n = phi.n;
    out_phi.N = phi.N;
    out_phi.value = [phi, f, i](const Vec& x) {
        return Spinor(std::exp(i * f.value(x)) * phi.value(x));
    };
    if (phi.jacobian && f.gradient) {
        out_phi.jacobian = [phi, f, i](const Vec& x) {
            const Spinor v = phi.value(x);
            const Vec df = f.gradient(x);
            CMat J = phi.jacobian(x);
            for (int j = 0; j < phi.n; ++j) J.col(j) += i * df(j) * v;
            return CMat(std::exp(i * f.value(x)) * J);
        };
    }
    OneFormField out_A;
    out_A.n = A.n;
    const int n = A.n;
    out_A.value = [A, f, n](const Vec& x) {
        const Vec df = f.gradient ? f.gradient(x) : fd_gradient(f.value, x, tol::kFdStep);
        return Vec(A.value(x) + df);
    };
    if (A.jacobian && f.hessian)
        out_A.jacobian = [A, f](const Vec& x) { return Mat(A.jacobian(x) + f.hessian(x)); };
    return {out_phi, out_A};
}

OneFormField gradient_field(const ScalarField& f) {
    OneFormField A;
    A.n = f.n;
    A.value = [f](const Vec& x) {
        return f.gradient ? f.gradient(x) : fd_gradient(f.value, x, tol::kFdStep);
    };
    if (f.hessian) A.jacobian = f.hessian;
    return A;
}

OneFormField scaled(const OneFormField& A, double c) {
    OneFormField out;
    out.n = A.n;
    out.value = [A, c](const Vec& x) { return Vec(c * A.value(x)); };
    if (A.jacobian) out.jacobian = [A, c](const Vec& x) { return Mat(c * A.jacobian(x)); };
    return out;
}

TwoFormField negated(const TwoFormField& F) {
    return {F.n, [F](const Vec& x) { return Mat(-F.value(x)); }};
}

namespace {

void check_mode(const QuadratureRule& rule, int n, MetricMode mode) {
    if (rule.n != n) throw std::invalid_argument("quadrature dimension mismatch");
    const bool round_rule = rule.density == Density::Round;
    if (round_rule != (mode == MetricMode::Round))
        throw std::invalid_argument("metric mode does not match the quadrature density");
}

}  // namespace

double lp_norm_twoform(const TwoFormField& F, double p, const StereographicChart& chart,
                       const QuadratureRule& rule, MetricMode mode) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm_twoform: p must be > 0");
    check_mode(rule, F.n, mode);
    const double integral = integrate(rule, [&](const Vec& x) {
        double norm = TwoFormValue(F.value(x)).norm();
        if (mode == MetricMode::Round) norm /= std::pow(chart.scale(x), 2);
        return std::pow(norm, p);
    });
    return std::pow(integral, 1.0 / p);
}

double ln_norm_oneform(const OneFormField& A, const StereographicChart& chart,
                       const QuadratureRule& rule, MetricMode mode) {
    check_mode(rule, A.n, mode);
    const double p = A.n;
    const double integral = integrate(rule, [&](const Vec& x) {
        double norm = A.value(x).norm();
        if (mode == MetricMode::Round) norm /= chart.scale(x);
        return std::pow(norm, p);
    });
    return std::pow(integral, 1.0 / p);
}

double ConvergedValue::error() const { return std::abs(fine - coarse); }

double ConvergedValue::relative_error() const {
    const double s = std::max(std::abs(fine), std::abs(coarse));
    return s == 0.0 ? 0.0 : error() / s;
}

ConvergedValue quadrature_ladder(int n, int coarse, int fine, Density density,
                                 const std::function<double(const QuadratureRule&)>& eval,
                                 double tolerance) {
    ConvergedValue v;
    v.coarse = eval(make_quadrature(n, coarse, density));
    v.fine = eval(make_quadrature(n, fine, density));
    if (v.relative_error() > tolerance)
        throw ConvergenceError("quadrature did not converge: resolution " + std::to_string(coarse) +
                               " vs " + std::to_string(fine) + " relative difference " +
                               std::to_string(v.relative_error()));
    return v;
}

void write_samples(const OneFormField& A, const std::vector<Vec>& points, std::ostream& os) {
    os.precision(17);
    os << "# x_1..x_" << A.n << " a_1..a_" << A.n << '\n';
    for (const auto& x : points) {
        const Vec a = A.value(x);
        for (int j = 0; j < A.n; ++j) os << x(j) << ' ';
        for (int j = 0; j < A.n; ++j) os << a(j) << (j + 1 < A.n ? ' ' : '\n');
    }
}

void write_samples(const TwoFormField& F, const std::vector<Vec>& points, std::ostream& os) {
    os.precision(17);
    os << "# x_1..x_" << F.n << " F_jk (j<k, row-major)\n";
    for (const auto& x : points) {
        const Mat f = F.value(x);
        for (int j = 0; j < F.n; ++j) os << x(j) << ' ';
        bool first = true;
        for (int j = 0; j < F.n; ++j)
            for (int k = j + 1; k < F.n; ++k) {
                os << (first ? "" : " ") << f(j, k);
                first = false;
            }
        os << '\n';
    }
}

}  // namespace zm
