#include "zm/zero_modes.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <ostream>
#include <string>

#include "zm/errors.hpp"
#include "zm/fd.hpp"

namespace zm {

namespace {

const cplx I1(0.0, 1.0);

Spinor dirac(const GammaRep& rep, const CMat& d) {
    Spinor out = Spinor::Zero(rep.spinor_dim());
    for (int j = 0; j < rep.dim(); ++j) out += rep.gamma(j) * d.col(j);
    return out;
}

}  // namespace

SpinorField dunne_min_spinor(const GammaRep& rep, const Spinor& seed) {
    const int n = rep.dim();
    if (n < 3 || n % 2 == 0)
        throw DomainError("odd dimension n >= 3 required for zero-mode construction, got " +
                          std::to_string(n));
    if (seed.size() != rep.spinor_dim()) throw std::invalid_argument("seed spinor dimension");
    if (seed.squaredNorm() == 0.0) throw DomainError("seed spinor must be nonzero");

    // Precompute gamma_j phi0; (Id + x.) phi0 = phi0 + sum_j x_j g_j.
    std::vector<Spinor> g(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) g[j] = rep.gamma(j) * seed;
    const double half_n = 0.5 * n;

    auto core = [g, seed, n](const Vec& x) {
        Spinor s = seed;
        for (int j = 0; j < n; ++j) s += x(j) * g[j];
        return s;
    };

    SpinorField phi;
    phi.n = n;
    phi.N = rep.spinor_dim();
    phi.value = [core, half_n](const Vec& x) {
        return Spinor(std::pow(1.0 + x.squaredNorm(), -half_n) * core(x));
    };
    phi.jacobian = [core, g, n, half_n](const Vec& x) {
        const double q = 1.0 + x.squaredNorm();
        const double f = std::pow(q, -half_n);
        const double fr = -static_cast<double>(n) * std::pow(q, -half_n - 1.0);  // d_j f = fr x_j
        const Spinor c = core(x);
        CMat J(c.size(), n);
        for (int j = 0; j < n; ++j) J.col(j) = fr * x(j) * c + f * g[j];
        return J;
    };
    phi.hessian = [core, g, n, half_n](const Vec& x) {
        const double q = 1.0 + x.squaredNorm();
        const double nn = n;
        const double fr = -nn * std::pow(q, -half_n - 1.0);
        const double frr = nn * (nn + 2.0) * std::pow(q, -half_n - 2.0);
        const Spinor c = core(x);
        std::vector<CMat> H(static_cast<std::size_t>(n), CMat(c.size(), n));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double fjk = (j == k ? fr : 0.0) + frr * x(j) * x(k);
                H[j].col(k) = fjk * c + fr * x(j) * g[k] + fr * x(k) * g[j];
            }
        return H;
    };
    return phi;
}

Vec derive_potential(const SpinorField& phi, const GammaRep& rep, const Vec& x,
                     const DiffScheme& scheme) {
    const Spinor v = phi.value(x);
    const double norm_sq = v.squaredNorm();
    if (norm_sq < tol::kSingular)
        throw SingularPointError("derive_potential: |phi|^2 below singular threshold", x);
    const Spinor D = dirac(rep, phi.derivatives(x, scheme));
    // Columns m_j = i gamma_j phi have real Gram matrix Re<m_j, m_k> = |phi|^2 delta_jk
    // (the off-diagonal pairings are purely imaginary), so the normal equations
    // are diagonal.
    Vec a(rep.dim());
    for (int j = 0; j < rep.dim(); ++j)
        a(j) = hermitian(I1 * (rep.gamma(j) * v), D).real() / norm_sq;
    return a;
}

OneFormField induced_potential(const SpinorField& phi, const GammaRep& rep) {
    OneFormField A;
    A.n = rep.dim();
    A.value = [phi, rep](const Vec& x) { return derive_potential(phi, rep, x); };
    if (phi.jacobian && phi.hessian) {
        A.jacobian = [phi, rep](const Vec& x) {
            const int n = rep.dim();
            const Spinor v = phi.value(x);
            const double norm_sq = v.squaredNorm();
            if (norm_sq < tol::kSingular)
                throw SingularPointError("induced_potential: singular point", x);
            const CMat d = phi.jacobian(x);
            const auto H = phi.hessian(x);
            const Spinor D = dirac(rep, d);
            Vec a(n);
            std::vector<Spinor> m(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                m[j] = I1 * (rep.gamma(j) * v);
                a(j) = hermitian(m[j], D).real() / norm_sq;
            }
            Mat J(n, n);  // J(k, j) = d_k a_j
            for (int k = 0; k < n; ++k) {
                const Spinor dD = dirac(rep, H[k]);
                const double dnorm = 2.0 * hermitian(d.col(k), v).real();
                for (int j = 0; j < n; ++j) {
                    const Spinor dm = I1 * (rep.gamma(j) * d.col(k));
                    const double num =
                        hermitian(dm, D).real() + hermitian(m[j], dD).real() - a(j) * dnorm;
                    J(k, j) = num / norm_sq;
                }
            }
            return J;
        };
    }
    return A;
}

Spinor default_seed(const GammaRep& rep) {
    Spinor s = Spinor::Zero(rep.spinor_dim());
    s(0) = 1.0;
    return s;
}

ZeroModePair loss_yau_pair(const GammaRep& rep, const Spinor& seed) {
    ZeroModePair pair;
    pair.phi = dunne_min_spinor(rep, seed);
    pair.A = induced_potential(pair.phi, rep);
    pair.n = rep.dim();
    pair.seed = seed;
    return pair;
}

namespace {

// int_0^1 t^m / (1 + s t^2)^p dt
double radial_moment(int m, int p, double s) {
    auto f = [m, p, s](double t) { return std::pow(t, m) / std::pow(1.0 + s * t * t, p); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 12, 1e-13);
}

}  // namespace

ScalarField coulomb_gauge_function(const GammaRep& rep, const Spinor& seed) {
    const int n = rep.dim();
    if (n < 3 || n % 2 == 0) throw DomainError("coulomb gauge: odd n >= 3 required");
    const double norm_sq = seed.squaredNorm();
    if (!(norm_sq > 0.0)) throw DomainError("coulomb gauge: zero seed spinor");
    Vec w(n);
    for (int j = 0; j < n; ++j)
        w(j) = hermitian(cplx(0.0, 1.0) * (rep.gamma(j) * seed), seed).real() / norm_sq;
    // f = (w.x) Q(|x|^2), Q(s) = -n(n-2) int_0^1 t^{n-1} / (1 + s t^2) dt.
    const double c = n * (n - 2.0);
    ScalarField f;
    f.n = n;
    f.value = [w, c, n](const Vec& x) { return -c * w.dot(x) * radial_moment(n - 1, 1, x.squaredNorm()); };
    f.gradient = [w, c, n](const Vec& x) {
        const double s = x.squaredNorm();
        const double Q = -c * radial_moment(n - 1, 1, s);
        const double dQ = c * radial_moment(n + 1, 2, s);
        return (Q * w + 2.0 * dQ * w.dot(x) * x).eval();
    };
    f.hessian = [w, c, n](const Vec& x) {
        const double s = x.squaredNorm();
        const double dQ = c * radial_moment(n + 1, 2, s);
        const double ddQ = -2.0 * c * radial_moment(n + 3, 3, s);
        const double wx = w.dot(x);
        Mat H = 2.0 * dQ * (w * x.transpose() + x * w.transpose());
        H += wx * (2.0 * dQ * Mat::Identity(x.size(), x.size()) + 4.0 * ddQ * x * x.transpose());
        return H;
    };
    return f;
}

ZeroModePair coulomb_gauge(const ZeroModePair& pair, const GammaRep& rep) {
    auto [phi, A] = gauge_transform(pair.phi, pair.A, coulomb_gauge_function(rep, pair.seed));
    return ZeroModePair{std::move(phi), std::move(A), pair.n, pair.seed};
}

TwoFormField field_strength(const ZeroModePair& pair) {
    return exterior_derivative(pair.A, pair.A.jacobian ? DiffScheme::closed_form()
                                                       : DiffScheme::central_fd());
}

double zero_mode_residual(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                          const DiffScheme& scheme) {
    const Spinor v = pair.phi.value(x);
    const Spinor lhs = dirac(rep, pair.phi.derivatives(x, scheme));
    const Spinor rhs = I1 * clifford_mul_oneform(rep, pair.A.value(x), v);
    return (lhs - rhs).norm();
}

CovariantDerivative magnetic_covariant_derivative(const ZeroModePair& pair, const GammaRep& rep,
                                                  const Vec& x, const DiffScheme& scheme) {
    const Spinor v = pair.phi.value(x);
    const Vec a = pair.A.value(x);
    CovariantDerivative out;
    out.components = pair.phi.derivatives(x, scheme);
    for (int j = 0; j < rep.dim(); ++j) out.components.col(j) -= I1 * a(j) * v;
    out.norm_sq = out.components.squaredNorm();
    return out;
}

Spinor magnetic_laplacian(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                          double step) {
    const auto scheme =
        pair.phi.jacobian ? DiffScheme::closed_form() : DiffScheme::central_fd(step);
    const Vec a = pair.A.value(x);
    const CMat inner = magnetic_covariant_derivative(pair, rep, x, scheme).components;
    Spinor out = Spinor::Zero(rep.spinor_dim());
    for (int j = 0; j < rep.dim(); ++j) {
        auto component = [&](const Vec& y) {
            return Spinor(magnetic_covariant_derivative(pair, rep, y, scheme).components.col(j));
        };
        const Spinor outer = central_diff(component, x, j, step);
        out -= outer - I1 * a(j) * inner.col(j);
    }
    return out;
}

double metric_connection_defect(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                                double step) {
    auto density = [&](const Vec& y) { return pair.phi.value(y).squaredNorm(); };
    double lap = 0.0;
    for (int j = 0; j < rep.dim(); ++j) lap += central_second_diff(density, x, j, step);
    const auto scheme =
        pair.phi.jacobian ? DiffScheme::closed_form() : DiffScheme::central_fd(step);
    const double grad_sq = magnetic_covariant_derivative(pair, rep, x, scheme).norm_sq;
    const double rough = hermitian(magnetic_laplacian(pair, rep, x, step), pair.phi.value(x)).real();
    return 0.5 * lap - grad_sq + rough;
}

double lichnerowicz_defect(const ZeroModePair& pair, const GammaRep& rep, const TwoFormField& F,
                           const Vec& x, double step) {
    const Spinor v = pair.phi.value(x);
    const Spinor field = I1 * clifford_mul_twoform(rep, TwoFormValue(F.value(x)), v);
    return (magnetic_laplacian(pair, rep, x, step) - field).norm();
}

SpinorField conformal_push(const SpinorField& phi, const ConformalFactor& factor) {
    const double e = -(phi.n - 1.0) / (phi.n - 2.0);
    SpinorField psi;
    psi.n = phi.n;
    psi.N = phi.N;
    psi.value = [phi, factor, e](const Vec& x) {
        return Spinor(std::pow(factor.value(x), e) * phi.value(x));
    };
    if (phi.jacobian) {
        psi.jacobian = [phi, factor, e](const Vec& x) {
            const double H = factor.value(x);
            const Vec dH = factor.gradient(x);
            const double s = std::pow(H, e);
            const Spinor v = phi.value(x);
            CMat J = phi.jacobian(x);
            for (int j = 0; j < phi.n; ++j) J.col(j) += (e * dH(j) / H) * v;
            return CMat(s * J);
        };
    }
    return psi;
}

ConformalZeroMode::ConformalZeroMode(const ZeroModePair& pair, const GammaRep& rep,
                                     ConformalFactor factor, TwoFormField F,
                                     CurvatureFn scalar_curvature)
    : pair_(pair),
      rep_(rep),
      factor_(std::move(factor)),
      F_(std::move(F)),
      curvature_(std::move(scalar_curvature)) {}

ConformalZeroMode ConformalZeroMode::flat(const ZeroModePair& pair, const GammaRep& rep) {
    return ConformalZeroMode(pair, rep, ConformalFactor::identity(pair.n), field_strength(pair),
                             [](const Vec&) { return 0.0; });
}

ConformalZeroMode ConformalZeroMode::round(const ZeroModePair& pair, const GammaRep& rep,
                                           const StereographicChart& chart) {
    const double s = chart.scalar_curvature_round();
    return ConformalZeroMode(pair, rep, chart.factor(), field_strength(pair),
                             [s](const Vec&) { return s; });
}

CMat ConformalZeroMode::covariant_derivative(const Vec& x) const {
    const int n = pair_.n;
    const double rho = factor_.scale(x);
    const Vec df = factor_.log_scale_gradient(x);
    const double e = -(n - 1.0) / 2.0;  // psi = rho^e phi
    const double s = std::pow(rho, e);
    const Spinor phi = pair_.phi.value(x);
    const Spinor psi = s * phi;
    const CMat dphi = pair_.phi.derivatives(
        x, pair_.phi.jacobian ? DiffScheme::closed_form() : DiffScheme::central_fd());
    const Vec a = pair_.A.value(x);
    const Spinor grad_f_psi = clifford_mul_oneform(rep_, df, psi);
    CMat out(rep_.spinor_dim(), n);
    for (int j = 0; j < n; ++j) {
        const Spinor dpsi = s * (dphi.col(j) + e * df(j) * phi);
        Spinor c = dpsi - 0.5 * (rep_.gamma(j) * grad_f_psi) - 0.5 * df(j) * psi - I1 * a(j) * psi;
        out.col(j) = c / rho;
    }
    return out;
}

Spinor ConformalZeroMode::dirac_residual(const Vec& x) const {
    const CMat nabla_A = covariant_derivative(x);  // includes -i a_j psi / rho
    // sum_j gamma_j (nabla_{E_bar_j} psi - i A(E_bar_j) psi) = D_g psi - i A._g psi
    return dirac(rep_, nabla_A);
}

ConformalSample ConformalZeroMode::sample(const Vec& x) const {
    const int n = pair_.n;
    ConformalSample out;
    out.rho = factor_.scale(x);
    const double e = -(n - 1.0) / 2.0;
    out.psi = std::pow(out.rho, e) * pair_.phi.value(x);
    out.psi_sq = out.psi.squaredNorm();
    if (out.psi_sq < tol::kSingular) throw SingularPointError("|psi|^2 below singular threshold", x);
    const TwoFormValue F(F_.value(x));
    const double r2 = out.rho * out.rho;
    out.pairing = hermitian(clifford_mul_twoform(rep_, F, out.psi), out.psi) / r2;
    const cplx w = 4.0 * I1 * out.pairing / out.psi_sq;
    out.weight = w.real();
    out.weight_imag = w.imag();
    out.twoform_norm = F.norm() / r2;
    out.oneform_norm = pair_.A.value(x).norm() / out.rho;
    out.grad_sq = covariant_derivative(x).squaredNorm();
    out.scalar_curvature = curvature_(x);
    return out;
}

void write_samples(const ZeroModePair& pair, const std::vector<Vec>& points, std::ostream& os) {
    os.precision(17);
    os << "# x_1..x_" << pair.n << " (Re,Im) phi_1..phi_" << pair.phi.N << " a_1..a_" << pair.n
       << '\n';
    for (const auto& x : points) {
        const Spinor v = pair.phi.value(x);
        const Vec a = pair.A.value(x);
        for (int j = 0; j < pair.n; ++j) os << x(j) << ' ';
        for (int k = 0; k < v.size(); ++k) os << v(k).real() << ' ' << v(k).imag() << ' ';
        for (int j = 0; j < pair.n; ++j) os << a(j) << (j + 1 < pair.n ? ' ' : '\n');
    }
}

}  // namespace zm
