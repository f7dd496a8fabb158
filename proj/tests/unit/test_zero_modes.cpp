#include "doctest.h"

#include <cmath>
#include <sstream>

#include "zm/errors.hpp"
#include "zm/fd.hpp"
#include "zm/sampling.hpp"
#include "zm/spectral.hpp"
#include "zm/zero_modes.hpp"

using namespace zm;

namespace {

SpinorField constant_spinor(const GammaRep& rep, const Spinor& c) {
    SpinorField phi;
    phi.n = rep.dim();
    phi.N = rep.spinor_dim();
    phi.value = [c](const Vec&) { return c; };
    const int N = phi.N, n = phi.n;
    phi.jacobian = [N, n](const Vec&) { return CMat(CMat::Zero(N, n)); };
    return phi;
}

OneFormField zero_form(int n) {
    OneFormField A;
    A.n = n;
    A.value = [n](const Vec&) { return Vec(Vec::Zero(n)); };
    A.jacobian = [n](const Vec&) { return Mat(Mat::Zero(n, n)); };
    return A;
}

// Oracle: real least squares on the stacked (Re, Im) system via column-pivoted QR.
Vec least_squares_potential(const SpinorField& phi, const GammaRep& rep, const Vec& x) {
    const int n = rep.dim(), N = rep.spinor_dim();
    const Spinor v = phi.value(x);
    const CMat d = phi.jacobian(x);
    Spinor D = Spinor::Zero(N);
    for (int j = 0; j < n; ++j) D += rep.gamma(j) * d.col(j);
    Mat M(2 * N, n);
    Vec b(2 * N);
    for (int j = 0; j < n; ++j) {
        const Spinor col = cplx(0.0, 1.0) * (rep.gamma(j) * v);
        M.col(j).head(N) = col.real();
        M.col(j).tail(N) = col.imag();
    }
    b.head(N) = D.real();
    b.tail(N) = D.imag();
    return M.colPivHouseholderQr().solve(b);
}

ScalarField cos_x2(int n) {
    ScalarField f;
    f.n = n;
    f.value = [](const Vec& x) { return std::cos(x(1)); };
    f.gradient = [n](const Vec& x) {
        Vec g = Vec::Zero(n);
        g(1) = -std::sin(x(1));
        return g;
    };
    f.hessian = [n](const Vec& x) {
        Mat H = Mat::Zero(n, n);
        H(1, 1) = -std::cos(x(1));
        return H;
    };
    return f;
}

ScalarField wave(const Vec& k, double amp) {
    const int n = static_cast<int>(k.size());
    ScalarField f;
    f.n = n;
    f.value = [k, amp](const Vec& x) { return amp * std::sin(k.dot(x)); };
    f.gradient = [k, amp](const Vec& x) { return Vec(amp * std::cos(k.dot(x)) * k); };
    f.hessian = [k, amp](const Vec& x) { return Mat(-amp * std::sin(k.dot(x)) * k * k.transpose()); };
    return f;
}

}  // namespace

TEST_CASE("zero-mode spinor examples") {
    PortableRng rng(21);
    for (int n : {3, 5, 7}) {
        const auto rep = GammaRep::build(n);
        const Spinor seed = rng.normal_spinor(rep.spinor_dim());
        const auto phi = dunne_min_spinor(rep, seed);
        CHECK((phi.value(Vec::Zero(n)) - seed).norm() == 0.0);

        for (int t = 0; t < 100; ++t) {
            const Vec x = rng.uniform_vec(n, -3.0, 3.0);
            const double r2 = x.squaredNorm();
            const CMat xdot = rep.clifford_matrix(x);
            const CMat I = CMat::Identity(rep.spinor_dim(), rep.spinor_dim());
            CHECK(((I + xdot).adjoint() * (I + xdot) - (1.0 + r2) * I).norm() <= 1e-12 * (1.0 + r2));
            const double expect = std::pow(1.0 + r2, -(n - 1.0)) * seed.squaredNorm();
            CHECK(phi.value(x).squaredNorm() == doctest::Approx(expect).epsilon(1e-13));
        }
    }

    const auto rep3 = GammaRep::build(3);
    const Spinor seed = default_seed(rep3);
    const auto phi = dunne_min_spinor(rep3, seed);
    for (int t = 0; t < 50; ++t) {
        const Vec x = rng.normal_vec(3).normalized();
        CHECK(phi.value(x).norm() == doctest::Approx(0.5 * seed.norm()).epsilon(1e-14));
    }
}

TEST_CASE("zero-mode spinor errors") {
    for (int n : {2, 4, 6}) {
        const auto rep = GammaRep::build(n);
        CHECK_THROWS_AS(dunne_min_spinor(rep, default_seed(rep)), DomainError);
        CHECK_THROWS_AS(coulomb_gauge_function(rep, default_seed(rep)), DomainError);
    }
    const auto rep = GammaRep::build(3);
    CHECK_THROWS_AS(dunne_min_spinor(rep, Spinor::Zero(2)), DomainError);
    CHECK_THROWS_AS(coulomb_gauge_function(rep, Spinor::Zero(2)), DomainError);
}

TEST_CASE("closed-form derivatives match central differences") {
    PortableRng rng(22);
    for (int n : {3, 5}) {
        const auto rep = GammaRep::build(n);
        const auto pair = loss_yau_pair(rep, rng.normal_spinor(rep.spinor_dim()));
        for (int t = 0; t < 30; ++t) {
            const Vec x = rng.uniform_vec(n, -2.0, 2.0);
            const CMat J = pair.phi.jacobian(x);
            const CMat Jfd = pair.phi.derivatives(x, DiffScheme::central_fd());
            CHECK((J - Jfd).norm() <= tol::kJacobianCheck);
            const auto H = pair.phi.hessian(x);
            for (int j = 0; j < n; ++j) {
                const CMat Hfd = central_diff([&](const Vec& y) { return CMat(pair.phi.jacobian(y)); }, x, j, 1e-4);
                CHECK((H[j] - Hfd).norm() <= tol::kJacobianCheck);
            }
            const Mat A = pair.A.jacobian(x);
            const Mat Afd = pair.A.jac(x, DiffScheme::central_fd());
            CHECK((A - Afd).norm() <= tol::kJacobianCheck);
        }
    }
}

TEST_CASE("derive_potential") {
    const auto rep = GammaRep::build(3);
    const auto c = constant_spinor(rep, default_seed(rep));
    for (const auto& x : random_points(3, 20, 23, 2.0)) CHECK(derive_potential(c, rep, x).norm() == 0.0);

    SpinorField vanishing = constant_spinor(rep, Spinor::Zero(2));
    CHECK_THROWS_AS(derive_potential(vanishing, rep, Vec::Zero(3)), SingularPointError);

    PortableRng rng(24);
    for (int n : {3, 5}) {
        const auto r = GammaRep::build(n);
        const auto pair = loss_yau_pair(r, rng.normal_spinor(r.spinor_dim()));
        for (const auto& x : random_points(n, 500, 25, 3.0)) {
            const Vec a = derive_potential(pair.phi, r, x);
            const Vec oracle = least_squares_potential(pair.phi, r, x);
            CHECK((a - oracle).norm() <= 1e-12 * (1.0 + oracle.norm()));
            CHECK(zero_mode_residual(pair, r, x, DiffScheme::closed_form()) <= tol::kResidualClosedForm);
        }
    }
}

TEST_CASE("induced potential radial profile") {
    // |a(x)| (1 + |x|^2) fitted to a constant over 500 points, then frozen.
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto pts = random_points(3, 500, 26, 4.0);
    Vec y(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = pair.A.value(pts[i]).norm() * (1.0 + pts[i].squaredNorm());
    const double c = y.mean();  // least-squares constant
    const double spread = (y.array() - c).abs().maxCoeff();
    CHECK(spread <= 1e-12 * c);
    CHECK(c == doctest::Approx(3.0).epsilon(1e-12));

    const auto rep5 = GammaRep::build(5);
    const auto pair5 = loss_yau_pair(rep5, default_seed(rep5));
    for (const auto& x : random_points(5, 100, 27, 3.0))
        CHECK(pair5.A.value(x).norm() * (1.0 + x.squaredNorm()) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("zero-mode residual") {
    const auto rep = GammaRep::build(3);
    const ZeroModePair trivial{constant_spinor(rep, default_seed(rep)), zero_form(3), 3, default_seed(rep)};
    CHECK(zero_mode_residual(trivial, rep, Vec::Constant(3, 0.3), DiffScheme::closed_form()) == 0.0);

    PortableRng rng(28);
    for (int n : {3, 5}) {
        const auto r = GammaRep::build(n);
        for (int s = 0; s < 2; ++s) {
            const Spinor seed = s == 0 ? default_seed(r) : Spinor(rng.normal_spinor(r.spinor_dim()));
            const auto pair = loss_yau_pair(r, seed);
            double closed = 0.0, fd = 0.0;
            for (const auto& x : random_points(n, 1000, 29 + s, 3.0)) {
                closed = std::max(closed, zero_mode_residual(pair, r, x, DiffScheme::closed_form()));
                fd = std::max(fd, zero_mode_residual(pair, r, x, DiffScheme::central_fd()));
            }
            CHECK(closed <= tol::kResidualClosedForm);
            CHECK(fd <= tol::kResidualFd);
        }
    }

    const auto pair = loss_yau_pair(rep, default_seed(rep));
    auto [phi, A] = gauge_transform(pair.phi, pair.A, cos_x2(3));
    const ZeroModePair moved{phi, A, 3, pair.seed};
    for (const auto& x : random_points(3, 200, 31, 3.0))
        CHECK(zero_mode_residual(moved, rep, x, DiffScheme::central_fd()) <= tol::kResidualFd);
}

TEST_CASE("derive_potential recovers gauge-transformed potentials") {
    PortableRng rng(32);
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto pts = random_points(3, 1000, 33, 3.0);
    for (int t = 0; t < 4; ++t) {
        const auto f = wave(rng.normal_vec(3), rng.uniform(0.2, 2.0));
        auto [phi, A] = gauge_transform(pair.phi, pair.A, f);
        for (std::size_t i = static_cast<std::size_t>(t); i < pts.size(); i += 4) {
            const Vec& x = pts[i];
            CHECK((derive_potential(phi, rep, x) - A.value(x)).norm() <= tol::kResidualClosedForm);
        }
    }
}

TEST_CASE("Coulomb gauge") {
    for (int n : {3, 5}) {
        const auto rep = GammaRep::build(n);
        const auto pair = loss_yau_pair(rep, default_seed(rep));
        const auto coulomb = coulomb_gauge(pair, rep);
        const auto F = field_strength(pair);
        const auto Fc = field_strength(coulomb);
        const auto f = coulomb_gauge_function(rep, pair.seed);
        for (const auto& x : random_points(n, 100, 34, 3.0)) {
            CHECK(std::abs(divergence(coulomb.A, x, DiffScheme::closed_form())) <= 1e-6);
            CHECK(std::abs(divergence(coulomb.A, x, DiffScheme::central_fd())) <= 1e-6);
            CHECK(zero_mode_residual(coulomb, rep, x, DiffScheme::closed_form()) <= tol::kResidualClosedForm);
            CHECK((Fc.value(x) - F.value(x)).norm() <= 1e-10 * (1.0 + F.value(x).norm()));
            CHECK((f.grad(x, DiffScheme::closed_form()) - f.grad(x, DiffScheme::central_fd())).norm() <=
                  tol::kJacobianCheck);
            const Mat H = f.hessian(x);
            Mat Hfd(n, n);
            for (int j = 0; j < n; ++j) Hfd.row(j) = central_diff(f.gradient, x, j, 1e-4).transpose();
            CHECK((H - Hfd).norm() <= tol::kJacobianCheck);
        }
    }
}

TEST_CASE("divergence of the induced potential") {
    const auto rep = GammaRep::build(3);
    const Spinor seed = default_seed(rep);
    const auto pair = loss_yau_pair(rep, seed);
    Vec w(3);
    for (int j = 0; j < 3; ++j) w(j) = hermitian(cplx(0.0, 1.0) * (rep.gamma(j) * seed), seed).real();
    for (const auto& x : random_points(3, 100, 35, 3.0)) {
        const double expect = -6.0 * w.dot(x) / std::pow(1.0 + x.squaredNorm(), 2);
        CHECK(divergence(pair.A, x, DiffScheme::central_fd()) == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("magnetic covariant derivative and second-order identities") {
    const auto rep = GammaRep::build(3);
    const ZeroModePair trivial{constant_spinor(rep, default_seed(rep)), zero_form(3), 3, default_seed(rep)};
    const auto cd0 = magnetic_covariant_derivative(trivial, rep, Vec::Constant(3, 0.4));
    CHECK(cd0.norm_sq == 0.0);

    for (int n : {3, 5}) {
        const auto r = GammaRep::build(n);
        const auto pair = loss_yau_pair(r, default_seed(r));
        const auto F = field_strength(pair);
        for (const auto& x : random_points(n, 20, 36, 2.0)) {
            const auto cd = magnetic_covariant_derivative(pair, r, x);
            const Spinor v = pair.phi.value(x);
            const Vec a = pair.A.value(x);
            CMat expect = pair.phi.jacobian(x);
            for (int j = 0; j < n; ++j) expect.col(j) -= cplx(0.0, 1.0) * a(j) * v;
            CHECK((cd.components - expect).norm() <= 1e-14 * (1.0 + expect.norm()));
            CHECK(cd.norm_sq == doctest::Approx(expect.squaredNorm()).epsilon(1e-14));
            CHECK(std::abs(metric_connection_defect(pair, r, x, 1e-3)) <= tol::kNestedFd);
            CHECK(lichnerowicz_defect(pair, r, F, x, 1e-3) <= tol::kNestedFd);
            // A sign error in dA is detected.
            CHECK(lichnerowicz_defect(pair, r, negated(F), x, 1e-3) >
                  10.0 * lichnerowicz_defect(pair, r, F, x, 1e-3));
        }
    }
}

TEST_CASE("conformal pushforward scaling laws") {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto chart = make_chart(3);
    const auto psi = conformal_push(pair.phi, chart.factor());
    const auto round = ConformalZeroMode::round(pair, rep, chart);
    const auto F = field_strength(pair);
    const int n = 3;
    for (const auto& x : random_points(3, 200, 37, 3.0)) {
        const double h = chart.h(x);
        const Spinor v = pair.phi.value(x);
        const double expect_sq = std::pow(h, -2.0 * (n - 1.0) / (n - 2.0)) * v.squaredNorm();
        CHECK(std::abs(psi.value(x).squaredNorm() - expect_sq) <= tol::kConformalPointwise * expect_sq);
        const auto s = round.sample(x);
        CHECK(std::abs(s.psi_sq - expect_sq) <= tol::kConformalPointwise * expect_sq);
        const cplx flat = hermitian(clifford_mul_twoform(rep, TwoFormValue(F.value(x)), v), v);
        const cplx expect = std::pow(h, (-4.0 - 2.0 * (n - 1.0)) / (n - 2.0)) * flat;
        CHECK(std::abs(s.pairing - expect) <= tol::kConformalPointwise * std::abs(expect));
        CHECK(round.dirac_residual(x).norm() <= tol::kResidualClosedForm);
        // Closed-form derivative of psi.
        const CMat Jfd = psi.derivatives(x, DiffScheme::central_fd());
        CHECK((psi.jacobian(x) - Jfd).norm() <= tol::kJacobianCheck);
    }

    const auto same = conformal_push(pair.phi, ConformalFactor::identity(3));
    const auto flat = ConformalZeroMode::flat(pair, rep);
    for (const auto& x : random_points(3, 50, 38, 3.0)) {
        CHECK((same.value(x) - pair.phi.value(x)).norm() == 0.0);
        const auto s = flat.sample(x);
        CHECK(s.rho == 1.0);
        CHECK((s.psi - pair.phi.value(x)).norm() == 0.0);
        CHECK(flat.dirac_residual(x).norm() <= tol::kResidualClosedForm);
    }
}

TEST_CASE("round sphere quantities are constant") {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto round = ConformalZeroMode::round(pair, rep, make_chart(3));
    for (const auto& x : random_points(3, 100, 39, 5.0)) {
        const auto s = round.sample(x);
        CHECK(s.weight == doctest::Approx(12.0).epsilon(1e-10));
        CHECK(s.twoform_norm == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(s.oneform_norm == doctest::Approx(1.5).epsilon(1e-10));
    }
}

TEST_CASE("weight is real") {
    PortableRng rng(40);
    for (int n : {3, 5}) {
        const auto rep = GammaRep::build(n);
        const auto pair = loss_yau_pair(rep, rng.normal_spinor(rep.spinor_dim()));
        const auto F = field_strength(pair);
        for (const auto& x : random_points(n, 200, 41, 3.0)) {
            const cplx w = weight_flat(pair, rep, F, x);
            CHECK(std::abs(w.imag()) <= 1e-12 * std::abs(w));
        }
    }
}

TEST_CASE("integrability of |phi|^2") {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto v = quadrature_ladder(
        3, 16, 32, Density::Flat,
        [&](const QuadratureRule& r) {
            return integrate(r, [&](const Vec& x) { return pair.phi.value(x).squaredNorm(); });
        },
        1e-3);
    // int (1 + r^2)^{-2} dx over R^3 = pi^2.
    CHECK(v.fine == doctest::Approx(kPi * kPi).epsilon(1e-6));

    const Vec e = Vec::Unit(3, 0);
    const double r1 = pair.phi.value(1e3 * e).norm(), r2 = pair.phi.value(2e3 * e).norm();
    CHECK(-std::log2(r2 / r1) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("columnar export of a pair") {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    std::ostringstream os;
    write_samples(pair, random_points(3, 5, 42, 1.0), os);
    std::istringstream is(os.str());
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double v;
        int cols = 0;
        while (ls >> v) ++cols;
        CHECK(cols == 3 + 2 * 2 + 3);
        ++rows;
    }
    CHECK(rows == 5);
}
