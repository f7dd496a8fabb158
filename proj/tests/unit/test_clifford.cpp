#include "doctest.h"

#include <cmath>

#include "zm/clifford.hpp"
#include "zm/errors.hpp"
#include "zm/sampling.hpp"

using namespace zm;

namespace {

Vec unit_axis(int n, int j) {
    Vec a = Vec::Zero(n);
    a(j) = 1.0;
    return a;
}

// Oracle: explicit entrywise matrix-vector product.
Spinor dense_apply(const CMat& M, const Spinor& v) {
    Spinor out = Spinor::Zero(M.rows());
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) out(r) += M(r, c) * v(c);
    return out;
}

}  // namespace

TEST_CASE("gamma representation sizes and relations") {
    for (int n = 2; n <= 8; ++n) {
        const auto rep = GammaRep::build(n);
        CHECK(rep.dim() == n);
        CHECK(rep.spinor_dim() == (1 << (n / 2)));
        CHECK(rep.relation_residual() == 0.0);
        CHECK(rep.skew_residual() == 0.0);
    }
    CHECK(GammaRep::build(3).spinor_dim() == 2);
    CHECK(GammaRep::build(5).spinor_dim() == 4);
    CHECK_THROWS_AS(GammaRep::build(1), DomainError);
}

TEST_CASE("all nine n = 3 anticommutators") {
    const auto rep = GammaRep::build(3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            CMat ac = rep.gamma(j) * rep.gamma(k) + rep.gamma(k) * rep.gamma(j);
            if (j == k) ac += 2.0 * CMat::Identity(2, 2);
            CHECK(ac.cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("compatibility and unitarity of Clifford multiplication") {
    PortableRng rng(7);
    for (int n = 2; n <= 6; ++n) {
        const auto rep = GammaRep::build(n);
        for (int t = 0; t < 200; ++t) {
            const Vec X = rng.normal_vec(n);
            const Spinor phi = rng.normal_spinor(rep.spinor_dim());
            const Spinor psi = rng.normal_spinor(rep.spinor_dim());
            const cplx s = hermitian(clifford_mul_oneform(rep, X, phi), psi) +
                           hermitian(phi, clifford_mul_oneform(rep, X, psi));
            CHECK(std::abs(s) <= 1e-12 * X.norm() * phi.norm() * psi.norm());
            const double lhs = clifford_mul_oneform(rep, X, phi).squaredNorm();
            CHECK(lhs == doctest::Approx(X.squaredNorm() * phi.squaredNorm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("one-form multiplication") {
    const auto rep = GammaRep::build(3);
    PortableRng rng(11);
    const Spinor phi = rng.normal_spinor(2);
    CHECK(clifford_mul_oneform(rep, Vec::Zero(3), phi).norm() == 0.0);

    for (int t = 0; t < 1000; ++t) {
        const Vec a = rng.normal_vec(3);
        const Spinor v = rng.normal_spinor(2);
        CHECK(std::abs(hermitian(clifford_mul_oneform(rep, a, v), v).real()) <= 1e-12 * a.norm() * v.squaredNorm());
    }

    Spinor e0 = Spinor::Zero(2);
    e0(0) = 1.0;
    const Spinor got = clifford_mul_oneform(rep, unit_axis(3, 0), e0);
    CHECK((got - dense_apply(rep.gamma(0), e0)).norm() == 0.0);

    CHECK_THROWS_AS(clifford_mul_oneform(rep, Vec::Zero(4), phi), std::invalid_argument);
    CHECK_THROWS_AS(clifford_mul_oneform(rep, Vec::Zero(3), Spinor::Zero(4)), std::invalid_argument);
}

TEST_CASE("two-form multiplication") {
    const auto rep = GammaRep::build(3);
    PortableRng rng(13);
    const Spinor phi = rng.normal_spinor(2);
    CHECK(clifford_mul_twoform(rep, TwoFormValue::zero(3), phi).norm() == 0.0);

    Mat F12 = Mat::Zero(3, 3);
    F12(0, 1) = 1.0;
    F12(1, 0) = -1.0;
    const Spinor expect = dense_apply(rep.gamma(0), dense_apply(rep.gamma(1), phi));
    CHECK((clifford_mul_twoform(rep, TwoFormValue(F12), phi) - expect).norm() <= 1e-15);

    for (int n = 2; n <= 6; ++n) {
        const auto r = GammaRep::build(n);
        for (int t = 0; t < 100; ++t) {
            const Mat F = rng.antisymmetric(n);
            const Spinor v = rng.normal_spinor(r.spinor_dim());
            Spinor brute = Spinor::Zero(v.size());
            for (int j = 0; j < n; ++j)
                for (int k = j + 1; k < n; ++k)
                    brute += F(j, k) * dense_apply(r.gamma(j), dense_apply(r.gamma(k), v));
            const Spinor got = clifford_mul_twoform(r, TwoFormValue(F), v);
            CHECK((got - brute).norm() <= 1e-12 * (1.0 + brute.norm()));
            const cplx ip = cplx(0.0, 1.0) * hermitian(got, v);
            CHECK(std::abs(ip.imag()) <= 1e-12 * F.norm() * v.squaredNorm());
        }
    }
}

TEST_CASE("two-form validation and norm convention") {
    Mat bad = Mat::Zero(3, 3);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(TwoFormValue{bad}, DomainError);
    Mat F = Mat::Zero(3, 3);
    F(0, 1) = 3.0;
    F(1, 0) = -3.0;
    F(1, 2) = 4.0;
    F(2, 1) = -4.0;
    CHECK(TwoFormValue(F).norm() == doctest::Approx(5.0));  // j < k only
}

TEST_CASE("pointwise two-form bound") {
    const auto rep = GammaRep::build(3);
    const auto zero = pointwise_twoform_bound(rep, TwoFormValue::zero(3), Spinor::Ones(2));
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);

    PortableRng rng(17);
    for (int n = 2; n <= 5; ++n) {
        const auto r = GammaRep::build(n);
        int violations = 0;
        for (int t = 0; t < 10000; ++t) {
            const TwoFormValue F(rng.antisymmetric(n));
            const auto b = pointwise_twoform_bound(r, F, rng.normal_spinor(r.spinor_dim()));
            if (b.lhs > b.rhs * (1.0 + 1e-12)) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("pointwise bound saturates for aligned equal blocks in n = 4") {
    const auto rep = GammaRep::build(4);
    const double b = 1.7;
    const TwoFormValue F(block_matrix(4, {b, b}));
    const CMat H = cplx(0.0, 1.0) * rep.twoform_matrix(F.matrix());

    // Oracle 1: Hermitian eigensolver, max of phi^H (iF.) phi on the unit sphere.
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    const Spinor top = es.eigenvectors().col(3);
    const auto best = pointwise_twoform_bound(rep, F, top);
    CHECK(best.lhs / best.rhs == doctest::Approx(1.0).epsilon(1e-12));

    // Oracle 2: shifted power iteration from a random start.
    PortableRng rng(19);
    Spinor v = rng.normal_spinor(4).normalized();
    const CMat S = H + 10.0 * CMat::Identity(4, 4);
    for (int it = 0; it < 500; ++it) v = (S * v).normalized();
    const auto found = pointwise_twoform_bound(rep, F, v);
    CHECK(found.lhs / found.rhs == doctest::Approx(1.0).epsilon(1e-10));

    // The maximizer is a joint eigenspinor of i gamma_1 gamma_2 and i gamma_3 gamma_4.
    const CMat J12 = cplx(0.0, 1.0) * rep.gamma(0) * rep.gamma(1);
    const CMat J34 = cplx(0.0, 1.0) * rep.gamma(2) * rep.gamma(3);
    CHECK((J12 * top - hermitian(J12 * top, top) * top).norm() <= 1e-10);
    CHECK((J34 * top - hermitian(J34 * top, top) * top).norm() <= 1e-10);
}

TEST_CASE("block diagonalization of antisymmetric matrices") {
    SUBCASE("zero") {
        const auto bf = block_diagonalize_antisym(TwoFormValue::zero(5));
        CHECK(bf.Q.isIdentity(0.0));
        CHECK(bf.blocks.size() == 2);
        CHECK(bf.blocks[0] == 0.0);
        CHECK(bf.blocks[1] == 0.0);
    }
    SUBCASE("already canonical n = 2") {
        Mat F(2, 2);
        F << 0.0, 1.5, -1.5, 0.0;
        const auto bf = block_diagonalize_antisym(TwoFormValue(F));
        REQUIRE(bf.blocks.size() == 1);
        CHECK(bf.blocks[0] == doctest::Approx(1.5));
        CHECK((bf.Q - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("random, against the complex eigensolver") {
        PortableRng rng(23);
        for (int n = 2; n <= 8; ++n) {
            for (int t = 0; t < 20; ++t) {
                const Mat F = rng.antisymmetric(n);
                const TwoFormValue Fv(F);
                const auto bf = block_diagonalize_antisym(Fv);
                const Mat canon = bf.Q.transpose() * F * bf.Q;
                CHECK((canon - block_matrix(n, bf.blocks)).norm() <= 1e-10 * F.norm());
                CHECK((bf.Q.transpose() * bf.Q - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);

                Eigen::ComplexEigenSolver<CMat> ces(F.cast<cplx>());
                std::vector<double> im;
                for (int i = 0; i < n; ++i)
                    if (ces.eigenvalues()(i).imag() > 1e-9) im.push_back(ces.eigenvalues()(i).imag());
                std::sort(im.rbegin(), im.rend());
                REQUIRE(im.size() == static_cast<std::size_t>(n / 2));
                double sum_sq = 0.0, sum_abs = 0.0;
                for (std::size_t m = 0; m < im.size(); ++m) {
                    CHECK(bf.blocks[m] == doctest::Approx(im[m]).epsilon(1e-10));
                    sum_sq += bf.blocks[m] * bf.blocks[m];
                    sum_abs += std::abs(bf.blocks[m]);
                }
                CHECK(sum_sq == doctest::Approx(Fv.norm() * Fv.norm()).epsilon(1e-10));
                CHECK(sum_abs <= std::sqrt(n / 2) * std::sqrt(sum_sq) * (1.0 + 1e-12));
            }
        }
    }
}
