#include "zm/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "zm/errors.hpp"

namespace zm {

namespace {

CMat pauli(int which) {
    CMat s(2, 2);
    const cplx i(0.0, 1.0);
    switch (which) {
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -i, i, 0.0; break;
    default: s << 1.0, 0.0, 0.0, -1.0; break;
    }
    return s;
}

CMat kron_chain(const std::vector<CMat>& factors) {
    CMat out = CMat::Identity(1, 1);
    for (const auto& f : factors) {
        CMat next = Eigen::kroneckerProduct(out, f).eval();
        out = std::move(next);
    }
    return out;
}

}  // namespace

GammaRep GammaRep::build(int n) {
    if (n < 2) throw DomainError("Clifford representation needs n >= 2, got " + std::to_string(n));
    GammaRep rep;
    rep.n_ = n;
    const int m = n / 2;
    rep.N_ = 1 << m;
    const CMat I2 = CMat::Identity(2, 2);
    const CMat s3 = pauli(3);
    const cplx i(0.0, 1.0);
    for (int j = 0; j < m; ++j) {
        for (int which : {1, 2}) {
            std::vector<CMat> factors(static_cast<std::size_t>(j), s3);
            factors.push_back(pauli(which));
            for (int k = j + 1; k < m; ++k) factors.push_back(I2);
            rep.gammas_.push_back(i * kron_chain(factors));
        }
    }
    if (n % 2 == 1) {
        std::vector<CMat> factors(static_cast<std::size_t>(m), s3);
        rep.gammas_.push_back(i * kron_chain(factors));
    }
    return rep;
}

CMat GammaRep::clifford_matrix(const Vec& a) const {
    CMat out = CMat::Zero(N_, N_);
    for (int j = 0; j < n_; ++j) out += a(j) * gammas_[j];
    return out;
}

CMat GammaRep::twoform_matrix(const Mat& F) const {
    CMat out = CMat::Zero(N_, N_);
    for (int j = 0; j < n_; ++j)
        for (int k = j + 1; k < n_; ++k)
            if (F(j, k) != 0.0) out += F(j, k) * (gammas_[j] * gammas_[k]);
    return out;
}

double GammaRep::relation_residual() const {
    double worst = 0.0;
    const CMat I = CMat::Identity(N_, N_);
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
            CMat r = gammas_[j] * gammas_[k] + gammas_[k] * gammas_[j];
            if (j == k) r += 2.0 * I;
            worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
    return worst;
}

double GammaRep::skew_residual() const {
    double worst = 0.0;
    for (const auto& g : gammas_) worst = std::max(worst, (g.adjoint() + g).cwiseAbs().maxCoeff());
    return worst;
}

TwoFormValue::TwoFormValue(Mat F) : F_(std::move(F)) {
    if (F_.rows() != F_.cols()) throw DomainError("two-form matrix must be square");
    const double scale = std::max(1.0, F_.cwiseAbs().maxCoeff());
    if ((F_ + F_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DomainError("two-form matrix is not antisymmetric");
}

double TwoFormValue::norm() const {
    double s = 0.0;
    for (int j = 0; j < dim(); ++j)
        for (int k = j + 1; k < dim(); ++k) s += F_(j, k) * F_(j, k);
    return std::sqrt(s);
}

Spinor clifford_mul_oneform(const GammaRep& rep, const Vec& a, const Spinor& phi) {
    if (a.size() != rep.dim() || phi.size() != rep.spinor_dim())
        throw std::invalid_argument("clifford_mul_oneform: dimension mismatch");
    Spinor out = Spinor::Zero(rep.spinor_dim());
    for (int j = 0; j < rep.dim(); ++j)
        if (a(j) != 0.0) out += a(j) * (rep.gamma(j) * phi);
    return out;
}

Spinor clifford_mul_twoform(const GammaRep& rep, const TwoFormValue& F, const Spinor& phi) {
    if (F.dim() != rep.dim() || phi.size() != rep.spinor_dim())
        throw std::invalid_argument("clifford_mul_twoform: dimension mismatch");
    const int n = rep.dim();
    std::vector<Spinor> gk(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) gk[k] = rep.gamma(k) * phi;
    Spinor out = Spinor::Zero(rep.spinor_dim());
    for (int j = 0; j < n; ++j) {
        Spinor inner = Spinor::Zero(rep.spinor_dim());
        for (int k = j + 1; k < n; ++k)
            if (F(j, k) != 0.0) inner += F(j, k) * gk[k];
        out += rep.gamma(j) * inner;
    }
    return out;
}

TwoFormBound pointwise_twoform_bound(const GammaRep& rep, const TwoFormValue& F,
                                     const Spinor& phi) {
    const cplx pairing = cplx(0.0, 1.0) * hermitian(clifford_mul_twoform(rep, F, phi), phi);
    const double v_n = static_cast<double>(rep.dim() / 2);
    return {pairing.real(), std::sqrt(v_n) * F.norm() * phi.squaredNorm()};
}

Mat block_matrix(int n, const std::vector<double>& blocks) {
    Mat B = Mat::Zero(n, n);
    for (std::size_t m = 0; m < blocks.size(); ++m) {
        const int r = static_cast<int>(2 * m);
        B(r, r + 1) = blocks[m];
        B(r + 1, r) = -blocks[m];
    }
    return B;
}

BlockForm block_diagonalize_antisym(const TwoFormValue& Fv) {
    const Mat& F = Fv.matrix();
    const int n = Fv.dim();
    const int pairs = n / 2;
    BlockForm out{Mat::Identity(n, n), std::vector<double>(static_cast<std::size_t>(pairs), 0.0)};
    const double scale = F.cwiseAbs().maxCoeff();
    if (scale == 0.0) return out;

    const CMat H = cplx(0.0, 1.0) * F.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    // Eigenvalues ascend; the positive half (largest first) pairs with the negative half.
    const double tol = 1e-12 * scale * n;
    std::vector<Vec> columns;
    std::vector<double> found;
    for (int idx = n - 1; idx >= 0 && static_cast<int>(found.size()) < pairs; --idx) {
        const double b = es.eigenvalues()(idx);
        if (b <= tol) break;
        const CVec v = es.eigenvectors().col(idx);
        // iF v = b v  =>  F Re(v) = b Im(v),  F Im(v) = -b Re(v)
        Vec x = v.real();
        Vec y = v.imag();
        Vec q1 = y.normalized();
        // Rotate inside the invariant plane so q1 is the projection of the first
        // coordinate axis with a non-negligible component: this makes Q = Id
        // whenever F is already in canonical form.
        Mat P(n, 2);
        P.col(0) = q1;
        P.col(1) = x.normalized();
        for (int e = 0; e < n; ++e) {
            Vec proj = P * P.row(e).transpose();
            if (proj.norm() > 1e-6) {
                q1 = proj.normalized();
                break;
            }
        }
        Vec q2 = (-F * q1 / b).normalized();
        columns.push_back(q1);
        columns.push_back(q2);
        found.push_back(b);
    }
    const int k = static_cast<int>(columns.size());
    Mat Q(n, n);
    for (int c = 0; c < k; ++c) Q.col(c) = columns[c];
    if (k < n) {
        // Orthonormal completion spans the kernel of F.
        Mat partial = Mat::Zero(n, n);
        for (int c = 0; c < k; ++c) partial.col(c) = columns[c];
        Eigen::HouseholderQR<Mat> qr(partial.leftCols(std::max(k, 1)));
        Mat full = qr.householderQ();
        if (k == 0) full = Mat::Identity(n, n);
        for (int c = k; c < n; ++c) Q.col(c) = full.col(c);
    }
    out.Q = Q;
    for (std::size_t m = 0; m < found.size(); ++m) out.blocks[m] = found[m];
    return out;
}

}  // namespace zm
