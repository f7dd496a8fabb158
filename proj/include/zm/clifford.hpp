#pragma once

// Complex Clifford algebra in dimension n, realized by skew-Hermitian gamma
// matrices with gamma_j gamma_k + gamma_k gamma_j = -2 delta_jk Id.

#include <vector>

#include "zm/types.hpp"

namespace zm {

class GammaRep {
public:
    /// Iterated tensor products of Pauli matrices (Jordan-Wigner pattern),
    /// each multiplied by i. Throws DomainError for n < 2.
    static GammaRep build(int n);

    int dim() const { return n_; }
    int spinor_dim() const { return N_; }
    const CMat& gamma(int j) const { return gammas_[j]; }
    const std::vector<CMat>& gammas() const { return gammas_; }

    /// sum_j a_j gamma_j
    CMat clifford_matrix(const Vec& a) const;
    /// sum_{j<k} F_jk gamma_j gamma_k
    CMat twoform_matrix(const Mat& F) const;

    /// max_{j,k} || gamma_j gamma_k + gamma_k gamma_j + 2 delta_jk Id ||_max
    double relation_residual() const;
    /// max_j || gamma_j^dagger + gamma_j ||_max
    double skew_residual() const;

private:
    int n_ = 0;
    int N_ = 0;
    std::vector<CMat> gammas_;
};

/// Real antisymmetric n x n matrix of frame components F_jk = dA(E_j, E_k).
///
/// Norm convention: |F|^2 = sum_{j<k} F_jk^2, i.e. half the Frobenius norm
/// squared. Under this convention the pointwise estimate
///   i<F.phi, phi> <= sqrt(floor(n/2)) |F| |phi|^2
/// holds as stated; the full-sum convention would differ by sqrt(2).
class TwoFormValue {
public:
    TwoFormValue() = default;
    /// Throws DomainError if F is not antisymmetric to 1e-12 relative.
    explicit TwoFormValue(Mat F);

    static TwoFormValue zero(int n) { return TwoFormValue(Mat::Zero(n, n)); }

    const Mat& matrix() const { return F_; }
    int dim() const { return static_cast<int>(F_.rows()); }
    double operator()(int j, int k) const { return F_(j, k); }
    double norm() const;

private:
    Mat F_;
};

/// a . phi = sum_j a_j gamma_j phi
Spinor clifford_mul_oneform(const GammaRep& rep, const Vec& a, const Spinor& phi);

/// F . phi = sum_{j<k} F_jk gamma_j gamma_k phi
Spinor clifford_mul_twoform(const GammaRep& rep, const TwoFormValue& F, const Spinor& phi);

struct TwoFormBound {
    double lhs = 0.0;  ///< i<F.phi, phi> (real part; the imaginary part vanishes)
    double rhs = 0.0;  ///< sqrt(floor(n/2)) |F| |phi|^2
};

TwoFormBound pointwise_twoform_bound(const GammaRep& rep, const TwoFormValue& F,
                                     const Spinor& phi);

struct BlockForm {
    Mat Q;                       ///< orthogonal, Q^T F Q block diagonal
    std::vector<double> blocks;  ///< floor(n/2) values b_m, sorted by |b_m| descending
};

/// Canonical form of an antisymmetric matrix: Q^T F Q = diag([[0, b_m], [-b_m, 0]])
/// with a trailing zero row/column for odd n. Computed from the Hermitian
/// eigendecomposition of iF, pairing the eigenvalues +-b_m.
BlockForm block_diagonalize_antisym(const TwoFormValue& F);

/// Assembles the block-diagonal matrix described by `blocks` in dimension n.
Mat block_matrix(int n, const std::vector<double>& blocks);

}  // namespace zm
