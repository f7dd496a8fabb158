#pragma once

// Explicit odd-dimensional zero modes D phi = i A.phi on the flat chart, the
// residual evaluator, the magnetic covariant derivative, and the conformal
// pushforward of a pair to any metric g_H = H^{4/(n-2)} g0 (the round sphere
// in particular).

#include <functional>
#include <iosfwd>
#include <vector>

#include "zm/clifford.hpp"
#include "zm/fields.hpp"
#include "zm/geometry.hpp"

namespace zm {

/// phi(x) = (1+|x|^2)^{-n/2} (Id + x.) phi0 with x. = sum_j x_j gamma_j.
///
/// With skew-Hermitian gammas (Id - x.)(Id + x.) = (1+|x|^2) Id, so
/// |phi|^2 = (1+|x|^2)^{-(n-1)} |phi0|^2, and D phi = -n/(1+|x|^2) phi.
/// Closed-form first and second derivatives are attached.
/// Throws DomainError for even n, n < 3, or phi0 = 0.
SpinorField dunne_min_spinor(const GammaRep& rep, const Spinor& seed);

/// Pointwise least-squares potential: argmin_a |D phi - i (a.) phi|^2.
/// Throws SingularPointError where |phi|^2 < tol::kSingular.
Vec derive_potential(const SpinorField& phi, const GammaRep& rep, const Vec& x,
                     const DiffScheme& scheme = DiffScheme::closed_form());

/// derive_potential as a field. Carries a closed-form Jacobian when phi has a
/// closed-form Hessian.
OneFormField induced_potential(const SpinorField& phi, const GammaRep& rep);

struct ZeroModePair {
    SpinorField phi;
    OneFormField A;
    int n = 0;
    Spinor seed;
};

/// Loss-Yau (n = 3) / Dunne-Min (odd n) pair: dunne_min_spinor with its
/// induced potential.
ZeroModePair loss_yau_pair(const GammaRep& rep, const Spinor& seed);

/// Unit seed e_0 in C^N.
Spinor default_seed(const GammaRep& rep);

/// Gauge function moving the Loss-Yau / Dunne-Min pair to div(A) = 0.
///
/// The induced potential has div A = -2n(n-2) (w.x) / (1+|x|^2)^2 with
/// w_j = Re<i gamma_j phi0, phi0>/|phi0|^2, so f = (w.x) Q(|x|^2) with
/// Q(s) = -n(n-2) int_0^1 t^{n-1} / (1 + s t^2) dt solves Delta f = -div A.
/// Gradient and Hessian are closed form (radial moments by Gauss-Kronrod).
ScalarField coulomb_gauge_function(const GammaRep& rep, const Spinor& seed);

/// (e^{if} phi, A + df) with f = coulomb_gauge_function: same dA, div = 0.
ZeroModePair coulomb_gauge(const ZeroModePair& pair, const GammaRep& rep);

/// dA of the pair's potential (closed form when available).
TwoFormField field_strength(const ZeroModePair& pair);

/// |sum_j gamma_j d_j phi - i A.phi| at x (flat metric).
double zero_mode_residual(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                          const DiffScheme& scheme);

struct CovariantDerivative {
    CMat components;  ///< N x n; column j is (nabla^A phi)_j = d_j phi - i a_j phi
    double norm_sq = 0.0;
};

CovariantDerivative magnetic_covariant_derivative(
    const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
    const DiffScheme& scheme = DiffScheme::closed_form());

/// nabla^{A*} nabla^A phi = -sum_j (d_j - i a_j)(d_j - i a_j) phi, outer
/// derivative by central differences of the closed-form inner one.
Spinor magnetic_laplacian(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                          double step);

/// (1/2) Delta|phi|^2 - |nabla^A phi|^2 + Re<nabla^{A*} nabla^A phi, phi>,
/// zero for any metric connection.
double metric_connection_defect(const ZeroModePair& pair, const GammaRep& rep, const Vec& x,
                                double step);

/// |nabla^{A*} nabla^A phi + (s/4) phi - i dA.phi| for the flat metric (s = 0).
double lichnerowicz_defect(const ZeroModePair& pair, const GammaRep& rep,
                           const TwoFormField& F, const Vec& x, double step);

/// psi = H^{-(n-1)/(n-2)} phi, components in the shared trivialization. The
/// fiberwise isometry is the identity on components; metric dependence enters
/// through frame rescaling (see ConformalZeroMode).
SpinorField conformal_push(const SpinorField& phi, const ConformalFactor& factor);

/// Pointwise quantities of a pair transported to g_H = H^{4/(n-2)} g0.
struct ConformalSample {
    double rho = 1.0;        ///< H^{2/(n-2)}
    Spinor psi;              ///< H^{-(n-1)/(n-2)} phi
    double psi_sq = 0.0;     ///< |psi|_g^2
    cplx pairing;            ///< <dA._g psi, psi>_g
    double weight = 0.0;     ///< 4 i <dA._g psi, psi>_g / |psi|_g^2 (real part)
    double weight_imag = 0.0;
    double twoform_norm = 0.0;  ///< |dA|_g
    double oneform_norm = 0.0;  ///< |A|_g
    double grad_sq = 0.0;       ///< |nabla^A psi|_g^2 with the spin connection of g
    double scalar_curvature = 0.0;
};

class ConformalZeroMode {
public:
    using CurvatureFn = std::function<double(const Vec&)>;

    /// `F` is normally field_strength(pair); passing a modified two-form is how
    /// fault injection reaches the identity checks.
    ConformalZeroMode(const ZeroModePair& pair, const GammaRep& rep, ConformalFactor factor,
                      TwoFormField F, CurvatureFn scalar_curvature);

    /// The flat chart itself (H = 1, s = 0).
    static ConformalZeroMode flat(const ZeroModePair& pair, const GammaRep& rep);
    /// The round sphere through stereographic projection (s = n(n-1)).
    static ConformalZeroMode round(const ZeroModePair& pair, const GammaRep& rep,
                                   const StereographicChart& chart);

    int dim() const { return pair_.n; }
    const ConformalFactor& factor() const { return factor_; }
    const ZeroModePair& pair() const { return pair_; }
    const GammaRep& rep() const { return rep_; }

    ConformalSample sample(const Vec& x) const;

    /// D_g psi - i A._g psi, with D_g = sum_j E_bar_j . nabla^g_{E_bar_j} and
    /// nabla^g_X psi = d_X psi - (1/2) X.grad(f).psi - (1/2) X(f) psi,
    /// f = log rho, Clifford products taken in the flat frame.
    Spinor dirac_residual(const Vec& x) const;

    /// Components (nabla^A_{E_bar_j} psi), N x n.
    CMat covariant_derivative(const Vec& x) const;

private:
    ZeroModePair pair_;
    GammaRep rep_;
    ConformalFactor factor_;
    TwoFormField F_;
    CurvatureFn curvature_;
};

/// Columnar export "x_1..x_n Re/Im phi_1..phi_N a_1..a_n".
void write_samples(const ZeroModePair& pair, const std::vector<Vec>& points, std::ostream& os);

}  // namespace zm
