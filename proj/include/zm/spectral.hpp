#pragma once

// Weighted conformal eigenvalue lambda_1(w, g): smallest positive mu with
//   L_g u = -a_n Delta_g u + s_g u = mu w u
// on the round S^3, by Galerkin projection onto hyperspherical harmonics.

#include <functional>
#include <optional>
#include <vector>

#include "zm/fields.hpp"
#include "zm/geometry.hpp"
#include "zm/harmonics.hpp"
#include "zm/zero_modes.hpp"

namespace zm {

/// Flat-chart weight 4 i <dA.phi, phi> / |phi|^2 (complex; the imaginary part
/// is rounding noise).
cplx weight_flat(const ZeroModePair& pair, const GammaRep& rep, const TwoFormField& F,
                 const Vec& x);

/// Round-metric weight w_g(x) = h^{-4/(n-2)}(x) w_flat(x).
double weight_on_sphere(const ZeroModePair& pair, const GammaRep& rep,
                        const StereographicChart& chart, const Vec& x);

struct WeightedEigenProblem {
    int lmax = 0;
    int n = 3;
    double a_n = 8.0;
    std::vector<HarmonicIndex> basis;
    Vec stiffness;  ///< d_k = a_n k(k+2) + n(n-1), one per basis function
    Mat weight;     ///< W_ij = int w Y_i Y_j dv_g
    double symmetry_residual = 0.0;  ///< max |W - W^T| / max |W| before symmetrization
};

/// Assembles the problem from weight samples at the nodes of a round-density
/// n = 3 rule (sum-factorized over the tensor grid). Throws
/// std::invalid_argument when rule.resolution <= 2 lmax (aliasing guard).
WeightedEigenProblem assemble(int lmax, const std::vector<double>& weight_at_nodes,
                              const QuadratureRule& rule);

WeightedEigenProblem assemble(int lmax, const std::function<double(const Vec&)>& weight,
                              const QuadratureRule& rule);

struct EigenResult {
    int lmax = 0;
    double lambda1 = 0.0;
    Vec eigvec;                     ///< coefficients in the harmonic basis
    double convergence_gap = 0.0;   ///< |lambda1(lmax) - lambda1(previous rung)|, 0 if none
    double rayleigh_residual = 0.0; ///< |c^T D c / c^T W c - lambda1| / lambda1
};

/// lambda1 = 1/nu_max with nu_max the largest eigenvalue of D^{-1/2} W D^{-1/2}.
/// Returns std::nullopt when nu_max <= 0 (the weight has no positive direction).
/// The eigenvector is normalized to c^T W c = 1 with a nonnegative mean.
std::optional<EigenResult> first_positive_eigenvalue(const WeightedEigenProblem& problem);

/// Largest eigenvalue of D^{-1/2} W D^{-1/2} by shifted power iteration.
double power_iteration_nu_max(const WeightedEigenProblem& problem, int max_iterations = 2000,
                              double tolerance = 1e-13);

struct LadderRung {
    int lmax = 0;
    double lambda1 = 0.0;
};

struct EigenLadder {
    std::vector<LadderRung> rungs;
    EigenResult final;         ///< at the largest lmax, with convergence_gap filled
    WeightedEigenProblem problem;  ///< at the largest lmax
    bool short_ladder = false; ///< fewer than two rungs: no convergence gap available
    bool monotone = true;      ///< nonincreasing in lmax (1e-12 relative slack)
};

/// Solves at every lmax of `ladder` on one rule. Throws std::runtime_error
/// when some rung has no positive eigenvalue.
EigenLadder solve_ladder(const std::vector<int>& ladder, const std::vector<double>& weight_at_nodes,
                         const QuadratureRule& rule);

/// Galerkin eigenfunction as a field on the chart. Coefficients below 1e-14
/// of the largest are dropped; the gradient uses central differences.
ScalarField eigenfunction(const WeightedEigenProblem& problem, const EigenResult& result);

/// Random smooth test function: combination of harmonics of degree <= max_degree.
ScalarField harmonic_combination(int max_degree, const Vec& coefficients);

/// I(u) = int (a_n |grad u|_g^2 + s_g u^2) dv_g / int w u^2 dv_g for
/// g = H^{4/(n-2)} g0; |grad u|_g^2 = rho^{-2} |d u|^2. Throws
/// std::runtime_error when the denominator is negligible.
double rayleigh_functional(const ScalarField& u, const std::function<double(const Vec&)>& weight,
                           const ConformalFactor& factor,
                           const std::function<double(const Vec&)>& scalar_curvature,
                           double a_n, const QuadratureRule& rule);

struct IdentityTerms {
    double curvature_term = 0.0;  ///< int (s_g/4) |psi|^2 dv_g
    double field_term = 0.0;      ///< -int i<dA.psi, psi> dv_g
    double gradient_term = 0.0;   ///< int |nabla^A psi|^2 dv_g
    double sum = 0.0;
    double relative = 0.0;        ///< |sum| / (sum of |terms|)
    /// Debug only: int |nabla^A psi| dv_g (the unsquared reading).
    std::optional<double> unsquared_gradient_term;
    std::optional<double> unsquared_sum;
};

/// 0 = int |psi|^2 (s_g/4 - i<dA.psi,psi>/|psi|^2) dv_g + int |nabla^A psi|^2 dv_g
/// in the metric of `mode`.
IdentityTerms integral_identity_check(const ConformalZeroMode& mode, const QuadratureRule& rule,
                                      bool debug = false);

}  // namespace zm
