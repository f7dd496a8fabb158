#pragma once

// Residual and quadrature budgets shared by the unit tests, the acceptance
// suite and the CLI. The FD budgets follow from the 4th-order central
// difference scheme at the default step.

namespace zm::tol {

inline constexpr double kFdStep = 1e-4;
/// Zero-mode residual with closed-form derivatives.
inline constexpr double kResidualClosedForm = 1e-8;
/// Zero-mode residual with 4th-order central differences at kFdStep.
inline constexpr double kResidualFd = 1e-4;
/// Nested-FD second-order identities (Lichnerowicz, metric connection).
inline constexpr double kNestedFd = 1e-3;
/// Closed-form Jacobians vs central differences.
inline constexpr double kJacobianCheck = 1e-4;
/// Relative tolerance of the integral identities on the quadrature ladder.
inline constexpr double kIntegralIdentity = 1e-3;
/// Conformal invariance of the L^p norms, flat vs round.
inline constexpr double kConformalNorm = 1e-5;
/// Pointwise conformal scaling laws of the pushed spinor.
inline constexpr double kConformalPointwise = 1e-8;
/// Relative deviation allowed for the sharp ||A||_n^2 equality.
inline constexpr double kSharpNorm = 1e-3;
/// |phi|^2 below this is a singular point.
inline constexpr double kSingular = 1e-30;

}  // namespace zm::tol
