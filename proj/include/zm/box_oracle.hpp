#pragma once

// Independent cross-check of lambda_1: second-order finite differences for
//   -a_n Delta v = mu w_flat v   on [-R, R]^3, v = 0 on the boundary,
// solved by inverse iteration with conjugate gradients.

#include <functional>
#include <vector>

#include "zm/types.hpp"

namespace zm {

struct BoxRun {
    double R = 0.0;
    double h = 0.0;
    int interior = 0;     ///< interior points per axis
    double lambda = 0.0;  ///< smallest positive mu on this grid
    int iterations = 0;   ///< inverse-iteration steps
};

/// Throws std::invalid_argument if 2R/h is not an integer >= 4, and
/// ConvergenceError if inverse iteration stalls.
BoxRun box_oracle(const std::function<double(const Vec&)>& weight_flat, double a_n, double R,
                  double h, double tolerance = 1e-9, int max_iterations = 200);

struct ExtrapolatedBox {
    std::vector<BoxRun> runs;   ///< (R, h) = (R0, h0), (R0, h0/2), (2 R0, h0)
    double lambda_inf = 0.0;    ///< from the model lambda_inf + a/R + c h^2
    double coeff_R = 0.0;
    double coeff_h = 0.0;
};

ExtrapolatedBox extrapolated_box_oracle(const std::function<double(const Vec&)>& weight_flat,
                                        double a_n, double R0 = 10.0, double h0 = 0.5);

}  // namespace zm
