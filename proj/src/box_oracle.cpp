#include "zm/box_oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "zm/errors.hpp"
#include "zm/parallel.hpp"

namespace zm {

BoxRun box_oracle(const std::function<double(const Vec&)>& weight_flat, double a_n, double R,
                  double h, double tolerance, int max_iterations) {
    const double cells = 2.0 * R / h;
    const long m = std::lround(cells);
    if (std::abs(cells - static_cast<double>(m)) > 1e-9 || m < 4)
        throw std::invalid_argument("box_oracle: 2R/h must be an integer >= 4");
    const long k = m - 1;
    const long dof = k * k * k;
    auto id = [k](long i, long j, long l) { return (i * k + j) * k + l; };

    std::vector<double> w = evaluate_indexed(static_cast<std::size_t>(dof), [&](std::size_t s) {
        const long i = static_cast<long>(s) / (k * k), j = (static_cast<long>(s) / k) % k,
                   l = static_cast<long>(s) % k;
        Vec x(3);
        x << -R + (i + 1) * h, -R + (j + 1) * h, -R + (l + 1) * h;
        return weight_flat(x);
    });

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(7 * dof));
    const double c = a_n / (h * h);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j)
            for (long l = 0; l < k; ++l) {
                const long r = id(i, j, l);
                trip.emplace_back(r, r, 6.0 * c);
                if (i > 0) trip.emplace_back(r, id(i - 1, j, l), -c);
                if (i + 1 < k) trip.emplace_back(r, id(i + 1, j, l), -c);
                if (j > 0) trip.emplace_back(r, id(i, j - 1, l), -c);
                if (j + 1 < k) trip.emplace_back(r, id(i, j + 1, l), -c);
                if (l > 0) trip.emplace_back(r, id(i, j, l - 1), -c);
                if (l + 1 < k) trip.emplace_back(r, id(i, j, l + 1), -c);
            }
    Eigen::SparseMatrix<double> K(dof, dof);
    K.setFromTriplets(trip.begin(), trip.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-11);
    cg.compute(K);

    const Eigen::Map<const Vec> W(w.data(), dof);
    Vec v = W.cwiseMax(0.0);
    if (v.squaredNorm() == 0.0) throw ConvergenceError("box_oracle: weight has no positive part");
    v.normalize();

    // Inverse iteration on K^{-1} W; the warm start keeps CG short once the
    // iterate settles.
    BoxRun run{R, h, static_cast<int>(k), 0.0, 0};
    double mu_prev = 0.0;
    Vec guess = v;
    for (int it = 1; it <= max_iterations; ++it) {
        const Vec rhs = W.cwiseProduct(v);
        Vec y = cg.solveWithGuess(rhs, guess);
        if (cg.info() != Eigen::Success) throw ConvergenceError("box_oracle: CG did not converge");
        const double mu = y.dot(K * y) / y.dot(W.cwiseProduct(y));
        v = y.normalized();
        guess = v / mu;  // K^{-1} W v ~ v / mu near convergence
        run.iterations = it;
        run.lambda = mu;
        if (it > 1 && std::abs(mu - mu_prev) <= tolerance * std::abs(mu)) return run;
        mu_prev = mu;
    }
    throw ConvergenceError("box_oracle: inverse iteration did not converge");
}

ExtrapolatedBox extrapolated_box_oracle(const std::function<double(const Vec&)>& weight_flat,
                                        double a_n, double R0, double h0) {
    ExtrapolatedBox out;
    out.runs.push_back(box_oracle(weight_flat, a_n, R0, h0));
    out.runs.push_back(box_oracle(weight_flat, a_n, R0, 0.5 * h0));
    out.runs.push_back(box_oracle(weight_flat, a_n, 2.0 * R0, h0));
    const double l00 = out.runs[0].lambda, l01 = out.runs[1].lambda, l10 = out.runs[2].lambda;
    out.coeff_h = (l00 - l01) / (h0 * h0 - 0.25 * h0 * h0);
    out.coeff_R = (l00 - l10) / (1.0 / R0 - 0.5 / R0);
    out.lambda_inf = l01 - out.coeff_R / R0 - out.coeff_h * 0.25 * h0 * h0;
    return out;
}

}  // namespace zm
