#include "zm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "zm/errors.hpp"
#include "zm/fd.hpp"
#include "zm/parallel.hpp"

namespace zm {

namespace {
const cplx I1(0.0, 1.0);
}

cplx weight_flat(const ZeroModePair& pair, const GammaRep& rep, const TwoFormField& F,
                 const Vec& x) {
    const Spinor v = pair.phi.value(x);
    const double norm_sq = v.squaredNorm();
    if (norm_sq < tol::kSingular) throw SingularPointError("weight: |phi|^2 below threshold", x);
    return 4.0 * I1 * hermitian(clifford_mul_twoform(rep, TwoFormValue(F.value(x)), v), v) / norm_sq;
}

double weight_on_sphere(const ZeroModePair& pair, const GammaRep& rep,
                        const StereographicChart& chart, const Vec& x) {
    const double rho = chart.scale(x);
    return weight_flat(pair, rep, field_strength(pair), x).real() / (rho * rho);
}

WeightedEigenProblem assemble(int lmax, const std::vector<double>& weight_at_nodes,
                              const QuadratureRule& rule) {
    if (lmax < 2) throw std::invalid_argument("assemble: lmax must be >= 2");
    if (rule.n != 3 || rule.density != Density::Round)
        throw std::invalid_argument("assemble: needs a round-density rule with n = 3");
    if (rule.resolution <= 2 * lmax)
        throw std::invalid_argument("assemble: aliasing guard, quadrature resolution " +
                                    std::to_string(rule.resolution) + " must exceed 2*lmax = " +
                                    std::to_string(2 * lmax));
    if (weight_at_nodes.size() != rule.size())
        throw std::invalid_argument("assemble: weight sample count does not match the rule");

    const HypersphericalBasis basis(lmax);
    WeightedEigenProblem p;
    p.lmax = lmax;
    p.n = 3;
    p.a_n = 8.0;
    p.basis = basis.indices();
    const auto M = static_cast<Eigen::Index>(basis.size());
    p.stiffness.resize(M);
    for (Eigen::Index i = 0; i < M; ++i)
        p.stiffness(i) = p.a_n * HypersphericalBasis::laplace_eigenvalue(p.basis[i].degree) + 6.0;

    const int n_chi = static_cast<int>(rule.chi.size());
    const int n_theta = static_cast<int>(rule.theta[0].size());
    const int n_phi = static_cast<int>(rule.phi.size());
    const int n_m = 2 * lmax + 1;
    const int n_ang = (lmax + 1) * (lmax + 1);

    Mat phi_tab(n_phi, n_m);  // column m + lmax
    for (int c = 0; c < n_phi; ++c)
        for (int m = -lmax; m <= lmax; ++m)
            phi_tab(c, m + lmax) = HypersphericalBasis::azimuthal(m, rule.phi[c]);
    Mat theta_tab(n_theta, n_ang);
    std::vector<int> ang_m(static_cast<std::size_t>(n_ang));
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            const int idx = HypersphericalBasis::angular_index(l, m);
            ang_m[idx] = m + lmax;
            for (int b = 0; b < n_theta; ++b)
                theta_tab(b, idx) = std::sph_legendre(static_cast<unsigned>(l),
                                                      static_cast<unsigned>(std::abs(m)),
                                                      rule.theta[0][b]);
        }
    Mat radial_tab(n_chi, M);
    std::vector<int> basis_ang(static_cast<std::size_t>(M));
    for (Eigen::Index i = 0; i < M; ++i) {
        const auto& h = p.basis[i];
        basis_ang[i] = HypersphericalBasis::angular_index(h.l, h.m);
        for (int a = 0; a < n_chi; ++a)
            radial_tab(a, i) = HypersphericalBasis::radial(h.degree, h.l, rule.chi[a]);
    }

    Mat W = Mat::Zero(M, M);
    Mat U(n_ang, n_ang);
    Mat T(n_m, n_m);
    Vec g(n_phi);
    for (int a = 0; a < n_chi; ++a) {
        U.setZero();
        for (int b = 0; b < n_theta; ++b) {
            const std::size_t base = (static_cast<std::size_t>(a) * n_theta + b) * n_phi;
            for (int c = 0; c < n_phi; ++c) g(c) = weight_at_nodes[base + c] * rule.phi_weights[c];
            T.noalias() = phi_tab.transpose() * g.asDiagonal() * phi_tab;
            const double wt = rule.theta_weights[0][b];
            for (int j = 0; j < n_ang; ++j) {
                const double tj = wt * theta_tab(b, j);
                for (int i = 0; i < n_ang; ++i)
                    U(i, j) += tj * theta_tab(b, i) * T(ang_m[i], ang_m[j]);
            }
        }
        const double wc = rule.chi_weights[a];
        for (Eigen::Index q = 0; q < M; ++q) {
            const double rq = wc * radial_tab(a, q);
            if (rq == 0.0) continue;
            for (Eigen::Index r = 0; r < M; ++r)
                W(r, q) += rq * radial_tab(a, r) * U(basis_ang[r], basis_ang[q]);
        }
    }
    const double scale = std::max(W.cwiseAbs().maxCoeff(), 1e-300);
    p.symmetry_residual = (W - W.transpose()).cwiseAbs().maxCoeff() / scale;
    W = (0.5 * (W + W.transpose())).eval();
    p.weight = std::move(W);
    return p;
}

WeightedEigenProblem assemble(int lmax, const std::function<double(const Vec&)>& weight,
                              const QuadratureRule& rule) {
    const auto values =
        evaluate_indexed(rule.size(), [&](std::size_t i) { return weight(rule.nodes[i]); });
    return assemble(lmax, values, rule);
}

std::optional<EigenResult> first_positive_eigenvalue(const WeightedEigenProblem& problem) {
    const Vec dinv = problem.stiffness.cwiseInverse().cwiseSqrt();
    Mat S = dinv.asDiagonal() * problem.weight * dinv.asDiagonal();
    S = (0.5 * (S + S.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    const Eigen::Index last = S.rows() - 1;
    const double nu = es.eigenvalues()(last);
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if (!(nu > 1e-14 * scale)) return std::nullopt;

    EigenResult r;
    r.lmax = problem.lmax;
    r.lambda1 = 1.0 / nu;
    Vec c = dinv.cwiseProduct(es.eigenvectors().col(last));
    const double cwc = c.dot(problem.weight * c);
    c /= std::sqrt(cwc);
    Eigen::Index pivot = 0;
    if (std::abs(c(0)) < 1e-12 * c.cwiseAbs().maxCoeff()) c.cwiseAbs().maxCoeff(&pivot);
    if (c(pivot) < 0.0) c = -c;
    r.eigvec = c;
    const double quotient = c.dot(problem.stiffness.cwiseProduct(c)) / c.dot(problem.weight * c);
    r.rayleigh_residual = std::abs(quotient - r.lambda1) / r.lambda1;
    return r;
}

double power_iteration_nu_max(const WeightedEigenProblem& problem, int max_iterations,
                              double tolerance) {
    const Vec dinv = problem.stiffness.cwiseInverse().cwiseSqrt();
    Mat S = dinv.asDiagonal() * problem.weight * dinv.asDiagonal();
    S = (0.5 * (S + S.transpose())).eval();
    // Shift by a Gershgorin bound so the spectrum is nonnegative and the
    // dominant eigenvalue is the largest one.
    const double shift = S.cwiseAbs().rowwise().sum().maxCoeff();
    Vec x = Vec::Ones(S.rows()).normalized();
    double nu = x.dot(S * x);
    for (int it = 0; it < max_iterations; ++it) {
        Vec y = S * x + shift * x;
        x = y.normalized();
        const double next = x.dot(S * x);
        if (std::abs(next - nu) <= tolerance * std::max(1.0, std::abs(next))) {
            nu = next;
            break;
        }
        nu = next;
    }
    return nu;
}

EigenLadder solve_ladder(const std::vector<int>& ladder, const std::vector<double>& weight_at_nodes,
                         const QuadratureRule& rule) {
    if (ladder.empty()) throw std::invalid_argument("solve_ladder: empty ladder");
    EigenLadder out;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        auto problem = assemble(ladder[k], weight_at_nodes, rule);
        auto result = first_positive_eigenvalue(problem);
        if (!result)
            throw std::runtime_error("no positive eigenvalue at lmax = " + std::to_string(ladder[k]) +
                                     " (weight is nonpositive)");
        out.rungs.push_back({ladder[k], result->lambda1});
        if (k + 1 == ladder.size()) {
            out.final = *result;
            out.problem = std::move(problem);
        }
    }
    out.short_ladder = out.rungs.size() < 2;
    if (!out.short_ladder) {
        const auto& a = out.rungs[out.rungs.size() - 2];
        const auto& b = out.rungs.back();
        out.final.convergence_gap = std::abs(b.lambda1 - a.lambda1);
    }
    for (std::size_t k = 1; k < out.rungs.size(); ++k)
        if (out.rungs[k].lambda1 > out.rungs[k - 1].lambda1 * (1.0 + 1e-12)) out.monotone = false;
    return out;
}

namespace {

ScalarField combination_field(int lmax, std::vector<std::pair<std::size_t, double>> terms) {
    auto basis = std::make_shared<HypersphericalBasis>(lmax);
    ScalarField u;
    u.n = 3;
    u.value = [basis, terms](const Vec& x) {
        const SphereAngles a = chart_angles(x);
        double s = 0.0;
        for (const auto& [idx, c] : terms) s += c * basis->evaluate(idx, a);
        return s;
    };
    u.gradient = [f = u.value](const Vec& x) { return fd_gradient(f, x, 1e-4); };
    return u;
}

}  // namespace

ScalarField eigenfunction(const WeightedEigenProblem& problem, const EigenResult& result) {
    const double cmax = result.eigvec.cwiseAbs().maxCoeff();
    std::vector<std::pair<std::size_t, double>> terms;
    for (Eigen::Index i = 0; i < result.eigvec.size(); ++i)
        if (std::abs(result.eigvec(i)) > 1e-14 * cmax)
            terms.emplace_back(static_cast<std::size_t>(i), result.eigvec(i));
    return combination_field(problem.lmax, std::move(terms));
}

ScalarField harmonic_combination(int max_degree, const Vec& coefficients) {
    const HypersphericalBasis basis(max_degree);
    if (static_cast<std::size_t>(coefficients.size()) != basis.size())
        throw std::invalid_argument("harmonic_combination: coefficient count mismatch");
    std::vector<std::pair<std::size_t, double>> terms;
    for (Eigen::Index i = 0; i < coefficients.size(); ++i)
        terms.emplace_back(static_cast<std::size_t>(i), coefficients(i));
    return combination_field(max_degree, std::move(terms));
}

double rayleigh_functional(const ScalarField& u, const std::function<double(const Vec&)>& weight,
                           const ConformalFactor& factor,
                           const std::function<double(const Vec&)>& scalar_curvature,
                           double a_n, const QuadratureRule& rule) {
    std::vector<double> num(rule.size()), den(rule.size());
    for_each_index(rule.size(), [&](std::size_t i) {
        const Vec& x = rule.nodes[i];
        const double rho = factor.scale(x);
        const double vol = std::pow(rho, rule.n);
        const double val = u.value(x);
        const Vec du = u.grad(x, u.gradient ? DiffScheme::closed_form() : DiffScheme::central_fd());
        num[i] = vol * (a_n * du.squaredNorm() / (rho * rho) + scalar_curvature(x) * val * val);
        den[i] = vol * weight(x) * val * val;
    });
    const auto& w = rule.flat_weights;
    const double numerator = weighted_sum(w, num);
    const double denominator = weighted_sum(w, den);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < den.size(); ++i) magnitude += std::abs(w[i] * den[i]);
    if (std::abs(denominator) <= 1e-12 * magnitude || denominator == 0.0)
        throw std::runtime_error("rayleigh_functional: weighted denominator is (near) zero");
    return numerator / denominator;
}

IdentityTerms integral_identity_check(const ConformalZeroMode& mode, const QuadratureRule& rule,
                                      bool debug) {
    const std::size_t count = rule.size();
    std::vector<double> curv(count), field(count), grad(count), grad_abs(count);
    for_each_index(count, [&](std::size_t i) {
        const Vec& x = rule.nodes[i];
        const ConformalSample s = mode.sample(x);
        const double vol = std::pow(s.rho, rule.n);
        curv[i] = vol * 0.25 * s.scalar_curvature * s.psi_sq;
        field[i] = -vol * 0.25 * s.weight * s.psi_sq;
        grad[i] = vol * s.grad_sq;
        grad_abs[i] = vol * std::sqrt(s.grad_sq);
    });
    const auto& w = rule.flat_weights;
    IdentityTerms t;
    t.curvature_term = weighted_sum(w, curv);
    t.field_term = weighted_sum(w, field);
    t.gradient_term = weighted_sum(w, grad);
    t.sum = t.curvature_term + t.field_term + t.gradient_term;
    const double mag = std::abs(t.curvature_term) + std::abs(t.field_term) + std::abs(t.gradient_term);
    t.relative = mag == 0.0 ? 0.0 : std::abs(t.sum) / mag;
    if (debug) {
        t.unsquared_gradient_term = weighted_sum(w, grad_abs);
        t.unsquared_sum = t.curvature_term + t.field_term + *t.unsquared_gradient_term;
    }
    return t;
}

}  // namespace zm
