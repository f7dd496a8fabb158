#include "zm/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "zm/errors.hpp"
#include "zm/fd.hpp"
#include "zm/parallel.hpp"
#include "zm/sampling.hpp"

namespace zm {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_over(const std::vector<Vec>& pts, const std::function<double(const Vec&)>& f) {
    const auto v = evaluate_indexed(pts.size(), [&](std::size_t i) { return f(pts[i]); });
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

double quadrature_error_bar(const ConvergedValue& v) {
    return std::max(v.error(), 1e-12 * std::abs(v.value()));
}

GateReport residual_gate(const ZeroModePair& pair, const GammaRep& rep, const VerifyConfig& cfg) {
    GateReport g;
    g.points = cfg.gate_points;
    const int n = pair.n;
    const auto pts = random_points(n, cfg.gate_points, cfg.seed, cfg.gate_half_width);
    try {
        if (pair.phi.jacobian) {
            g.max_residual_closed = max_over(pts, [&](const Vec& x) {
                return zero_mode_residual(pair, rep, x, DiffScheme::closed_form());
            });
        } else {
            g.max_residual_closed = kNaN;
        }
        g.max_residual_fd = max_over(pts, [&](const Vec& x) {
            return zero_mode_residual(pair, rep, x, DiffScheme::central_fd(cfg.fd_step));
        });
    } catch (const std::exception& e) {
        g.reason = std::string("residual evaluation failed: ") + e.what();
        return g;
    }
    g.phi_origin = pair.phi.value(Vec::Zero(n)).norm();
    Vec e1 = Vec::Zero(n);
    e1(0) = cfg.decay_radius;
    const double near = pair.phi.value(e1).norm();
    const double far = pair.phi.value(2.0 * e1).norm();
    g.decay_exponent = (near > 0.0 && far > 0.0) ? -std::log2(far / near) : kNaN;

    if (!std::isnan(g.max_residual_closed) && !(g.max_residual_closed <= tol::kResidualClosedForm))
        g.reason = "closed-form residual above budget";
    else if (!(g.max_residual_fd <= tol::kResidualFd))
        g.reason = "finite-difference residual above budget";
    else if (!(g.phi_origin > 0.0))
        g.reason = "spinor vanishes at the origin";
    else if (!(g.decay_exponent >= n - 1.0 - 0.05))
        g.reason = "spinor does not decay like |x|^{-(n-1)}";
    g.passed = g.reason.empty();
    return g;
}

SharpNormReport verify_sharp_A_norm(const OneFormField& A, const VerifyConfig& cfg) {
    const int n = A.n;
    const auto chart = make_chart(n);
    const auto c = sphere_constants(n);
    SharpNormReport r;
    r.norm_sq = quadrature_ladder(
        n, cfg.coarse, cfg.fine, Density::Round,
        [&](const QuadratureRule& rule) {
            const double v = ln_norm_oneform(A, chart, rule, MetricMode::Round);
            return v * v;
        },
        cfg.quadrature_tolerance);
    r.target = n / (n - 2.0) * c.sobolev;
    r.deviation = std::abs(r.norm_sq.value() - r.target) / r.target;
    r.optimal = r.deviation <= tol::kSharpNorm;
    return r;
}

EqualityProbe equality_forcing_probe(const ZeroModePair& pair, const GammaRep& rep,
                                     const VerifyConfig& cfg, const WeightedEigenProblem* problem,
                                     const EigenResult* spectral) {
    const int n = pair.n;
    const auto chart = make_chart(n);
    const auto mode = ConformalZeroMode::round(pair, rep, chart);
    EqualityProbe p;
    p.gradient_integral = quadrature_ladder(
        n, cfg.coarse, cfg.fine, Density::Round,
        [&](const QuadratureRule& rule) { return integral_identity_check(mode, rule).gradient_term; },
        cfg.quadrature_tolerance);
    p.excludes_zero = p.gradient_integral.value() > 3.0 * quadrature_error_bar(p.gradient_integral);

    if (problem == nullptr || spectral == nullptr || !(spectral->lambda1 < 1.0)) return p;

    // g_hat = u1^{4/(n-2)} g = (h u1)^{4/(n-2)} g0; its scalar curvature comes
    // from the flat conformal Laplacian of H = h u1.
    const ScalarField u1 = eigenfunction(*problem, *spectral);
    const double a_n = 4.0 * (n - 1.0) / (n - 2.0);
    const auto H = [chart, u1](const Vec& x) { return chart.h(x) * u1.value(x); };
    const ConformalFactor factor(
        n, H, [chart, u1](const Vec& x) {
            return (chart.grad_h(x) * u1.value(x) + chart.h(x) * u1.grad(x, DiffScheme::central_fd(1e-3)))
                .eval();
        });
    const auto curvature = [H, a_n, n](const Vec& x) {
        double lap = 0.0;
        for (int j = 0; j < n; ++j) lap += central_second_diff(H, x, j, 1e-3);
        return -a_n * lap * std::pow(H(x), -(n + 2.0) / (n - 2.0));
    };
    const ConformalZeroMode hat(pair, rep, factor, field_strength(pair), curvature);
    const auto rule = make_quadrature(n, cfg.fine, Density::Round);
    const IdentityTerms t = integral_identity_check(hat, rule);
    p.consistency_checked = true;
    p.gradient_hat = t.gradient_term;
    p.pairing_hat = -t.field_term;
    const double lam = spectral->lambda1;
    const double denom = std::abs(p.gradient_hat) + std::abs(p.pairing_hat);
    p.consistency_residual =
        denom == 0.0 ? 0.0 : std::abs(p.gradient_hat - (1.0 - lam) * p.pairing_hat) / denom;
    p.consistent = p.consistency_residual <= tol::kIntegralIdentity;
    return p;
}

VerificationReport verify_theorem(const ZeroModePair& pair, const GammaRep& rep,
                                  const VerifyConfig& cfg) {
    VerificationReport r;
    r.n = pair.n;
    r.seed = cfg.seed;
    r.config = cfg;
    r.gate = residual_gate(pair, rep, cfg);
    if (!r.gate.passed) throw GateError("residual gate rejected the pair: " + r.gate.reason);

    const int n = pair.n;
    const auto chart = make_chart(n);
    r.constants = sphere_constants(n);
    r.rhs = r.constants.rhs_bound;
    const TwoFormField F = field_strength(pair);
    const double p = n / 2.0;

    r.lhs = quadrature_ladder(
        n, cfg.coarse, cfg.fine, Density::Round,
        [&](const QuadratureRule& rule) {
            return lp_norm_twoform(F, p, chart, rule, MetricMode::Round);
        },
        cfg.quadrature_tolerance);
    r.quadrature_bar = quadrature_error_bar(r.lhs);

    std::optional<EigenLadder> ladder;
    if (n == 3) {
        const auto eig_rule = make_quadrature(3, cfg.eig_resolution, Density::Round);
        const auto w = evaluate_indexed(eig_rule.size(), [&](std::size_t i) {
            const Vec& x = eig_rule.nodes[i];
            const double rho = chart.scale(x);
            return weight_flat(pair, rep, F, x).real() / (rho * rho);
        });
        ladder = solve_ladder(cfg.ladder, w, eig_rule);
        SpectralSummary s;
        s.rungs = ladder->rungs;
        s.lambda1 = ladder->final.lambda1;
        s.gap = ladder->final.convergence_gap;
        s.monotone = ladder->monotone;
        s.short_ladder = ladder->short_ladder;
        s.claim1_epsilon = std::max(s.gap, 1e-3);
        s.claim1 = s.lambda1 <= 1.0 + s.claim1_epsilon;
        s.rayleigh_residual = ladder->final.rayleigh_residual;
        s.power_iteration_lambda1 = 1.0 / power_iteration_nu_max(ladder->problem);
        s.symmetry_residual = ladder->problem.symmetry_residual;
        r.spectral = s;

        // Chain quantities from the Galerkin eigenfunction.
        const Vec& c = ladder->final.eigvec;
        const double energy = c.dot(ladder->problem.stiffness.cwiseProduct(c));
        const ScalarField u1 = eigenfunction(ladder->problem, ladder->final);
        std::vector<double> u6(eig_rule.size()), fu2(eig_rule.size());
        for_each_index(eig_rule.size(), [&](std::size_t i) {
            const Vec& x = eig_rule.nodes[i];
            const double u = u1.value(x);
            const double rho = chart.scale(x);
            u6[i] = std::pow(std::abs(u), 2.0 * n / (n - 2.0));
            fu2[i] = TwoFormValue(F.value(x)).norm() / (rho * rho) * u * u;
        });
        const double sob = std::pow(weighted_sum(eig_rule.round_weights, u6), (n - 2.0) / n);
        const double dA_u2 = weighted_sum(eig_rule.round_weights, fu2);
        const double sv = std::sqrt(static_cast<double>(r.constants.v_n));
        HolderChain ch;
        ch.u1_sobolev_norm_sq = sob;
        ch.links = {{"rhs", r.rhs},
                    {"claim1", r.rhs / s.lambda1},
                    {"yamabe", energy / (4.0 * sv * s.lambda1 * sob)},
                    {"pointwise", dA_u2 / sob},
                    {"lhs", r.lhs.value()}};
        ch.holder_slack = r.lhs.value() * sob - dA_u2;
        r.chain = ch;

        r.equality = equality_forcing_probe(pair, rep, cfg, &ladder->problem, &ladder->final);
    } else {
        r.equality = equality_forcing_probe(pair, rep, cfg);
    }

    {
        const auto rule = make_quadrature(n, cfg.fine, Density::Round);
        const auto mode = ConformalZeroMode::round(pair, rep, chart);
        const double sv = std::sqrt(static_cast<double>(r.constants.v_n));
        std::vector<double> lhs(rule.size()), rhs(rule.size());
        for_each_index(rule.size(), [&](std::size_t i) {
            const ConformalSample s = mode.sample(rule.nodes[i]);
            lhs[i] = 0.25 * s.weight * s.psi_sq;
            rhs[i] = sv * s.twoform_norm * s.psi_sq;
        });
        PointwiseSlack& ps = r.pointwise;
        ps.nodes = rule.size();
        ps.min_ratio = std::numeric_limits<double>::infinity();
        ps.max_ratio = -std::numeric_limits<double>::infinity();
        std::vector<double> slack(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            slack[i] = rhs[i] - lhs[i];
            if (lhs[i] > rhs[i] + 1e-12 * std::abs(rhs[i]) + 1e-300) ++ps.violations;
            if (rhs[i] > 0.0) {
                ps.min_ratio = std::min(ps.min_ratio, lhs[i] / rhs[i]);
                ps.max_ratio = std::max(ps.max_ratio, lhs[i] / rhs[i]);
            }
        }
        ps.integrated_slack = weighted_sum(rule.round_weights, slack);
    }

    r.sharp = verify_sharp_A_norm(pair.A, cfg);

    r.error_bar = r.quadrature_bar + (r.spectral ? r.spectral->gap : 0.0);
    r.margin = r.lhs.value() - r.rhs;
    r.strict = r.margin > 3.0 * r.error_bar;

    if (r.chain) {
        HolderChain& ch = *r.chain;
        ch.tolerance = 3.0 * r.error_bar + 1e-10 * r.lhs.value();
        ch.consistent = true;
        for (std::size_t k = 1; k < ch.links.size(); ++k)
            if (ch.links[k].value < ch.links[k - 1].value - ch.tolerance) ch.consistent = false;
    }

    if (cfg.refinement_check) {
        const auto rule = make_quadrature(n, 2 * cfg.fine, Density::Round);
        r.lhs_doubled = lp_norm_twoform(F, p, chart, rule, MetricMode::Round);
        r.stable_under_refinement = std::abs(*r.lhs_doubled - r.lhs.value()) < r.error_bar;
    }

    if (n == 3) {
        r.conjectured_constant = 4.0 * r.constants.sobolev;
        const double d = r.lhs.value() - *r.conjectured_constant;
        const double band = 3.0 * r.error_bar + 1e-10 * r.lhs.value();
        r.conjecture_relation = std::abs(d) <= band ? "equal within error bar" : (d > 0 ? "above" : "below");
    }
    return r;
}

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> f;
    if (!gate.passed) f.push_back("residual gate: " + gate.reason);
    if (!strict) f.push_back("margin does not exceed 3x the error bar");
    if (!stable_under_refinement) f.push_back("lhs moved by more than the error bar under refinement");
    if (pointwise.violations > 0) f.push_back("pointwise two-form bound violated");
    if (spectral) {
        if (!spectral->claim1) f.push_back("lambda1 exceeds 1 + epsilon");
        if (!spectral->monotone) f.push_back("lambda1 ladder is not monotone");
    }
    if (chain && !chain->consistent) f.push_back("bound chain is not monotone");
    if (equality) {
        if (!equality->excludes_zero) f.push_back("gradient integral does not exclude zero");
        if (!equality->consistent) f.push_back("eigenvalue identity inconsistent");
    }
    return f;
}

bool VerificationReport::passed() const { return failures().empty(); }

namespace {

nlohmann::json converged(const ConvergedValue& v) {
    return {{"coarse", v.coarse}, {"fine", v.fine}, {"value", v.value()}, {"error", v.error()}};
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
    using nlohmann::json;
    json j;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["config"] = {{"coarse", r.config.coarse},
                   {"fine", r.config.fine},
                   {"ladder", r.config.ladder},
                   {"eig_resolution", r.config.eig_resolution},
                   {"fd_step", r.config.fd_step},
                   {"gate_points", r.config.gate_points},
                   {"quadrature_tolerance", r.config.quadrature_tolerance}};
    j["gate"] = {{"points", r.gate.points},
                 {"max_residual_closed", std::isnan(r.gate.max_residual_closed)
                                             ? json(nullptr)
                                             : json(r.gate.max_residual_closed)},
                 {"max_residual_fd", r.gate.max_residual_fd},
                 {"phi_origin", r.gate.phi_origin},
                 {"decay_exponent", r.gate.decay_exponent},
                 {"passed", r.gate.passed}};
    j["constants"] = {{"vol", r.constants.vol},         {"yamabe", r.constants.yamabe},
                      {"sobolev", r.constants.sobolev}, {"a_n", r.constants.a_n},
                      {"v_n", r.constants.v_n},         {"rhs_bound", r.constants.rhs_bound}};
    j["lhs"] = converged(r.lhs);
    j["lhs_doubled"] = r.lhs_doubled ? json(*r.lhs_doubled) : json(nullptr);
    j["stable_under_refinement"] = r.stable_under_refinement;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["quadrature_error_bar"] = r.quadrature_bar;
    j["error_bar"] = r.error_bar;
    j["strict"] = r.strict;
    if (r.spectral) {
        const auto& s = *r.spectral;
        json rungs = json::array();
        for (const auto& g : s.rungs) rungs.push_back({{"lmax", g.lmax}, {"lambda1", g.lambda1}});
        j["spectral"] = {{"ladder", rungs},
                         {"lambda1", s.lambda1},
                         {"convergence_gap", s.gap},
                         {"monotone", s.monotone},
                         {"short_ladder", s.short_ladder},
                         {"claim1_epsilon", s.claim1_epsilon},
                         {"claim1", s.claim1 ? "pass" : "fail"},
                         {"rayleigh_residual", s.rayleigh_residual},
                         {"power_iteration_lambda1", s.power_iteration_lambda1},
                         {"symmetry_residual", s.symmetry_residual}};
    }
    j["pointwise"] = {{"nodes", r.pointwise.nodes},
                      {"violations", r.pointwise.violations},
                      {"min_ratio", r.pointwise.min_ratio},
                      {"max_ratio", r.pointwise.max_ratio},
                      {"integrated_slack", r.pointwise.integrated_slack}};
    if (r.chain) {
        json links = json::array();
        for (const auto& l : r.chain->links) links.push_back({{"name", l.name}, {"value", l.value}});
        j["chain"] = {{"links", links},
                      {"u1_sobolev_norm_sq", r.chain->u1_sobolev_norm_sq},
                      {"holder_slack", r.chain->holder_slack},
                      {"tolerance", r.chain->tolerance},
                      {"consistent", r.chain->consistent}};
    }
    if (r.equality) {
        const auto& e = *r.equality;
        j["equality_probe"] = {{"gradient_integral", converged(e.gradient_integral)},
                               {"excludes_zero", e.excludes_zero},
                               {"consistency_checked", e.consistency_checked},
                               {"gradient_hat", e.gradient_hat},
                               {"pairing_hat", e.pairing_hat},
                               {"consistency_residual", e.consistency_residual},
                               {"consistent", e.consistent}};
    }
    j["sharp_A_norm"] = {{"norm_sq", converged(r.sharp.norm_sq)},
                         {"target", r.sharp.target},
                         {"deviation", r.sharp.deviation},
                         {"optimal", r.sharp.optimal}};
    if (r.conjectured_constant) {
        j["conjecture"] = {{"constant", *r.conjectured_constant},
                           {"relation", r.conjecture_relation},
                           {"difference", r.lhs.value() - *r.conjectured_constant}};
    }
    j["passed"] = r.passed();
    j["failures"] = r.failures();
    return j;
}

void write_chain_csv(const VerificationReport& r, std::ostream& os) {
    os.precision(17);
    os << "quantity,value\n";
    os << "lhs_coarse," << r.lhs.coarse << '\n';
    os << "lhs_fine," << r.lhs.fine << '\n';
    os << "rhs," << r.rhs << '\n';
    os << "margin," << r.margin << '\n';
    os << "error_bar," << r.error_bar << '\n';
    if (r.spectral) {
        os << "lambda1," << r.spectral->lambda1 << '\n';
        os << "convergence_gap," << r.spectral->gap << '\n';
    }
    if (r.chain)
        for (const auto& l : r.chain->links) os << "chain_" << l.name << ',' << l.value << '\n';
    if (r.chain) os << "holder_slack," << r.chain->holder_slack << '\n';
    os << "pointwise_integrated_slack," << r.pointwise.integrated_slack << '\n';
    os << "pointwise_min_ratio," << r.pointwise.min_ratio << '\n';
    os << "pointwise_max_ratio," << r.pointwise.max_ratio << '\n';
    os << "norm_A_sq," << r.sharp.norm_sq.value() << '\n';
    os << "sharp_A_target," << r.sharp.target << '\n';
    if (r.equality) os << "gradient_integral," << r.equality->gradient_integral.value() << '\n';
    if (r.conjectured_constant) os << "conjectured_constant," << *r.conjectured_constant << '\n';
}

}  // namespace zm
