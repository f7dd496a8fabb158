#include "zm/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "zm/box_oracle.hpp"
#include "zm/errors.hpp"
#include "zm/parallel.hpp"
#include "zm/sampling.hpp"

namespace zm {

namespace {

using nlohmann::json;

json envelope(const std::string& command, const RunConfig& cfg) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = "zmcheck";
    j["command"] = command;
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;
    return j;
}

std::string fmt(double v, int precision = 10) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

double max_over(const std::vector<Vec>& pts, const std::function<double(const Vec&)>& f) {
    return max_of(evaluate_indexed(pts.size(), [&](std::size_t i) { return f(pts[i]); }));
}

IdentityCheck check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

double relative(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// f(x) = amp sin(k.x + c) with closed-form gradient and Hessian.
ScalarField sine_gauge(const Vec& k, double amp, double c) {
    ScalarField f;
    f.n = static_cast<int>(k.size());
    f.value = [=](const Vec& x) { return amp * std::sin(k.dot(x) + c); };
    f.gradient = [=](const Vec& x) { return (amp * std::cos(k.dot(x) + c) * k).eval(); };
    f.hessian = [=](const Vec& x) { return (-amp * std::sin(k.dot(x) + c) * k * k.transpose()).eval(); };
    return f;
}

std::vector<double> sphere_weight_at(const QuadratureRule& rule, const ZeroModePair& pair,
                                     const GammaRep& rep, WeightChoice choice) {
    if (choice == WeightChoice::One) return std::vector<double>(rule.size(), 1.0);
    const auto chart = make_chart(pair.n);
    const TwoFormField F = field_strength(pair);
    return evaluate_indexed(rule.size(), [&](std::size_t i) {
        const Vec& x = rule.nodes[i];
        const double rho = chart.scale(x);
        return weight_flat(pair, rep, F, x).real() / (rho * rho);
    });
}

std::string ladder_csv(const std::vector<LadderRung>& rungs) {
    std::ostringstream os;
    os.precision(17);
    os << "lmax,lambda1\n";
    for (const auto& r : rungs) os << r.lmax << ',' << r.lambda1 << '\n';
    return os.str();
}

}  // namespace

CommandResult run_verify(const RunConfig& cfg) {
    CommandResult out;
    out.report = envelope("verify", cfg);
    const auto rep = GammaRep::build(cfg.n);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    std::ostringstream summary;
    try {
        const VerificationReport r = verify_theorem(pair, rep, cfg.verify_config());
        out.report["result"] = to_json(r);
        std::ostringstream csv;
        write_chain_csv(r, csv);
        out.chain_csv = csv.str();
        if (r.spectral) out.ladder_csv = ladder_csv(r.spectral->rungs);
        summary << "n = " << r.n << "\n"
                << "||dA||_{n/2} = " << fmt(r.lhs.value()) << " (pair difference "
                << fmt(r.lhs.error(), 3) << ")\n"
                << "Y/(4 sqrt(v_n)) = " << fmt(r.rhs) << "\n"
                << "margin = " << fmt(r.margin) << ", error bar = " << fmt(r.error_bar, 3) << "\n";
        if (r.spectral)
            summary << "lambda1 = " << fmt(r.spectral->lambda1) << " (gap "
                    << fmt(r.spectral->gap, 3) << ")\n";
        if (r.conjectured_constant)
            summary << "4 S_3 = " << fmt(*r.conjectured_constant) << ": lhs is "
                    << r.conjecture_relation << "\n";
        summary << "||A||_n^2 = " << fmt(r.sharp.norm_sq.value()) << " vs (n/(n-2)) S_n = "
                << fmt(r.sharp.target) << "\n";
        for (const auto& f : r.failures()) summary << "FAILED: " << f << "\n";
        out.exit_code = r.passed() ? kExitPass : kExitAssertion;
    } catch (const GateError& e) {
        out.report["error"] = e.what();
        summary << "gate: " << e.what() << "\n";
        out.exit_code = kExitAssertion;
    } catch (const ConvergenceError& e) {
        out.report["error"] = e.what();
        summary << "convergence: " << e.what() << "\n";
        out.exit_code = kExitAssertion;
    }
    summary << (out.exit_code == kExitPass ? "verify: PASS" : "verify: FAIL") << "\n";
    out.report["passed"] = out.exit_code == kExitPass;
    out.summary = summary.str();
    return out;
}

CommandResult run_identities(const RunConfig& cfg, const std::string& fault) {
    if (!fault.empty() && fault != "dA-sign") throw ConfigError("unknown debug fault '" + fault + "'");
    const int n = cfg.n;
    const auto rep = GammaRep::build(n);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto chart = make_chart(n);
    const TwoFormField F = field_strength(pair);
    const TwoFormField F_used = fault == "dA-sign" ? negated(F) : F;
    const auto pts = random_points(n, cfg.identity_points, cfg.seed + 1, 2.0);
    const DiffScheme fd = DiffScheme::central_fd(cfg.fd_step);
    std::vector<IdentityCheck> checks;

    checks.push_back(check("clifford_relation", rep.relation_residual(), 1e-14));
    checks.push_back(check("clifford_skew", rep.skew_residual(), 1e-14));
    checks.push_back(check("zero_mode_residual_closed_form", max_over(pts, [&](const Vec& x) {
                               return zero_mode_residual(pair, rep, x, DiffScheme::closed_form());
                           }),
                           tol::kResidualClosedForm));
    checks.push_back(check("zero_mode_residual_fd",
                           max_over(pts, [&](const Vec& x) { return zero_mode_residual(pair, rep, x, fd); }),
                           tol::kResidualFd));
    const ZeroModePair coulomb = coulomb_gauge(pair, rep);
    checks.push_back(check("coulomb_gauge_divergence", max_over(pts, [&](const Vec& x) {
                               return std::abs(divergence(coulomb.A, x, DiffScheme::closed_form()));
                           }),
                           1e-6));
    checks.push_back(check("coulomb_gauge_residual", max_over(pts, [&](const Vec& x) {
                               return zero_mode_residual(coulomb, rep, x, DiffScheme::closed_form());
                           }),
                           tol::kResidualClosedForm));

    PortableRng rng(cfg.seed + 2);
    for (int s = 0; s < cfg.gauge_sweeps; ++s) {
        const Vec k = rng.normal_vec(n);
        const double amp = rng.uniform(0.5, 1.5);
        const double c = rng.uniform(0.0, 2.0 * kPi);
        auto [phi2, A2] = gauge_transform(pair.phi, pair.A, sine_gauge(k, amp, c));
        const ZeroModePair g{phi2, A2, n, pair.seed};
        checks.push_back(check("gauge_sweep_" + std::to_string(s + 1),
                               max_over(pts, [&](const Vec& x) { return zero_mode_residual(g, rep, x, fd); }),
                               tol::kResidualFd));
    }

    const SpinorField psi = conformal_push(pair.phi, chart.factor());
    const auto round_mode = ConformalZeroMode(pair, rep, chart.factor(), F_used,
                                              [s = chart.scalar_curvature_round()](const Vec&) { return s; });
    const auto flat_mode = ConformalZeroMode(pair, rep, ConformalFactor::identity(n), F_used,
                                             [](const Vec&) { return 0.0; });
    checks.push_back(check("conformal_psi_norm", max_over(pts, [&](const Vec& x) {
                               const double h = chart.h(x);
                               const double expect =
                                   std::pow(h, -2.0 * (n - 1.0) / (n - 2.0)) * pair.phi.value(x).squaredNorm();
                               return relative(psi.value(x).squaredNorm(), expect);
                           }),
                           tol::kConformalPointwise));
    checks.push_back(check("conformal_pairing", max_over(pts, [&](const Vec& x) {
                               const double h = chart.h(x);
                               const Spinor v = pair.phi.value(x);
                               const cplx flat = hermitian(
                                   clifford_mul_twoform(rep, TwoFormValue(F_used.value(x)), v), v);
                               const cplx expect = std::pow(h, (-4.0 - 2.0 * (n - 1.0)) / (n - 2.0)) * flat;
                               const cplx got = round_mode.sample(x).pairing;
                               return std::abs(got - expect) / std::max(std::abs(expect), 1e-300);
                           }),
                           tol::kConformalPointwise));
    checks.push_back(check("round_dirac_residual", max_over(pts, [&](const Vec& x) {
                               return round_mode.dirac_residual(x).norm();
                           }),
                           tol::kResidualClosedForm));

    const auto fine_round = make_quadrature(n, cfg.fine, Density::Round);
    const auto fine_flat = make_quadrature(n, cfg.fine, Density::Flat);
    const double p = n / 2.0;
    checks.push_back(check("dA_norm_conformal",
                           relative(lp_norm_twoform(F, p, chart, fine_flat, MetricMode::Flat),
                                    lp_norm_twoform(F, p, chart, fine_round, MetricMode::Round)),
                           tol::kConformalNorm));
    checks.push_back(check("A_norm_conformal",
                           relative(ln_norm_oneform(pair.A, chart, fine_flat, MetricMode::Flat),
                                    ln_norm_oneform(pair.A, chart, fine_round, MetricMode::Round)),
                           tol::kConformalNorm));

    const std::vector<Vec> few(pts.begin(), pts.begin() + std::min<std::size_t>(20, pts.size()));
    checks.push_back(check("metric_connection", max_over(few, [&](const Vec& x) {
                               return std::abs(metric_connection_defect(pair, rep, x, 1e-3));
                           }),
                           tol::kNestedFd));
    checks.push_back(check("lichnerowicz", max_over(few, [&](const Vec& x) {
                               return lichnerowicz_defect(pair, rep, F_used, x, 1e-3);
                           }),
                           tol::kNestedFd));

    json terms = json::object();
    for (const auto& [label, mode] :
         {std::pair<std::string, const ConformalZeroMode*>{"flat", &flat_mode}, {"round", &round_mode}}) {
        double worst = 0.0;
        json rungs = json::array();
        for (int res : {cfg.coarse, cfg.fine}) {
            const auto rule = make_quadrature(n, res, Density::Round);
            const IdentityTerms t = integral_identity_check(*mode, rule, true);
            worst = std::max(worst, t.relative);
            rungs.push_back({{"resolution", res},
                             {"curvature_term", t.curvature_term},
                             {"field_term", t.field_term},
                             {"gradient_term", t.gradient_term},
                             {"sum", t.sum},
                             {"relative", t.relative},
                             {"unsquared_gradient_term", *t.unsquared_gradient_term},
                             {"unsquared_sum", *t.unsquared_sum}});
        }
        terms[label] = rungs;
        checks.push_back(check("integral_identity_" + label, worst, tol::kIntegralIdentity));
    }

    CommandResult out;
    out.report = envelope("identities", cfg);
    out.report["debug_fault"] = fault.empty() ? json(nullptr) : json(fault);
    json list = json::array();
    std::ostringstream summary;
    bool all = true;
    for (const auto& c : checks) {
        list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
        summary << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << fmt(c.value, 3) << " (tol "
                << fmt(c.tolerance, 3) << ")\n";
        all = all && c.passed;
    }
    out.report["identities"] = list;
    out.report["integral_identity_terms"] = terms;
    out.report["passed"] = all;
    out.exit_code = all ? kExitPass : kExitAssertion;
    summary << (all ? "identities: PASS" : "identities: FAIL") << "\n";
    out.summary = summary.str();
    return out;
}

CommandResult run_eig(const RunConfig& cfg) {
    if (cfg.n != 3) throw ConfigError("the spectral solver supports n = 3 only");
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto rule = make_quadrature(3, cfg.eig_resolution, Density::Round);
    const auto w = sphere_weight_at(rule, pair, rep, cfg.weight);

    CommandResult out;
    out.report = envelope("eig", cfg);
    std::ostringstream summary;
    json result;
    result["weight"] = cfg.weight == WeightChoice::One ? "one" : "zero_mode";
    std::vector<std::string> warnings, failures;

    EigenLadder ladder;
    try {
        ladder = solve_ladder(cfg.ladder, w, rule);
    } catch (const std::runtime_error& e) {
        out.report["error"] = e.what();
        out.report["passed"] = false;
        out.exit_code = kExitAssertion;
        out.summary = std::string("eig: ") + e.what() + "\neig: FAIL\n";
        return out;
    }
    json rungs = json::array();
    for (const auto& r : ladder.rungs) rungs.push_back({{"lmax", r.lmax}, {"lambda1", r.lambda1}});
    const double lam = ladder.final.lambda1;
    const double gap = ladder.final.convergence_gap;
    result["ladder"] = rungs;
    result["lambda1"] = lam;
    result["convergence_gap"] = ladder.short_ladder ? json(nullptr) : json(gap);
    result["monotone"] = ladder.monotone;
    result["rayleigh_residual"] = ladder.final.rayleigh_residual;
    result["symmetry_residual"] = ladder.problem.symmetry_residual;
    result["power_iteration_lambda1"] = 1.0 / power_iteration_nu_max(ladder.problem);
    if (ladder.short_ladder) warnings.push_back("ladder too short for convergence gap");
    if (!ladder.monotone) failures.push_back("lambda1 ladder is not monotone");

    if (cfg.weight == WeightChoice::ZeroMode) {
        const double eps = std::max(gap, 1e-3);
        const bool claim1 = lam <= 1.0 + eps;
        result["claim1_epsilon"] = eps;
        result["claim1"] = claim1 ? "pass" : "fail";
        if (!claim1) failures.push_back("lambda1 exceeds 1 + epsilon");
    } else {
        result["claim1"] = "n/a";
        const double dev = std::abs(lam - 6.0) / 6.0;
        result["closed_form"] = {{"expected", 6.0}, {"relative_error", dev}};
        if (!(dev <= 1e-8)) failures.push_back("constant weight does not reproduce lambda1 = 6");
    }

    if (cfg.box_oracle) {
        const auto chart = make_chart(3);
        const TwoFormField F = field_strength(pair);
        std::function<double(const Vec&)> wf;
        if (cfg.weight == WeightChoice::One)
            wf = [chart](const Vec& x) { return std::pow(chart.scale(x), 2); };
        else
            wf = [&](const Vec& x) { return weight_flat(pair, rep, F, x).real(); };
        const ExtrapolatedBox box = extrapolated_box_oracle(wf, 8.0);
        json runs = json::array();
        for (const auto& r : box.runs)
            runs.push_back({{"R", r.R}, {"h", r.h}, {"lambda", r.lambda}, {"iterations", r.iterations}});
        const double agreement = std::abs(box.lambda_inf - lam) / lam;
        result["box_oracle"] = {{"runs", runs},
                                {"lambda_extrapolated", box.lambda_inf},
                                {"relative_difference", agreement},
                                {"agrees", agreement <= 1e-2}};
        if (!(agreement <= 1e-2)) failures.push_back("box oracle disagrees beyond 1e-2");
    }

    result["warnings"] = warnings;
    result["failures"] = failures;
    out.report["result"] = result;
    out.report["passed"] = failures.empty();
    out.exit_code = failures.empty() ? kExitPass : kExitAssertion;
    out.ladder_csv = ladder_csv(ladder.rungs);

    for (const auto& r : ladder.rungs) summary << "lmax " << r.lmax << ": lambda1 = " << fmt(r.lambda1, 15) << "\n";
    summary << "claim1: " << result["claim1"].get<std::string>() << "\n";
    for (const auto& w2 : warnings) summary << "warning: " << w2 << "\n";
    for (const auto& f : failures) summary << "FAILED: " << f << "\n";
    summary << (failures.empty() ? "eig: PASS" : "eig: FAIL") << "\n";
    out.summary = summary.str();
    return out;
}

CommandResult run_norms(const RunConfig& cfg) {
    const int n = cfg.n;
    const auto rep = GammaRep::build(n);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto chart = make_chart(n);
    const TwoFormField F = field_strength(pair);
    const double p = n / 2.0;

    CommandResult out;
    out.report = envelope("norms", cfg);
    std::ostringstream summary;
    try {
        auto ladder = [&](Density d, MetricMode m, bool twoform) {
            return quadrature_ladder(
                n, cfg.coarse, cfg.fine, d,
                [&](const QuadratureRule& rule) {
                    return twoform ? lp_norm_twoform(F, p, chart, rule, m)
                                   : ln_norm_oneform(pair.A, chart, rule, m);
                },
                cfg.quadrature_tolerance);
        };
        const ConvergedValue dA_flat = ladder(Density::Flat, MetricMode::Flat, true);
        const ConvergedValue dA_round = ladder(Density::Round, MetricMode::Round, true);
        const ConvergedValue A_flat = ladder(Density::Flat, MetricMode::Flat, false);
        const ConvergedValue A_round = ladder(Density::Round, MetricMode::Round, false);
        const auto c = sphere_constants(n);
        const double target = n / (n - 2.0) * c.sobolev;
        const double a_sq = A_round.value() * A_round.value();
        const double deviation = std::abs(a_sq - target) / target;
        const double dA_rel = relative(dA_flat.value(), dA_round.value());
        const double A_rel = relative(A_flat.value(), A_round.value());
        auto cv = [](const ConvergedValue& v) {
            return json{{"coarse", v.coarse}, {"fine", v.fine}, {"error", v.error()}};
        };
        out.report["result"] = {{"dA_norm", {{"flat", cv(dA_flat)}, {"round", cv(dA_round)}, {"relative_difference", dA_rel}}},
                                {"A_norm", {{"flat", cv(A_flat)}, {"round", cv(A_round)}, {"relative_difference", A_rel}}},
                                {"A_norm_sq", a_sq},
                                {"sharp_A_target", target},
                                {"sharp_deviation", deviation},
                                {"rhs_bound", c.rhs_bound}};
        const bool ok = dA_rel <= tol::kConformalNorm && A_rel <= tol::kConformalNorm &&
                        deviation <= tol::kSharpNorm;
        out.exit_code = ok ? kExitPass : kExitAssertion;
        summary << "||dA||_{n/2}: flat " << fmt(dA_flat.value()) << ", round " << fmt(dA_round.value()) << "\n"
                << "||A||_n^2 = " << fmt(a_sq) << " vs (n/(n-2)) S_n = " << fmt(target)
                << " (deviation " << fmt(deviation, 3) << ")\n";
    } catch (const ConvergenceError& e) {
        out.report["error"] = e.what();
        summary << "convergence: " << e.what() << "\n";
        out.exit_code = kExitAssertion;
    }
    out.report["passed"] = out.exit_code == kExitPass;
    summary << (out.exit_code == kExitPass ? "norms: PASS" : "norms: FAIL") << "\n";
    out.summary = summary.str();
    return out;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg, const std::string& fault) {
    try {
        validate(cfg);
        if (!fault.empty() && command != "identities")
            throw ConfigError("--debug-fault applies to the identities command only");
        if (command == "verify") return run_verify(cfg);
        if (command == "identities") return run_identities(cfg, fault);
        if (command == "eig") return run_eig(cfg);
        if (command == "norms") return run_norms(cfg);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        CommandResult out;
        out.exit_code = kExitConfig;
        out.summary = std::string("configuration error: ") + e.what() + "\n";
        out.report = envelope(command, cfg);
        out.report["error"] = e.what();
        out.report["passed"] = false;
        return out;
    }
}

void write_outputs(const CommandResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    {
        std::ofstream os(base / "report.json");
        os << result.report.dump(2) << '\n';
    }
    if (!result.chain_csv.empty()) std::ofstream(base / "chain.csv") << result.chain_csv;
    if (!result.ladder_csv.empty()) std::ofstream(base / "ladder.csv") << result.ladder_csv;
}

}  // namespace zm
