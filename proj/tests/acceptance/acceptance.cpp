// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "zm/app.hpp"
#include "zm/box_oracle.hpp"
#include "zm/clifford.hpp"
#include "zm/config.hpp"
#include "zm/inequality.hpp"
#include "zm/parallel.hpp"
#include "zm/sampling.hpp"
#include "zm/spectral.hpp"
#include "zm/zero_modes.hpp"

using namespace zm;

namespace {

constexpr double kEps = 2.220446049250313e-16;

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<void(Outcome&)> body;
};

ScalarField wave(const Vec& k, double amp, double phase) {
    const int n = static_cast<int>(k.size());
    ScalarField f;
    f.n = n;
    f.value = [=](const Vec& x) { return amp * std::sin(k.dot(x) + phase); };
    f.gradient = [=](const Vec& x) { return Vec(amp * std::cos(k.dot(x) + phase) * k); };
    f.hessian = [=](const Vec& x) { return Mat(-amp * std::sin(k.dot(x) + phase) * k * k.transpose()); };
    return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const std::string kDefaultConfig = std::string(ZM_CONFIG_DIR) + "/default.ini";

void clifford_suite(Outcome& o) {
    PortableRng rng(1001);
    std::size_t violations = 0, trials = 0;
    double worst_relation = 0.0, worst_skew = 0.0;
    for (int n = 2; n <= 5; ++n) {
        const auto rep = GammaRep::build(n);
        worst_relation = std::max(worst_relation, rep.relation_residual());
        worst_skew = std::max(worst_skew, rep.skew_residual());
        for (int t = 0; t < 10000; ++t) {
            const TwoFormValue F(rng.antisymmetric(n));
            const Spinor phi = rng.normal_spinor(rep.spinor_dim());
            const auto b = pointwise_twoform_bound(rep, F, phi);
            ++trials;
            if (b.lhs > b.rhs * (1.0 + 1e-12)) ++violations;
        }
    }
    o.detail << "relation " << worst_relation << ", skew " << worst_skew << ", " << violations << "/"
             << trials << " bound violations";
    o.require(worst_relation <= kEps, "relation residual above machine epsilon");
    o.require(worst_skew == 0.0, "gammas not exactly skew-Hermitian");
    o.require(violations == 0, "pointwise two-form bound violated");
}

void residual_suite(Outcome& o) {
    for (int n : {3, 5}) {
        const auto rep = GammaRep::build(n);
        const auto pair = loss_yau_pair(rep, default_seed(rep));
        const auto pts = random_points(n, 1000, 2000 + static_cast<std::uint64_t>(n), 3.0);
        double closed = 0.0, fd = 0.0;
        for (const auto& x : pts) {
            closed = std::max(closed, zero_mode_residual(pair, rep, x, DiffScheme::closed_form()));
            fd = std::max(fd, zero_mode_residual(pair, rep, x, DiffScheme::central_fd()));
        }
        o.detail << "n=" << n << ": closed " << closed << ", fd " << fd << "; ";
        o.require(closed <= tol::kResidualClosedForm, "closed-form residual n=" + std::to_string(n));
        o.require(fd <= tol::kResidualFd, "FD residual n=" + std::to_string(n));
    }
}

void constants_suite(Outcome& o) {
    const auto c = sphere_constants(3);
    const double closed = c.yamabe / (4.0 * std::sqrt(static_cast<double>(c.v_n))) - 2.0 * c.sobolev;
    const auto rule = make_quadrature(3, 32, Density::Round);
    const double vol = integrate(rule, [](const Vec&) { return 1.0; });
    const double vol_err = rel(vol, 2.0 * kPi * kPi);
    o.detail << "Y/(4 sqrt v) - 2 S_3 = " << closed << ", 2 S_3 = " << 2.0 * c.sobolev
             << ", volume rel. error " << vol_err;
    o.require(std::abs(closed) <= 4.0 * kEps * c.rhs_bound, "Y/(4 sqrt v_3) != 2 S_3");
    o.require(vol_err <= 1e-6, "quadrature volume");
}

void sharp_norm_suite(Outcome& o) {
    VerifyConfig cfg;
    const auto rep3 = GammaRep::build(3);
    const auto r3 = verify_sharp_A_norm(loss_yau_pair(rep3, default_seed(rep3)).A, cfg);
    VerifyConfig c5;
    c5.coarse = 6;
    c5.fine = 12;
    const auto rep5 = GammaRep::build(5);
    const auto r5 = verify_sharp_A_norm(loss_yau_pair(rep5, default_seed(rep5)).A, c5);
    o.detail << "n=3: " << r3.norm_sq.value() << " vs 3 S_3 = " << r3.target << " (dev " << r3.deviation
             << "); n=5: " << r5.norm_sq.value() << " vs (5/3) S_5 = " << r5.target << " (dev "
             << r5.deviation << ")";
    o.require(r3.deviation <= tol::kSharpNorm, "n=3 sharp norm");
    o.require(r5.deviation <= tol::kSharpNorm, "n=5 sharp norm");
}

void invariance_suite(Outcome& o) {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto chart = make_chart(3);
    const auto F = field_strength(pair);
    const double flat = lp_norm_twoform(F, 1.5, chart, make_quadrature(3, 32, Density::Flat), MetricMode::Flat);
    const double round = lp_norm_twoform(F, 1.5, chart, make_quadrature(3, 32, Density::Round), MetricMode::Round);
    const double norm_rel = rel(flat, round);

    const auto pts = random_points(3, 200, 3001, 3.0);
    PortableRng rng(3002);
    double gauge = 0.0;
    for (int s = 0; s < 5; ++s) {
        auto [phi, A] = gauge_transform(pair.phi, pair.A, wave(rng.normal_vec(3), rng.uniform(0.5, 1.5),
                                                               rng.uniform(0.0, 2.0 * kPi)));
        const ZeroModePair moved{phi, A, 3, pair.seed};
        for (const auto& x : pts) gauge = std::max(gauge, zero_mode_residual(moved, rep, x, DiffScheme::central_fd()));
    }

    const auto psi = conformal_push(pair.phi, chart.factor());
    const auto mode = ConformalZeroMode::round(pair, rep, chart);
    double psi_law = 0.0, pairing_law = 0.0;
    for (const auto& x : pts) {
        const double h = chart.h(x);
        const Spinor v = pair.phi.value(x);
        psi_law = std::max(psi_law, rel(psi.value(x).squaredNorm(), std::pow(h, -4.0) * v.squaredNorm()));
        const cplx flat_pair = hermitian(clifford_mul_twoform(rep, TwoFormValue(F.value(x)), v), v);
        const cplx expect = std::pow(h, -8.0) * flat_pair;
        pairing_law = std::max(pairing_law, std::abs(mode.sample(x).pairing - expect) / std::abs(expect));
    }
    o.detail << "||dA||_{3/2} flat " << flat << " round " << round << " (rel " << norm_rel << "), gauge residual "
             << gauge << ", |psi|^2 law " << psi_law << ", pairing law " << pairing_law;
    o.require(norm_rel <= tol::kConformalNorm, "flat vs round norm");
    o.require(gauge <= tol::kResidualFd, "gauge-transformed residual");
    o.require(psi_law <= tol::kConformalPointwise, "|psi|_g^2 scaling");
    o.require(pairing_law <= tol::kConformalPointwise, "<dA.psi, psi> scaling");
}

void identity_suite(Outcome& o) {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto flat = ConformalZeroMode::flat(pair, rep);
    const auto round = ConformalZeroMode::round(pair, rep, make_chart(3));
    for (int res : {16, 32}) {
        const auto rule = make_quadrature(3, res, Density::Round);
        const auto tf = integral_identity_check(flat, rule);
        const auto tr = integral_identity_check(round, rule);
        // Flat balance: int |nabla^A phi|^2 = int i<dA.phi, phi>.
        const double balance = rel(tf.gradient_term, -tf.field_term);
        o.detail << "res " << res << ": flat " << balance << ", round " << tr.relative << "; ";
        o.require(balance <= tol::kIntegralIdentity && tf.relative <= tol::kIntegralIdentity,
                  "flat identity at " + std::to_string(res));
        o.require(tr.relative <= tol::kIntegralIdentity, "round identity at " + std::to_string(res));
    }
}

void spectral_suite(Outcome& o) {
    const auto rep = GammaRep::build(3);
    const auto pair = loss_yau_pair(rep, default_seed(rep));
    const auto chart = make_chart(3);
    const auto F = field_strength(pair);
    const auto w_round = [&](const Vec& x) { return weight_on_sphere(pair, rep, chart, x); };
    const auto w_flat = [&](const Vec& x) { return weight_flat(pair, rep, F, x).real(); };
    const auto six = [](const Vec&) { return 6.0; };
    const auto zero = [](const Vec&) { return 0.0; };

    const auto round_rule = make_quadrature(3, 24, Density::Round);
    const auto flat_rule = make_quadrature(3, 24, Density::Flat);
    const HypersphericalBasis small(3);
    PortableRng rng(7001);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Vec c(static_cast<Eigen::Index>(small.size()));
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.normal();
        const auto u = harmonic_combination(3, c);
        ScalarField hu;
        hu.n = 3;
        hu.value = [&, u](const Vec& x) { return chart.h(x) * u.value(x); };
        const double Ig = rayleigh_functional(u, w_round, chart.factor(), six, 8.0, round_rule);
        const double I0 = rayleigh_functional(hu, w_flat, ConformalFactor::identity(3), zero, 8.0, flat_rule);
        worst = std::max(worst, rel(I0, Ig));
    }
    o.require(worst <= 1e-5, "conformal substitution I_g(u) = I_0(hu)");

    const auto eig_rule = make_quadrature(3, 34, Density::Round);
    std::vector<double> w(eig_rule.size());
    for (std::size_t i = 0; i < eig_rule.size(); ++i) w[i] = w_round(eig_rule.nodes[i]);
    const auto ladder = solve_ladder({8, 12, 16}, w, eig_rule);
    const double lam = ladder.final.lambda1;
    const double gap = ladder.final.convergence_gap;
    o.require(ladder.monotone, "ladder monotone");
    o.require(gap < 1e-2, "final gap < 1e-2");
    o.require(lam <= 1.0 + 10.0 * gap, "lambda1 <= 1 + 10 gap");

    const auto box = extrapolated_box_oracle(w_flat, 8.0);
    const double agreement = rel(box.lambda_inf, lam);
    o.require(agreement <= 1e-2, "FD box oracle agreement");

    o.detail << "substitution " << worst << ", ladder";
    for (const auto& r : ladder.rungs) o.detail << " " << r.lmax << ":" << r.lambda1;
    o.detail << ", gap " << gap << ", box";
    for (const auto& r : box.runs) o.detail << " (R=" << r.R << ",h=" << r.h << ")=" << r.lambda;
    o.detail << " -> " << box.lambda_inf << " (rel " << agreement << ")";
}

void theorem_suite(Outcome& o) {
    const RunConfig cfg = load_config(kDefaultConfig);
    const auto rep = GammaRep::build(3);
    const auto r = verify_theorem(loss_yau_pair(rep, default_seed(rep)), rep, cfg.verify_config());
    o.detail.precision(10);
    o.detail << "lhs " << r.lhs.value() << " rhs " << r.rhs << " margin " << r.margin << " bar " << r.error_bar;
    if (r.conjectured_constant)
        o.detail << "; vs 4 S_3 = " << *r.conjectured_constant << ": " << r.conjecture_relation;
    o.require(r.margin > 3.0 * r.error_bar, "margin > 3 x error bar");
    o.require(r.conjectured_constant.has_value() && !r.conjecture_relation.empty(), "4 S_3 comparison recorded");
    o.require(r.passed(), "report assertions");
}

void determinism_suite(Outcome& o) {
    const RunConfig cfg = load_config(kDefaultConfig);
    const unsigned saved = worker_count();
    set_worker_count(1);
    const std::string a = run_verify(cfg).report.dump(2);
    set_worker_count(2);
    const std::string b = run_verify(cfg).report.dump(2);
    set_worker_count(saved);
    o.detail << a.size() << " bytes";
    o.require(a == b, "report.json differs between runs");
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Clifford suite", 5.0, clifford_suite},
        {2, "zero-mode residual", 10.0, residual_suite},
        {3, "sphere constants", 5.0, constants_suite},
        {4, "sharp potential norm", 60.0, sharp_norm_suite},
        {5, "invariances", 30.0, invariance_suite},
        {6, "integral identity", 60.0, identity_suite},
        {7, "weighted eigenvalue", 300.0, spectral_suite},
        {8, "end-to-end inequality", 300.0, theorem_suite},
        {9, "determinism", 600.0, determinism_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.ok = false;
            o.detail << " [over runtime budget " << c.budget_seconds << " s]";
        }
        if (!o.ok) ++failed;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.ok ? "PASS" : "FAIL") << " ["
                  << timing << "] " << o.detail.str() << std::endl;
    }
    std::cout << (failed == 0 ? "acceptance: all criteria PASS" : "acceptance: FAIL") << std::endl;
    return failed == 0 ? 0 : 1;
}
