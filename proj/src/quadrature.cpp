#include "zm/geometry.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "zm/errors.hpp"
#include "zm/parallel.hpp"

namespace zm {

void gauss_legendre(int count, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    // Jacobi matrix of the Legendre recurrence; nodes are its eigenvalues and
    // weights 2 * (first eigenvector component)^2.
    Vec diag = Vec::Zero(count);
    Vec sub(std::max(count - 1, 0));
    for (int k = 1; k < count; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    nodes.resize(static_cast<std::size_t>(count));
    weights.resize(static_cast<std::size_t>(count));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (int k = 0; k < count; ++k) {
        nodes[k] = mid + half * es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[k] = 2.0 * v0 * v0 * half;
    }
}

QuadratureRule make_quadrature(int n, int resolution, Density density) {
    if (n < 3) throw std::invalid_argument("quadrature needs n >= 3");
    if (resolution < 4) throw std::invalid_argument("quadrature resolution must be >= 4");
    QuadratureRule rule;
    rule.n = n;
    rule.resolution = resolution;
    rule.density = density;

    gauss_legendre(resolution, 0.0, kPi, rule.chi, rule.chi_weights);
    for (std::size_t i = 0; i < rule.chi.size(); ++i)
        rule.chi_weights[i] *= std::pow(std::sin(rule.chi[i]), n - 1);

    const int n_theta = n - 2;
    rule.theta.resize(static_cast<std::size_t>(n_theta));
    rule.theta_weights.resize(static_cast<std::size_t>(n_theta));
    for (int k = 0; k < n_theta; ++k) {
        gauss_legendre(resolution, 0.0, kPi, rule.theta[k], rule.theta_weights[k]);
        const int power = n - 2 - k;
        for (std::size_t i = 0; i < rule.theta[k].size(); ++i)
            rule.theta_weights[k][i] *= std::pow(std::sin(rule.theta[k][i]), power);
    }

    const int n_phi = 2 * resolution;
    rule.phi.resize(static_cast<std::size_t>(n_phi));
    rule.phi_weights.assign(static_cast<std::size_t>(n_phi), 2.0 * kPi / n_phi);
    for (int i = 0; i < n_phi; ++i) rule.phi[i] = 2.0 * kPi * (i + 0.5) / n_phi;

    // Angular tensor grid on S^{n-1}, built recursively: omega_1 = cos t1, omega_2 = sin t1 cos t2, ...,
    // omega_{n-1} = prod sin * cos phi, omega_n = prod sin * sin phi.
    struct Partial {
        std::vector<double> coords;
        double sinprod;
        double weight;
    };
    std::vector<Partial> partial{{{}, 1.0, 1.0}};
    for (int k = 0; k < n_theta; ++k) {
        std::vector<Partial> next;
        next.reserve(partial.size() * rule.theta[k].size());
        for (const auto& p : partial)
            for (std::size_t i = 0; i < rule.theta[k].size(); ++i) {
                Partial q = p;
                q.coords.push_back(p.sinprod * std::cos(rule.theta[k][i]));
                q.sinprod = p.sinprod * std::sin(rule.theta[k][i]);
                q.weight = p.weight * rule.theta_weights[k][i];
                next.push_back(std::move(q));
            }
        partial = std::move(next);
    }
    std::vector<Vec> omegas;
    std::vector<double> omega_w;
    omegas.reserve(partial.size() * rule.phi.size());
    for (const auto& p : partial)
        for (std::size_t i = 0; i < rule.phi.size(); ++i) {
            Vec w(n);
            for (int c = 0; c < n_theta; ++c) w(c) = p.coords[c];
            w(n - 2) = p.sinprod * std::cos(rule.phi[i]);
            w(n - 1) = p.sinprod * std::sin(rule.phi[i]);
            omegas.push_back(std::move(w));
            omega_w.push_back(p.weight * rule.phi_weights[i]);
        }

    const std::size_t total = rule.chi.size() * omegas.size();
    rule.nodes.reserve(total);
    rule.round_weights.reserve(total);
    rule.flat_weights.reserve(total);
    for (std::size_t a = 0; a < rule.chi.size(); ++a) {
        const double r = std::tan(0.5 * rule.chi[a]);
        const double rho = 2.0 / (1.0 + r * r);
        const double rho_n = std::pow(rho, n);
        for (std::size_t b = 0; b < omegas.size(); ++b) {
            rule.nodes.push_back(r * omegas[b]);
            const double w = rule.chi_weights[a] * omega_w[b];
            rule.round_weights.push_back(w);
            rule.flat_weights.push_back(w / rho_n);
        }
    }
    return rule;
}

double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values) {
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = weights[i] * values[i];
    return pairwise_sum(terms);
}

namespace {

std::vector<double> sample(const QuadratureRule& rule,
                           const std::function<double(const Vec&)>& f) {
    auto values = evaluate_indexed(rule.size(), [&](std::size_t i) { return f(rule.nodes[i]); });
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << "non-finite integrand at node " << i << " x = ("
                << rule.nodes[i].transpose() << ")";
            throw NonFiniteSample(msg.str(), rule.nodes[i]);
        }
    return values;
}

}  // namespace

double integrate(const QuadratureRule& rule, const std::function<double(const Vec&)>& f) {
    return integrate(rule, rule.density, f);
}

double integrate(const QuadratureRule& rule, Density density,
                 const std::function<double(const Vec&)>& f) {
    return weighted_sum(rule.weights(density), sample(rule, f));
}

double integrate_in_metric(const QuadratureRule& rule, const ConformalFactor& factor,
                           const std::function<double(const Vec&)>& f) {
    return integrate(rule, Density::Flat,
                     [&](const Vec& x) { return factor.volume_density(x) * f(x); });
}

void write_columns(const QuadratureRule& rule, std::ostream& os) {
    os << "# n=" << rule.n << " resolution=" << rule.resolution
       << " density=" << (rule.density == Density::Round ? "round" : "flat") << '\n';
    os.precision(17);
    const auto& w = rule.weights();
    for (std::size_t i = 0; i < rule.size(); ++i) {
        for (int c = 0; c < rule.n; ++c) os << rule.nodes[i](c) << ' ';
        os << w[i] << '\n';
    }
}

}  // namespace zm
