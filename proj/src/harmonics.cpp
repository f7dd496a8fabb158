#include "zm/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gegenbauer.hpp>

namespace zm {

SphereAngles chart_angles(const Vec& x) {
    if (x.size() != 3) throw std::invalid_argument("hyperspherical harmonics are defined for n = 3");
    SphereAngles a;
    const double r2 = x.squaredNorm();
    a.chi = std::atan2(2.0 * std::sqrt(r2), 1.0 - r2);
    const double r = std::sqrt(r2);
    if (r > 0.0) {
        a.theta = std::acos(std::clamp(x(0) / r, -1.0, 1.0));
        a.phi = std::atan2(x(2), x(1));
    }
    return a;
}

HypersphericalBasis::HypersphericalBasis(int lmax) : lmax_(lmax) {
    if (lmax < 0) throw std::invalid_argument("lmax must be >= 0");
    for (int k = 0; k <= lmax; ++k)
        for (int l = 0; l <= k; ++l)
            for (int m = -l; m <= l; ++m) indices_.push_back({k, l, m});
}

double HypersphericalBasis::radial(int degree, int l, double chi) {
    const int k = degree - l;
    const double alpha = l + 1.0;
    // int_{-1}^{1} (1-t^2)^{alpha-1/2} C_k^alpha(t)^2 dt
    //   = pi 2^{1-2 alpha} Gamma(k + 2 alpha) / (k! (k + alpha) Gamma(alpha)^2)
    const double log_norm_sq = std::log(kPi) + (1.0 - 2.0 * alpha) * std::log(2.0) +
                               std::lgamma(k + 2.0 * alpha) - std::lgamma(k + 1.0) -
                               std::log(k + alpha) - 2.0 * std::lgamma(alpha);
    const double c = boost::math::gegenbauer(static_cast<unsigned>(k), alpha, std::cos(chi));
    return std::exp(-0.5 * log_norm_sq) * std::pow(std::sin(chi), l) * c;
}

double HypersphericalBasis::azimuthal(int m, double phi) {
    if (m > 0) return std::sqrt(2.0) * std::cos(m * phi);
    if (m < 0) return std::sqrt(2.0) * std::sin(-m * phi);
    return 1.0;
}

double HypersphericalBasis::angular(int l, int m, double theta, double phi) {
    const unsigned am = static_cast<unsigned>(std::abs(m));
    return std::sph_legendre(static_cast<unsigned>(l), am, theta) * azimuthal(m, phi);
}

double HypersphericalBasis::evaluate(std::size_t index, const SphereAngles& a) const {
    const auto& h = indices_.at(index);
    return radial(h.degree, h.l, a.chi) * angular(h.l, h.m, a.theta, a.phi);
}

Vec HypersphericalBasis::evaluate_all(const SphereAngles& a) const {
    // Tabulate the factors once; the radial part depends on (k, l), the
    // angular part on (l, m).
    std::vector<double> ang(static_cast<std::size_t>((lmax_ + 1) * (lmax_ + 1)));
    for (int l = 0; l <= lmax_; ++l)
        for (int m = -l; m <= l; ++m) ang[angular_index(l, m)] = angular(l, m, a.theta, a.phi);
    Vec out(static_cast<Eigen::Index>(indices_.size()));
    int last_k = -1, last_l = -1;
    double rad = 0.0;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        const auto& h = indices_[i];
        if (h.degree != last_k || h.l != last_l) {
            rad = radial(h.degree, h.l, a.chi);
            last_k = h.degree;
            last_l = h.l;
        }
        out(static_cast<Eigen::Index>(i)) = rad * ang[angular_index(h.l, h.m)];
    }
    return out;
}

}  // namespace zm
