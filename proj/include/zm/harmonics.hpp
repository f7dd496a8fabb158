#pragma once

// Real orthonormal hyperspherical harmonics on S^3,
//   Y_{k l m}(chi, theta, phi) = N_{kl} sin^l(chi) C^{(l+1)}_{k-l}(cos chi) Y_{lm}(theta, phi),
// 0 <= l <= k, |m| <= l, with -Delta Y = k(k+2) Y. chi is the polar angle
// measured from the chart origin; (theta, phi) are the chart direction angles
// with theta measured from the x_1 axis.

#include <vector>

#include "zm/types.hpp"

namespace zm {

struct HarmonicIndex {
    int degree = 0;
    int l = 0;
    int m = 0;
};

struct SphereAngles {
    double chi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// Angles of the chart point x (n = 3) on S^3.
SphereAngles chart_angles(const Vec& x);

class HypersphericalBasis {
public:
    explicit HypersphericalBasis(int lmax);

    int lmax() const { return lmax_; }
    std::size_t size() const { return indices_.size(); }
    const std::vector<HarmonicIndex>& indices() const { return indices_; }

    /// k(k+2)
    static double laplace_eigenvalue(int degree) { return degree * (degree + 2.0); }

    /// N_{kl} sin^l(chi) C^{(l+1)}_{k-l}(cos chi), normalized against sin^2(chi) d chi.
    static double radial(int degree, int l, double chi);
    /// Real orthonormal spherical harmonic on S^2.
    static double angular(int l, int m, double theta, double phi);
    /// sqrt(2) cos(m phi), 1, sqrt(2) sin(|m| phi) for m > 0, 0, < 0.
    static double azimuthal(int m, double phi);

    double evaluate(std::size_t index, const SphereAngles& a) const;
    Vec evaluate_all(const SphereAngles& a) const;

    /// Position of (l, m) in the angular index list ordered by l then m.
    static int angular_index(int l, int m) { return l * l + (m + l); }

private:
    int lmax_;
    std::vector<HarmonicIndex> indices_;
};

}  // namespace zm
