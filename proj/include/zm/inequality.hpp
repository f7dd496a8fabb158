#pragma once

// End-to-end check of ||dA||_{n/2} > Y / (4 sqrt(v_n)) for an explicit zero
// mode, with every intermediate inequality of the argument evaluated and
// carried with an error bar.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zm/fields.hpp"
#include "zm/geometry.hpp"
#include "zm/spectral.hpp"
#include "zm/zero_modes.hpp"

namespace zm {

struct VerifyConfig {
    int coarse = 16;
    int fine = 32;
    std::vector<int> ladder{8, 12, 16};
    int eig_resolution = 34;  ///< must exceed 2 * max(ladder)
    double fd_step = tol::kFdStep;
    std::size_t gate_points = 1000;
    double gate_half_width = 3.0;
    double decay_radius = 1e3;
    std::uint64_t seed = 20240611;
    double quadrature_tolerance = 1e-3;
    bool refinement_check = true;  ///< also evaluate lhs at 2 * fine
};

struct GateReport {
    std::size_t points = 0;
    double max_residual_closed = 0.0;  ///< NaN when phi has no closed-form derivatives
    double max_residual_fd = 0.0;
    double phi_origin = 0.0;      ///< |phi(0)|
    double decay_exponent = 0.0;  ///< -log2(|phi(2R e_1)| / |phi(R e_1)|)
    bool passed = false;
    std::string reason;
};

/// Residual gate: closed-form residual <= 1e-8 (when available), FD residual
/// <= 1e-4, |phi(0)| > 0 and decay exponent >= n - 1 - 0.05. Never throws.
GateReport residual_gate(const ZeroModePair& pair, const GammaRep& rep, const VerifyConfig& cfg);

struct PointwiseSlack {
    std::size_t nodes = 0;
    std::size_t violations = 0;  ///< nodes with lhs > rhs beyond rounding
    double min_ratio = 0.0;      ///< min lhs/rhs over nodes with rhs > 0
    double max_ratio = 0.0;
    double integrated_slack = 0.0;  ///< int (rhs - lhs) dv_g
};

struct SpectralSummary {
    std::vector<LadderRung> rungs;
    double lambda1 = 0.0;
    double gap = 0.0;
    bool monotone = true;
    bool short_ladder = false;
    double claim1_epsilon = 0.0;  ///< max(gap, 1e-3)
    bool claim1 = false;          ///< lambda1 <= 1 + claim1_epsilon
    double rayleigh_residual = 0.0;
    double power_iteration_lambda1 = 0.0;
    double symmetry_residual = 0.0;
};

struct ChainLink {
    std::string name;
    double value = 0.0;
};

/// Lower bounds for ||dA||_{n/2}, each no smaller than the previous one:
/// rhs, rhs/lambda1 (Claim 1), E(u1)/(4 sqrt(v) lambda1 |u1|^2) (Yamabe),
/// int |dA| u1^2 / |u1|^2 (pointwise bound), lhs (Hoelder).
struct HolderChain {
    std::vector<ChainLink> links;
    double u1_sobolev_norm_sq = 0.0;  ///< ||u1||^2_{2n/(n-2)}
    double holder_slack = 0.0;        ///< lhs |u1|^2 - int |dA| u1^2
    double tolerance = 0.0;           ///< allowed backward step per link
    bool consistent = false;
};

struct EqualityProbe {
    ConvergedValue gradient_integral;  ///< int |nabla^A psi|^2 dv_g on the round sphere
    bool excludes_zero = false;        ///< value > 3 x pair difference
    bool consistency_checked = false;  ///< only when lambda1 < 1
    double gradient_hat = 0.0;         ///< int |nabla^A psi|^2 in g_hat = (h u1)^{4/(n-2)} g0
    double pairing_hat = 0.0;          ///< int i<dA.psi, psi> in g_hat
    double consistency_residual = 0.0; ///< |G - (1 - lambda1) P| / (|G| + |P|)
    bool consistent = true;
};

struct SharpNormReport {
    ConvergedValue norm_sq;  ///< ||A||_n^2
    double target = 0.0;     ///< (n/(n-2)) S_n
    double deviation = 0.0;  ///< |norm_sq - target| / target
    bool optimal = false;
};

struct VerificationReport {
    int n = 0;
    std::uint64_t seed = 0;
    VerifyConfig config;
    GateReport gate;
    SphereConstants constants;
    ConvergedValue lhs;
    std::optional<double> lhs_doubled;
    bool stable_under_refinement = true;
    double rhs = 0.0;
    double margin = 0.0;
    double quadrature_bar = 0.0;
    double error_bar = 0.0;  ///< quadrature bar + spectral gap
    bool strict = false;     ///< margin > 3 error_bar
    std::optional<SpectralSummary> spectral;
    PointwiseSlack pointwise;
    std::optional<HolderChain> chain;
    std::optional<EqualityProbe> equality;
    SharpNormReport sharp;
    std::optional<double> conjectured_constant;  ///< 4 S_3 (n = 3 only)
    std::string conjecture_relation;             ///< "above" | "below" | "equal within error bar"

    bool passed() const;
    std::vector<std::string> failures() const;
};

/// Throws GateError when the pair fails the residual gate and
/// ConvergenceError when a quadrature ladder does not settle.
VerificationReport verify_theorem(const ZeroModePair& pair, const GammaRep& rep,
                                  const VerifyConfig& cfg);

/// ||A||_n^2 against the sharp Sobolev value (n/(n-2)) S_n.
SharpNormReport verify_sharp_A_norm(const OneFormField& A, const VerifyConfig& cfg);

/// Distance of the pushed pair from the equality case. When `spectral` is
/// given with lambda1 < 1, also checks 0 = (lambda1 - 1) int 4i<dA.psi,psi>
/// + int 4|nabla^A psi|^2 in the metric built from the eigenfunction.
EqualityProbe equality_forcing_probe(const ZeroModePair& pair, const GammaRep& rep,
                                     const VerifyConfig& cfg,
                                     const WeightedEigenProblem* problem = nullptr,
                                     const EigenResult* spectral = nullptr);

/// Quadrature pair difference with a rounding floor of 1e-12 relative.
double quadrature_error_bar(const ConvergedValue& v);

nlohmann::json to_json(const VerificationReport& report);
/// "quantity,value" lines for the chain and the headline numbers.
void write_chain_csv(const VerificationReport& report, std::ostream& os);

}  // namespace zm
