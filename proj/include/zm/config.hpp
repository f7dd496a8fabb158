#pragma once

// Run configuration for the zmcheck driver: an INI file with flat sections.
//
//   [run]        n, seed, out
//   [quadrature] coarse, fine, tolerance, refinement_check
//   [spectral]   ladder (comma separated), resolution, weight (zero_mode|one), box_oracle
//   [fd]         step
//   [gate]       points, half_width, decay_radius
//   [identities] points, gauge_sweeps

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "zm/inequality.hpp"

namespace zm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class WeightChoice { ZeroMode, One };

struct RunConfig {
    int n = 3;
    std::uint64_t seed = 20240611;
    std::string out_dir = "out";
    int coarse = 16;
    int fine = 32;
    double quadrature_tolerance = 1e-3;
    bool refinement_check = true;
    std::vector<int> ladder{8, 12, 16};
    int eig_resolution = 34;
    WeightChoice weight = WeightChoice::ZeroMode;
    bool box_oracle = false;
    double fd_step = tol::kFdStep;
    std::size_t gate_points = 1000;
    double gate_half_width = 3.0;
    double decay_radius = 1e3;
    std::size_t identity_points = 200;
    int gauge_sweeps = 5;

    VerifyConfig verify_config() const;
};

/// Throws ConfigError with a message naming the offending key.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Checks the invariants (odd n >= 3, fine = 2 coarse, strictly increasing
/// ladder with entries >= 2, resolution > 2 max(ladder), 0 < fd step <= 1e-2).
void validate(const RunConfig& cfg);

}  // namespace zm
