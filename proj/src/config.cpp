#include "zm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <sstream>

namespace zm {

namespace pt = boost::property_tree;

namespace {

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
    if (!tree.get_child_optional(key)) return fallback;
    try {
        return tree.get<T>(key);
    } catch (const pt::ptree_bad_data&) {
        throw ConfigError("invalid value for '" + key + "'");
    }
}

std::vector<int> parse_ladder(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("invalid entry '" + item + "' in spectral.ladder");
        }
    }
    return out;
}

}  // namespace

VerifyConfig RunConfig::verify_config() const {
    VerifyConfig v;
    v.coarse = coarse;
    v.fine = fine;
    v.ladder = ladder;
    v.eig_resolution = eig_resolution;
    v.fd_step = fd_step;
    v.gate_points = gate_points;
    v.gate_half_width = gate_half_width;
    v.decay_radius = decay_radius;
    v.seed = seed;
    v.quadrature_tolerance = quadrature_tolerance;
    v.refinement_check = refinement_check;
    return v;
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.message());
    }
    RunConfig c;
    c.n = get(tree, "run.n", c.n);
    c.seed = get(tree, "run.seed", c.seed);
    c.out_dir = get(tree, "run.out", c.out_dir);
    c.coarse = get(tree, "quadrature.coarse", c.coarse);
    c.fine = get(tree, "quadrature.fine", c.fine);
    c.quadrature_tolerance = get(tree, "quadrature.tolerance", c.quadrature_tolerance);
    c.refinement_check = get(tree, "quadrature.refinement_check", c.refinement_check);
    if (auto l = tree.get_optional<std::string>("spectral.ladder")) c.ladder = parse_ladder(*l);
    c.eig_resolution = get(tree, "spectral.resolution", c.eig_resolution);
    const auto weight = get<std::string>(tree, "spectral.weight", "zero_mode");
    if (weight == "zero_mode")
        c.weight = WeightChoice::ZeroMode;
    else if (weight == "one")
        c.weight = WeightChoice::One;
    else
        throw ConfigError("spectral.weight must be 'zero_mode' or 'one'");
    c.box_oracle = get(tree, "spectral.box_oracle", c.box_oracle);
    c.fd_step = get(tree, "fd.step", c.fd_step);
    c.gate_points = get(tree, "gate.points", c.gate_points);
    c.gate_half_width = get(tree, "gate.half_width", c.gate_half_width);
    c.decay_radius = get(tree, "gate.decay_radius", c.decay_radius);
    c.identity_points = get(tree, "identities.points", c.identity_points);
    c.gauge_sweeps = get(tree, "identities.gauge_sweeps", c.gauge_sweeps);
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return parse_config(in);
}

void validate(const RunConfig& c) {
    if (c.n < 3 || c.n % 2 == 0) throw ConfigError("odd dimension required for zero-mode construction");
    if (c.coarse < 4) throw ConfigError("quadrature.coarse must be >= 4");
    if (c.fine != 2 * c.coarse) throw ConfigError("quadrature.fine must equal 2 x quadrature.coarse");
    if (!(c.quadrature_tolerance > 0.0)) throw ConfigError("quadrature.tolerance must be positive");
    if (c.ladder.empty()) throw ConfigError("spectral.ladder must not be empty");
    for (std::size_t k = 0; k < c.ladder.size(); ++k) {
        if (c.ladder[k] < 2) throw ConfigError("spectral.ladder entries must be >= 2");
        if (k > 0 && c.ladder[k] <= c.ladder[k - 1])
            throw ConfigError("spectral.ladder must be strictly increasing");
    }
    if (c.eig_resolution <= 2 * c.ladder.back())
        throw ConfigError("spectral.resolution must exceed 2 x the largest ladder entry");
    if (!(c.fd_step > 0.0 && c.fd_step <= 1e-2)) throw ConfigError("fd.step must lie in (0, 1e-2]");
    if (c.gate_points == 0) throw ConfigError("gate.points must be positive");
    if (!(c.gate_half_width > 0.0)) throw ConfigError("gate.half_width must be positive");
    if (!(c.decay_radius > 1.0)) throw ConfigError("gate.decay_radius must exceed 1");
    if (c.identity_points == 0) throw ConfigError("identities.points must be positive");
    if (c.gauge_sweeps < 1) throw ConfigError("identities.gauge_sweeps must be >= 1");
}

}  // namespace zm
