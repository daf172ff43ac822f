#pragma once

// Run configuration for the command-line tool.
//
// Text grammar, one entry per line:
//
//   # comment              (also after a value)
//   [section]              prefixes later keys with "section."
//   key = value            key may be dotted: model.kappa = 1
//   checks = prop3.1, lemma5.1    comma-separated lists
//
// Values are numbers, true/false or bare/quoted strings. A file whose first
// non-blank character is '{' is read as JSON with the same nesting instead.

#include "berger/canonical.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace berger {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SurfaceConfig {
    /// hopf_torus | clifford | critical_torus | perturbed | cylinder | slice
    std::string kind = "clifford";
    double r = 0.5;
    double epsilon = 0.05;
    std::pair<int, int> mode{2, 3};
    std::string curve = "circle";  ///< cylinder base: circle | line
    double radius = 1.0;
    double half_length = 0.5;
    double height = 1.0;
    double half_width = 0.5;       ///< slice patch
};

struct FlowConfig {
    bool enabled = true;
    std::string kind = "radius";  ///< radius (Hopf family) | graph (normal graph of the configured surface)
    double r0 = 0.4;
    int max_steps = 200;
    double tol = 1e-8;
};

struct RunConfig {
    double kappa = 1.0;
    double tau = 1.0;
    std::string chart;  ///< optional: hopf | bcv; must match the surface when given
    SurfaceConfig surface;
    int nu = 128, nv = 128;
    std::vector<std::string> checks{"all"};
    FlowConfig flow;
    std::optional<double> tol_pointwise, tol_integral;
    std::string convergence_check = "prop3.1";
    std::vector<int> convergence_grids{32, 64, 128, 256};
    std::string json_path, csv_path;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Echo of every field in a fixed order.
nlohmann::ordered_json to_json(const RunConfig& cfg);

ModelParams model_of(const RunConfig& cfg);
/// The configured surface; throws ModelError/DomainError/ConfigError on incompatible input.
Immersion build_surface(const RunConfig& cfg);

}  // namespace berger
