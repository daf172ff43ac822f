#pragma once

// Willmore energy W = int (H^2 + Kbar) dA, its Euler-Lagrange operator, the normal
// first-variation density and gradient descent on Hopf tori and on normal graphs.

#include "berger/canonical.hpp"
#include "berger/surface.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace berger {

struct EnergyBreakdown {
    double W = 0.0;
    double integral_H2 = 0.0;
    double integral_Kbar = 0.0;
    double area = 0.0;
};

/// Sectional curvature of the tangent plane, tau^2 + (kappa - 4 tau^2) C^2.
ScalarField ambient_sectional(const GeometryField& gf);
/// Ric(N, N) = kappa - 2 tau^2 - (kappa - 4 tau^2) C^2.
ScalarField ricci_normal(const GeometryField& gf);

/// Over the whole parameter domain; on patches this is the energy of the patch.
EnergyBreakdown willmore_energy(const GeometryField& gf);

struct ELResidual {
    ScalarField field;
    double max_abs = 0.0;
    double integral = 0.0;  ///< signed int of the field
    double rms = 0.0;       ///< sqrt(int field^2 dA / Area)
};

/// Delta H + (|Phi|^2 + (kappa - 4 tau^2)(1 + C^2)) H - 2 (kappa - 4 tau^2) <A T, T>.
ELResidual el_residual(const GeometryField& gf);

/// Density G with dW/dt = int G f dA for the normal variation f N.
ScalarField variation_gradient(const GeometryField& gf);

/// Smooth random field sum_{|m|,|n| <= max_mode} a_mn cos(m u + n v + phase_mn), unit sup scale.
ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed, int max_mode = 3);

struct GradientCheck {
    double fd_derivative = 0.0;  ///< [W(X + delta f N) - W(X - delta f N)] / (2 delta)
    double predicted = 0.0;      ///< int G f dA
    double abs_gap = 0.0;
    double rel_gap = 0.0;  ///< abs_gap / max(|fd|, |predicted|), 0 when both vanish
};

GradientCheck gradient_check(const NodalImmersion& imm, const ModelParams& model, const ScalarField& f,
                             double delta = 1e-4);

struct FlowStep {
    int step = 0;
    double parameter = 0.0;  ///< r for the Hopf family, max offset for the graph flow
    double energy = 0.0;
    double grad_norm = 0.0;
    double step_size = 0.0;
};

struct FlowResult {
    std::vector<FlowStep> trajectory;
    bool converged = false;
    std::string note;

    // Hopf-family flow only.
    double r_final = 0.0;
    double H_final = 0.0;
    double dWdr = 0.0;           ///< from int G f dA
    double dWdr_fd = 0.0;        ///< central difference of W(r)
    double el_max = 0.0;         ///< max |EL| at the limit
    std::optional<double> target_H;  ///< sqrt((2 tau^2 - kappa) / 2) when kappa < 2 tau^2
    double clifford_second_difference = 0.0;  ///< W''(1/sqrt 2) by central differences

    // Graph flow only.
    std::optional<NodalImmersion> final_immersion;
};

struct FlowNotConverged : std::runtime_error {
    FlowNotConverged(const std::string& what, FlowResult r) : std::runtime_error(what), result(std::move(r)) {}
    FlowResult result;
};

struct FlowOptions {
    int max_steps = 200;
    double tol = 1e-8;        ///< stop when |dW/dr| (or max |G|) is below this
    double initial_step = 1e-2;
    int max_backtracks = 50;
    int grid_nodes = 16;      ///< Hopf family: H, C and the metric are constant, so a coarse grid is exact
};

/// W(r) of the Hopf torus of radius r, evaluated on a grid_nodes^2 grid.
double hopf_energy(const ModelParams& model, double r, int grid_nodes = 16);
/// dW/dr = int G <d_r X, N> dA on the Hopf torus of radius r.
double hopf_energy_derivative(const ModelParams& model, double r, int grid_nodes = 16);

/// Relative energy change treated as rounding noise by the Hopf-family line search.
constexpr double kEnergyRoundoff = 1e-12;

/// Projected gradient descent on r -> W(hopf_torus(r)) with Armijo backtracking.
FlowResult flow_radius_family(const ModelParams& model, double r0, const FlowOptions& opts = {});

/// Explicit descent x <- x - s G N on a sampled immersion, backtracking on energy increase.
FlowResult flow_normal_graph(const NodalImmersion& imm, const ModelParams& model, const FlowOptions& opts);

/// step,parameter,energy,grad_norm,step_size rows.
void write_trajectory_csv(std::ostream& os, const FlowResult& result);

}  // namespace berger
