#include "berger/willmore.hpp"

#include "berger/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace berger {

namespace {

void require_closed(const GeometryField& gf, const char* what) {
    if (!gf.grid.closed()) throw PreconditionError(std::string(what) + " needs a closed surface");
}

ScalarField pointwise_AT_T(const GeometryField& gf) { return inner(gf, apply(gf.shape, gf.T), gf.T); }

}  // namespace

ScalarField ambient_sectional(const GeometryField& gf) {
    const double a = gf.model.anisotropy(), tau = gf.model.tau();
    return (tau * tau + a * gf.C.array().square()).matrix();
}

ScalarField ricci_normal(const GeometryField& gf) {
    const double a = gf.model.anisotropy(), tau = gf.model.tau();
    return (gf.model.kappa() - 2.0 * tau * tau - a * gf.C.array().square()).matrix();
}

EnergyBreakdown willmore_energy(const GeometryField& gf) {
    EnergyBreakdown e;
    e.integral_H2 = integrate(gf, gf.H.array().square().matrix());
    e.integral_Kbar = integrate(gf, ambient_sectional(gf));
    e.area = area(gf);
    e.W = e.integral_H2 + e.integral_Kbar;
    return e;
}

ELResidual el_residual(const GeometryField& gf) {
    require_closed(gf, "el_residual");
    const double a = gf.model.anisotropy();
    const auto C2 = gf.C.array().square();
    ELResidual out;
    out.field = (laplace_beltrami(gf, gf.H).array() + (gf.norm_phi2.array() + a * (1.0 + C2)) * gf.H.array() -
                 2.0 * a * pointwise_AT_T(gf).array())
                    .matrix();
    out.max_abs = max_abs(gf, out.field);
    out.integral = integrate(gf, out.field);
    out.rms = std::sqrt(integrate(gf, out.field.array().square().matrix()) / area(gf));
    return out;
}

ScalarField variation_gradient(const GeometryField& gf) {
    require_closed(gf, "variation_gradient");
    const double a = gf.model.anisotropy();
    const auto H = gf.H.array();
    const auto C2 = gf.C.array().square();
    return (laplace_beltrami(gf, gf.H).array() + (ricci_normal(gf).array() + gf.norm_A2.array()) * H -
            2.0 * H * (H.square() + ambient_sectional(gf).array()) +
            2.0 * a * (2.0 * H * C2 - pointwise_AT_T(gf).array()))
        .matrix();
}

ScalarField random_smooth_field(const Grid& grid, std::uint64_t seed, int max_mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), phase(0.0, 2.0 * M_PI);
    ScalarField f = ScalarField::Zero(grid.size());
    const double ku = 2.0 * M_PI / grid.lu(), kv = 2.0 * M_PI / grid.lv();
    for (int m = -max_mode; m <= max_mode; ++m)
        for (int n = 0; n <= max_mode; ++n) {
            if (n == 0 && m < 0) continue;
            const double c = coef(rng), ph = phase(rng);
            for (int i = 0; i < grid.nu(); ++i)
                for (int j = 0; j < grid.nv(); ++j)
                    f[grid.index(i, j)] += c * std::cos(m * ku * grid.u(i) + n * kv * grid.v(j) + ph);
        }
    const double scale = f.cwiseAbs().maxCoeff();
    return scale > 0.0 ? ScalarField(f / scale) : f;
}

GradientCheck gradient_check(const NodalImmersion& imm, const ModelParams& model, const ScalarField& f,
                             double delta) {
    const GeometryField gf = geometry_field(imm, model);
    require_closed(gf, "gradient_check");
    GradientCheck out;
    out.predicted = integrate(gf, variation_gradient(gf).cwiseProduct(f));
    AmbientField step = gf.normal;
    for (Eigen::Index n = 0; n < gf.size(); ++n) step.col(n) *= delta * f[n];
    const double w_plus = willmore_energy(geometry_field(displaced(imm, step), model)).W;
    const double w_minus = willmore_energy(geometry_field(displaced(imm, -step), model)).W;
    out.fd_derivative = (w_plus - w_minus) / (2.0 * delta);
    out.abs_gap = std::abs(out.fd_derivative - out.predicted);
    const double scale = std::max(std::abs(out.fd_derivative), std::abs(out.predicted));
    out.rel_gap = scale > 0.0 ? out.abs_gap / scale : 0.0;
    return out;
}

double hopf_energy(const ModelParams& model, double r, int grid_nodes) {
    const Grid grid = Grid::periodic(grid_nodes, grid_nodes);
    return willmore_energy(geometry_field(hopf_torus(HopfTorusSpec(r, model)), grid, model)).W;
}

namespace {

/// Energy and its r-derivative from a single geometry evaluation.
struct FamilyPoint {
    double W, dWdr, H, el_max;
};

FamilyPoint family_point(const ModelParams& model, double r, int grid_nodes) {
    const Grid grid = Grid::periodic(grid_nodes, grid_nodes);
    const GeometryField gf = geometry_field(hopf_torus(HopfTorusSpec(r, model)), grid, model);
    // d/dr of the chart position (arccos r, u, v), projected on the unit normal.
    const AmbientVector dx(-1.0 / std::sqrt(1.0 - r * r), 0.0, 0.0);
    ScalarField f(gf.size());
    for (Eigen::Index n = 0; n < gf.size(); ++n) {
        const auto md = metric_at(model, gf.chart, AmbientPoint(gf.x.col(n)));
        f[n] = md.inner(dx, AmbientVector(gf.normal.col(n)));
    }
    const ELResidual el = el_residual(gf);
    return {willmore_energy(gf).W, integrate(gf, variation_gradient(gf).cwiseProduct(f)), gf.H[0], el.max_abs};
}

}  // namespace

double hopf_energy_derivative(const ModelParams& model, double r, int grid_nodes) {
    return family_point(model, r, grid_nodes).dWdr;
}

FlowResult flow_radius_family(const ModelParams& model, double r0, const FlowOptions& opts) {
    if (!model.is_berger_sphere()) throw ModelError("the Hopf-torus family lives in a Berger sphere");
    if (!(r0 > 0.0 && r0 < 1.0)) throw PreconditionError("r0 must lie in (0, 1)");
    constexpr double r_min = 1e-3, r_max = 1.0 - 1e-3;
    const int nodes = opts.grid_nodes;

    FlowResult res;
    const double kappa = model.kappa(), tau = model.tau();
    if (kappa < 2.0 * tau * tau) res.target_H = std::sqrt((2.0 * tau * tau - kappa) / 2.0);

    double r = r0;
    FamilyPoint cur = family_point(model, r, nodes);
    double s = opts.initial_step;
    res.trajectory.push_back({0, r, cur.W, std::abs(cur.dWdr), s});

    for (int step = 1; step <= opts.max_steps && std::abs(cur.dWdr) > opts.tol; ++step) {
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            const double r_new = std::clamp(r - s * cur.dWdr, r_min, r_max);
            const FamilyPoint next = family_point(model, r_new, nodes);
            const double predicted = cur.dWdr * (r - r_new);
            const bool armijo = cur.W - next.W >= 1e-4 * predicted;
            // Once the predicted decrease is below the energy's rounding level, energy
            // comparisons are noise: accept steps that shrink the gradient and keep W
            // within kEnergyRoundoff of its current value.
            const double slack = kEnergyRoundoff * std::abs(cur.W);
            const bool at_roundoff = predicted <= slack && std::abs(next.dWdr) < std::abs(cur.dWdr) &&
                                     next.W <= cur.W + slack;
            if (r_new != r && ((armijo && next.W <= cur.W) || at_roundoff)) {
                r = r_new;
                cur = next;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            res.r_final = r;
            res.H_final = cur.H;
            res.dWdr = cur.dWdr;
            res.note = "line search failed";
            throw FlowNotConverged("line search collapsed after " + std::to_string(opts.max_backtracks) +
                                       " backtracking steps",
                                   res);
        }
        res.trajectory.push_back({step, r, cur.W, std::abs(cur.dWdr), s});
        s *= 2.0;
    }

    res.converged = std::abs(cur.dWdr) <= opts.tol;
    res.r_final = r;
    res.H_final = cur.H;
    res.dWdr = cur.dWdr;
    res.el_max = cur.el_max;
    const double h = 1e-5;
    if (r - h > 0.0 && r + h < 1.0)
        res.dWdr_fd = (hopf_energy(model, r + h, nodes) - hopf_energy(model, r - h, nodes)) / (2.0 * h);
    const double c = 1.0 / std::sqrt(2.0), hc = 1e-3;
    res.clifford_second_difference =
        (hopf_energy(model, c + hc, nodes) - 2.0 * hopf_energy(model, c, nodes) + hopf_energy(model, c - hc, nodes)) /
        (hc * hc);
    if (!res.target_H) res.note = "no critical torus with H != 0 (kappa >= 2 tau^2)";
    else if (!res.converged) res.note = "step budget exhausted";
    return res;
}

FlowResult flow_normal_graph(const NodalImmersion& imm, const ModelParams& model, const FlowOptions& opts) {
    FlowResult res;
    NodalImmersion cur = imm;
    GeometryField gf = geometry_field(cur, model);
    require_closed(gf, "flow_normal_graph");
    double W = willmore_energy(gf).W;
    ScalarField G = variation_gradient(gf);
    double gnorm = G.cwiseAbs().maxCoeff();
    const double h = std::min(gf.grid.hu(), gf.grid.hv());
    // Explicit steps of a fourth-order operator are stable only for s ~ h^4.
    const double s_cap = std::min(opts.initial_step, std::pow(h, 4));
    double s = s_cap;
    res.trajectory.push_back({0, 0.0, W, gnorm, s});

    for (int step = 1; step <= opts.max_steps && gnorm > opts.tol; ++step) {
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            AmbientField move = gf.normal;
            for (Eigen::Index n = 0; n < gf.size(); ++n) move.col(n) *= -s * G[n];
            try {
                NodalImmersion next = displaced(cur, move);
                GeometryField next_gf = geometry_field(next, model);
                const double next_W = willmore_energy(next_gf).W;
                if (next_W < W) {
                    cur = std::move(next);
                    gf = std::move(next_gf);
                    W = next_W;
                    accepted = true;
                    break;
                }
            } catch (const RegularityError&) {
            } catch (const DomainError&) {
            }
            s *= 0.5;
        }
        if (!accepted) {
            res.note = "line search failed";
            res.final_immersion = cur;
            throw FlowNotConverged("graph flow line search collapsed", res);
        }
        G = variation_gradient(gf);
        gnorm = G.cwiseAbs().maxCoeff();
        const double offset = (cur.x - imm.x).colwise().norm().maxCoeff();
        res.trajectory.push_back({step, offset, W, gnorm, s});
        s = std::min(2.0 * s, s_cap);
    }
    res.converged = gnorm <= opts.tol;
    if (!res.converged) res.note = "step budget exhausted";
    res.final_immersion = cur;
    return res;
}

void write_trajectory_csv(std::ostream& os, const FlowResult& result) {
    os << "step,parameter,energy,grad_norm,step_size\n";
    for (const auto& s : result.trajectory)
        os << s.step << ',' << fmt17(s.parameter) << ',' << fmt17(s.energy) << ',' << fmt17(s.grad_norm) << ','
           << fmt17(s.step_size) << '\n';
}

}  // namespace berger
