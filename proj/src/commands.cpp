#include "berger/commands.hpp"

#include "berger/numfmt.hpp"
#include "berger/report.hpp"
#include "berger/willmore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <sstream>

namespace berger {

namespace {

std::string fixed(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

GeometryField build_geometry(const RunConfig& cfg, const Immersion& imm) {
    return geometry_field(imm, make_grid(imm, cfg.nu, cfg.nv), model_of(cfg));
}

std::optional<Tolerances> configured_tolerances(const RunConfig& cfg, const GeometryField& gf) {
    if (!cfg.tol_pointwise && !cfg.tol_integral) return std::nullopt;
    Tolerances t = Tolerances::defaults(gf);
    if (cfg.tol_pointwise) t.pointwise = *cfg.tol_pointwise;
    t.integral = cfg.tol_integral ? *cfg.tol_integral : t.pointwise * area(gf);
    return t;
}

Json header(const char* command, const RunConfig& cfg) {
    Json j;
    j["command"] = command;
    j["config"] = to_json(cfg);
    return j;
}

Json surface_meta(const GeometryField& gf) {
    return {{"kind", to_string(gf.kind)},
            {"chart", to_string(gf.chart.kind)},
            {"Nu", gf.grid.nu()},
            {"Nv", gf.grid.nv()},
            {"closed", gf.grid.closed()}};
}

void emit(const RunConfig& cfg, const Json& j, const std::string& csv) {
    if (!cfg.json_path.empty()) write_file(cfg.json_path, dump_json(j));
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv);
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    for (const auto& id : cfg.checks) {
        if (id == "all") continue;
        const auto& all = all_check_ids();
        if (std::find(all.begin(), all.end(), id) == all.end()) throw UnknownCheckError("unknown check id: " + id);
    }
    const Immersion imm = build_surface(cfg);
    const GeometryField gf = build_geometry(cfg, imm);
    const std::vector<CheckReport> reports = run_checks(gf, cfg.checks, configured_tolerances(cfg, gf));

    bool failed = false;
    for (const auto& r : reports) failed = failed || r.status == CheckStatus::Fail;
    const int code = failed ? kExitFail : kExitOk;

    out << "surface " << to_string(gf.kind) << " on " << gf.grid.nu() << "x" << gf.grid.nv() << ", kappa "
        << cfg.kappa << ", tau " << cfg.tau << "\n";
    for (const auto& r : reports) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-10s %-12s max %.3e  tol %.3e", r.id.c_str(), to_string(r.status).c_str(),
                      r.pointwise_max_residual, r.tolerance);
        out << line;
        if (r.integral_value) out << "  integral " << fixed("%.3e", *r.integral_value);
        if (!r.note.empty() && r.status == CheckStatus::Inapplicable) out << "  (" << r.note << ")";
        out << "\n";
    }

    Json j = header("verify", cfg);
    j["surface"] = surface_meta(gf);
    j["checks"] = to_json(reports);
    Json summary = summarize(reports);
    summary["exit_code"] = code;
    j["summary"] = summary;
    out << "checks " << summary["checks"].get<int>() << ", pass " << summary["pass"].get<int>() << ", fail "
        << summary["fail"].get<int>() << ", inapplicable " << summary["inapplicable"].get<int>() << "\n";

    std::ostringstream csv;
    write_checks_csv(csv, reports);
    emit(cfg, j, csv.str());
    return code;
}

int cmd_energy(const RunConfig& cfg, std::ostream& out) {
    const Immersion imm = build_surface(cfg);
    const GeometryField gf = build_geometry(cfg, imm);
    const EnergyBreakdown e = willmore_energy(gf);
    const double w_unit = 16.0 * M_PI * M_PI;

    out << "W         = " << fixed("%.10g", e.W) << "\n";
    out << "W/(16pi^2)= " << fixed("%.10g", e.W / w_unit) << "\n";
    out << "int H^2   = " << fixed("%.10g", e.integral_H2) << "\n";
    out << "int Kbar  = " << fixed("%.10g", e.integral_Kbar) << "\n";
    out << "area      = " << fixed("%.10g", e.area) << "\n";

    Json j = header("energy", cfg);
    j["surface"] = surface_meta(gf);
    Json energy;
    energy["W"] = e.W;
    energy["W_over_16pi2"] = e.W / w_unit;
    energy["integral_H2"] = e.integral_H2;
    energy["integral_Kbar"] = e.integral_Kbar;
    energy["area"] = e.area;
    j["energy"] = energy;

    std::ostringstream csv;
    csv << "W,integral_H2,integral_Kbar,area,el_max,el_integral,el_rms\n";
    csv << fmt17(e.W) << ',' << fmt17(e.integral_H2) << ',' << fmt17(e.integral_Kbar) << ',' << fmt17(e.area);
    if (gf.grid.closed()) {
        const ELResidual el = el_residual(gf);
        out << "EL max    = " << fixed("%.6e", el.max_abs) << "\n";
        out << "EL rms    = " << fixed("%.6e", el.rms) << "\n";
        j["euler_lagrange"] = {{"max_abs", el.max_abs}, {"integral", el.integral}, {"rms", el.rms}};
        csv << ',' << fmt17(el.max_abs) << ',' << fmt17(el.integral) << ',' << fmt17(el.rms) << '\n';
    } else {
        out << "EL        : not evaluated on a patch\n";
        j["euler_lagrange"] = nullptr;
        csv << ",,,\n";
    }
    emit(cfg, j, csv.str());
    return kExitOk;
}

namespace {

Json trajectory_json(const FlowResult& r) {
    Json arr = Json::array();
    for (const auto& s : r.trajectory) {
        Json e;
        e["step"] = s.step;
        e["parameter"] = s.parameter;
        e["energy"] = s.energy;
        e["grad_norm"] = s.grad_norm;
        e["step_size"] = s.step_size;
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

int cmd_flow(const RunConfig& cfg, std::ostream& out) {
    const ModelParams model = model_of(cfg);
    Json j = header("flow", cfg);
    if (!cfg.flow.enabled) {
        out << "flow disabled in config\n";
        j["result"] = nullptr;
        emit(cfg, j, "");
        return kExitOk;
    }
    FlowOptions opts;
    opts.max_steps = cfg.flow.max_steps;
    opts.tol = cfg.flow.tol;

    FlowResult res;
    bool collapsed = false;
    std::string failure;
    try {
        if (cfg.flow.kind == "radius") {
            res = flow_radius_family(model, cfg.flow.r0, opts);
        } else {
            const Immersion imm = build_surface(cfg);
            res = flow_normal_graph(sample(imm, make_grid(imm, cfg.nu, cfg.nv)), model, opts);
        }
    } catch (const FlowNotConverged& e) {
        res = e.result;
        collapsed = true;
        failure = e.what();
    }
    // A zero step budget asks only for the starting point.
    const bool ok = !collapsed && (res.converged || cfg.flow.max_steps == 0);

    const FlowStep& last = res.trajectory.back();
    out << "flow " << cfg.flow.kind << ": " << (res.trajectory.size() - 1) << " steps, "
        << (res.converged ? "converged" : "not converged") << "\n";
    out << "W final   = " << fixed("%.12g", last.energy) << "\n";
    Json result;
    result["kind"] = cfg.flow.kind;
    result["converged"] = res.converged;
    result["steps"] = static_cast<int>(res.trajectory.size()) - 1;
    result["energy_final"] = last.energy;
    result["grad_norm_final"] = last.grad_norm;
    if (cfg.flow.kind == "radius") {
        out << "r final   = " << fixed("%.12g", res.r_final) << "\n";
        out << "H final   = " << fixed("%.12g", res.H_final) << "\n";
        out << "dW/dr     = " << fixed("%.3e", res.dWdr) << "  (finite difference " << fixed("%.3e", res.dWdr_fd)
            << ")\n";
        out << "|H - 0|   = " << fixed("%.3e", std::abs(res.H_final)) << "\n";
        result["r_final"] = res.r_final;
        result["H_final"] = res.H_final;
        result["dWdr"] = res.dWdr;
        result["dWdr_fd"] = res.dWdr_fd;
        result["el_max"] = res.el_max;
        result["distance_to_minimal"] = std::abs(res.H_final);
        if (res.target_H) {
            const double d = std::abs(std::abs(res.H_final) - *res.target_H);
            out << "target H  = " << fixed("%.12g", *res.target_H) << "  |H - target| = " << fixed("%.3e", d) << "\n";
            result["target_H"] = *res.target_H;
            result["distance_to_target"] = d;
        } else {
            result["target_H"] = nullptr;
            result["distance_to_target"] = nullptr;
        }
        result["clifford_second_difference"] = res.clifford_second_difference;
    }
    const std::string note = collapsed ? failure : res.note;
    if (!note.empty()) out << "note: " << note << "\n";
    result["note"] = note;
    j["result"] = result;
    j["trajectory"] = trajectory_json(res);
    j["exit_code"] = ok ? kExitOk : kExitFail;

    std::ostringstream csv;
    write_trajectory_csv(csv, res);
    emit(cfg, j, csv.str());
    return ok ? kExitOk : kExitFail;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& residual) {
    const std::size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]), y = std::log(residual[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
    const std::string& id = cfg.convergence_check;
    if (!is_known_residual(id)) throw UnknownCheckError("unknown check or residual id: " + id);
    const ModelParams model = model_of(cfg);
    const Immersion imm = perturbed_torus(HopfTorusSpec(cfg.surface.r, model), cfg.surface.epsilon, cfg.surface.mode);

    std::vector<double> hs, res, fit_h, fit_r;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "N,h,residual\n";
    out << "convergence of " << id << " on the perturbed torus (r " << cfg.surface.r << ", epsilon "
        << cfg.surface.epsilon << ", mode " << cfg.surface.mode.first << "," << cfg.surface.mode.second << ")\n";
    for (int n : cfg.convergence_grids) {
        const GeometryField gf = geometry_field(imm, make_grid(imm, n, n), model);
        const double h = std::max(gf.grid.hu(), gf.grid.hv());
        const double r = residual_of(gf, id);
        hs.push_back(h);
        res.push_back(r);
        if (r > kRoundoffFloor) {
            fit_h.push_back(h);
            fit_r.push_back(r);
        }
        out << "  N " << n << "  h " << fixed("%.4e", h) << "  residual " << fixed("%.4e", r) << "\n";
        rows.push_back({{"N", n}, {"h", h}, {"residual", r}});
        csv << n << ',' << fmt17(h) << ',' << fmt17(r) << '\n';
    }
    // Residuals at rounding level on every grid mean the identity holds exactly in the scheme.
    const bool exact = fit_h.size() < 2;
    const double slope = exact ? std::numeric_limits<double>::quiet_NaN() : fit_slope(fit_h, fit_r);
    const bool ok = exact || slope >= kMinConvergenceSlope;
    if (exact) out << "slope: residual at rounding level (exact)\n";
    else out << "slope " << fixed("%.3f", slope) << " (required >= " << kMinConvergenceSlope << ")\n";

    Json j = header("convergence", cfg);
    j["check"] = id;
    j["rows"] = rows;
    j["slope"] = slope;
    j["points_in_fit"] = static_cast<int>(fit_h.size());
    j["exact"] = exact;
    j["min_slope"] = kMinConvergenceSlope;
    j["passed"] = ok;
    emit(cfg, j, csv.str());
    return ok ? kExitOk : kExitFail;
}

int run_command(const std::string& command, const std::string& config_path, const CliOverrides& overrides,
                std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = load_config(config_path);
        if (overrides.json_path) cfg.json_path = *overrides.json_path;
        if (overrides.csv_path) cfg.csv_path = *overrides.csv_path;
        if (overrides.grid) cfg.nu = cfg.nv = *overrides.grid;
        if (command == "verify") return cmd_verify(cfg, out);
        if (command == "energy") return cmd_energy(cfg, out);
        if (command == "flow") return cmd_flow(cfg, out);
        if (command == "convergence") return cmd_convergence(cfg, out);
        err << "error: unknown command '" << command << "'\n";
        return kExitInput;
    } catch (const std::exception& e) {
        // Config, model, chart-domain, regularity, unknown-check and file errors alike.
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace berger
