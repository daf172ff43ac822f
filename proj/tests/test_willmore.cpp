#include "berger/canonical.hpp"
#include "berger/willmore.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace berger;

namespace {

// W(r) = 32 pi^2 |tau| / kappa^(3/2) (kappa (1 - 4 s^2) / (16 s) + tau^2 s), s = r sqrt(1 - r^2).
double W_oracle(double kappa, double tau, double r) {
    const double s = r * std::sqrt(1 - r * r);
    return 32 * M_PI * M_PI * std::abs(tau) / std::pow(kappa, 1.5) * (kappa * (1 - 4 * s * s) / (16 * s) + tau * tau * s);
}

double dW_oracle(double kappa, double tau, double r) {
    const double h = 1e-6;
    return (W_oracle(kappa, tau, r + h) - W_oracle(kappa, tau, r - h)) / (2 * h);
}

}  // namespace

TEST_CASE("energy of Hopf tori") {
    for (auto [k, t] : {std::pair{1.0, 1.0}, {3.0, 1.0}, {5.0, -1.0}}) {
        const ModelParams m(k, t);
        for (double r : {0.2, 0.5, 1 / std::sqrt(2.0), 0.85}) {
            CHECK(hopf_energy(m, r) == doctest::Approx(W_oracle(k, t, r)).epsilon(1e-12));
            CHECK(hopf_energy_derivative(m, r) == doctest::Approx(dW_oracle(k, t, r)).epsilon(1e-6));
        }
    }
    const ModelParams unit(1, 1);
    const GeometryField gf = geometry_field(clifford_torus(unit), Grid::periodic(32, 32), unit);
    const EnergyBreakdown e = willmore_energy(gf);
    CHECK(e.W == doctest::Approx(16 * M_PI * M_PI).epsilon(1e-13));
    CHECK(e.integral_H2 == doctest::Approx(0.0));
    CHECK(e.area == doctest::Approx(16 * M_PI * M_PI).epsilon(1e-13));
}

TEST_CASE("energy of a slice patch is kappa times its area") {
    const ModelParams m(1, 0);
    const Immersion imm = product_slice(m, 0.5);
    const GeometryField gf = geometry_field(imm, make_grid(imm, 64, 64), m);
    const EnergyBreakdown e = willmore_energy(gf);
    CHECK(e.W == doctest::Approx(m.kappa() * e.area).epsilon(1e-12));
    CHECK_THROWS_AS(el_residual(gf), PreconditionError);
}

TEST_CASE("ambient curvature terms along the surface") {
    const ModelParams m(1, 1);
    const Immersion imm = perturbed_torus(HopfTorusSpec(0.5, m), 0.05, {2, 3});
    const GeometryField gf = geometry_field(imm, make_grid(imm, 48, 48), m);
    CHECK((ambient_sectional(gf) - gf.K_ambient_sec).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index n = 0; n < gf.size(); n += 97) {
        const AmbientPoint p = gf.x.col(n);
        CHECK(ricci_normal(gf)[n] ==
              doctest::Approx(ricci_numeric(m, gf.chart, p, AmbientVector(gf.normal.col(n)))).epsilon(1e-7));
    }
}

TEST_CASE("first variation: the gradient density equals the Euler-Lagrange operator") {
    const ModelParams m(1, 1);
    const Immersion imm = perturbed_torus(HopfTorusSpec(0.5, m), 0.05, {2, 3});
    const GeometryField gf = geometry_field(imm, make_grid(imm, 64, 64), m);
    CHECK((variation_gradient(gf) - el_residual(gf).field).cwiseAbs().maxCoeff() < 1e-10);
    const NodalImmersion nodes = sample(imm, gf.grid);
    const GradientCheck gc = gradient_check(nodes, m, random_smooth_field(gf.grid, 7));
    CHECK(gc.rel_gap < 1e-3);
}

TEST_CASE("random smooth fields are reproducible and normalised") {
    const Grid g = Grid::periodic(32, 32);
    const ScalarField a = random_smooth_field(g, 11), b = random_smooth_field(g, 11), c = random_smooth_field(g, 12);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.1);
    CHECK(a.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("radius flow finds the critical torus") {
    const ModelParams m(1, 1);
    const FlowResult res = flow_radius_family(m, 0.4);
    CHECK(res.converged);
    CHECK(std::abs(res.dWdr) <= 1e-8);
    CHECK(res.r_final == doctest::Approx(critical_radius(m).r).epsilon(1e-6));
    REQUIRE(res.target_H.has_value());
    CHECK(std::abs(std::abs(res.H_final) - *res.target_H) < 1e-6);
    CHECK(res.clifford_second_difference < 0);  // Clifford is a local maximum of W(r)
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        CHECK(res.trajectory[i].energy <= res.trajectory[i - 1].energy * (1 + kEnergyRoundoff));
    CHECK(res.dWdr_fd == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("radius flow without a critical torus ends at Clifford") {
    const FlowResult res = flow_radius_family(ModelParams(3, 1), 0.4);
    CHECK(res.converged);
    CHECK(res.r_final == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-7));
    CHECK_FALSE(res.target_H.has_value());
    CHECK(res.note.find("no critical torus") != std::string::npos);
}

TEST_CASE("radius flow edge cases") {
    const ModelParams m(1, 1);
    FlowOptions none;
    none.max_steps = 0;
    const FlowResult zero = flow_radius_family(m, 0.4, none);
    CHECK(zero.trajectory.size() == 1);
    CHECK_FALSE(zero.converged);
    FlowOptions short_run;
    short_run.max_steps = 2;
    const FlowResult partial = flow_radius_family(m, 0.4, short_run);
    CHECK(partial.trajectory.size() == 3);
    CHECK(partial.note == "step budget exhausted");
    CHECK_THROWS_AS(flow_radius_family(m, 1.5), PreconditionError);
    CHECK_THROWS_AS(flow_radius_family(ModelParams(0, 0.5), 0.4), ModelError);

    std::ostringstream csv;
    write_trajectory_csv(csv, zero);
    CHECK(csv.str().rfind("step,parameter,energy,grad_norm,step_size\n0,0.40000000000000002,", 0) == 0);
}

TEST_CASE("normal-graph flow decreases the energy") {
    const ModelParams m(1, 1);
    const Immersion imm = perturbed_torus(HopfTorusSpec(1 / std::sqrt(2.0), m), 0.05, {1, 1});
    const NodalImmersion nodes = sample(imm, make_grid(imm, 24, 24));
    FlowOptions opts;
    opts.max_steps = 4;
    const FlowResult res = flow_normal_graph(nodes, m, opts);
    REQUIRE(res.trajectory.size() == 5);
    for (std::size_t i = 1; i < res.trajectory.size(); ++i)
        CHECK(res.trajectory[i].energy < res.trajectory[i - 1].energy);
    CHECK(res.final_immersion.has_value());
}
