#include "berger/canonical.hpp"
#include "berger/surface.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace berger;

namespace {

ScalarField nodal(const Grid& g, const std::function<double(double, double)>& f) {
    ScalarField out(g.size());
    for (int i = 0; i < g.nu(); ++i)
        for (int j = 0; j < g.nv(); ++j) out[g.index(i, j)] = f(g.u(i), g.v(j));
    return out;
}

double max_err(const ScalarField& a, const ScalarField& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction and weights") {
    CHECK_THROWS_AS(Grid::periodic(8, 32), GridError);
    const Grid p = Grid::periodic(32, 48);
    CHECK(p.closed());
    CHECK(p.hu() == doctest::Approx(2 * M_PI / 32));
    double w = 0;
    for (Eigen::Index n = 0; n < p.size(); ++n) w += p.weight(n);
    CHECK(w == doctest::Approx(4 * M_PI * M_PI));
    const Grid q = Grid::patch(21, 17, -1.0, 2.0, false, 0.0, 3.0, false);
    CHECK_FALSE(q.closed());
    CHECK(q.u(20) == doctest::Approx(1.0));
    w = 0;
    for (Eigen::Index n = 0; n < q.size(); ++n) w += q.weight(n);
    CHECK(w == doctest::Approx(6.0));
    CHECK_FALSE(q.interior(q.index(3, 8), 4));
    CHECK(q.interior(q.index(4, 8), 4));
}

TEST_CASE("periodic differences are fourth order") {
    std::vector<double> err;
    for (int n : {32, 64, 128}) {
        const Grid g = Grid::periodic(n, n);
        const ScalarField f = nodal(g, [](double u, double v) { return std::sin(3 * u) * std::cos(2 * v); });
        const ScalarField fu = nodal(g, [](double u, double v) { return 3 * std::cos(3 * u) * std::cos(2 * v); });
        err.push_back(max_err(diff(f, g, Axis::U), fu));
    }
    CHECK(std::log2(err[0] / err[1]) > 3.8);
    CHECK(std::log2(err[1] / err[2]) > 3.8);
}

TEST_CASE("patch stencils differentiate quartics exactly, edges included") {
    const Grid g = Grid::patch(16, 20, -0.7, 1.9, false, 0.2, 1.3, false);
    const ScalarField f = nodal(g, [](double u, double v) { return std::pow(u, 4) - 2 * u * u * v + std::pow(v, 3); });
    const ScalarField fu = nodal(g, [](double u, double v) { return 4 * std::pow(u, 3) - 4 * u * v; });
    const ScalarField fv = nodal(g, [](double u, double v) { return -2 * u * u + 3 * v * v; });
    CHECK(max_err(diff(f, g, Axis::U), fu) < 1e-10);
    CHECK(max_err(diff(f, g, Axis::V), fv) < 1e-10);
}

TEST_CASE("angular positions differentiate through the wraparound") {
    const Grid g = Grid::periodic(32, 32);
    AmbientField x(3, g.size());
    for (int i = 0; i < g.nu(); ++i)
        for (int j = 0; j < g.nv(); ++j) x.col(g.index(i, j)) << 0.5, std::remainder(g.u(i), 2 * M_PI), g.v(j);
    const AmbientField xu = diff_positions(x, g, Axis::U, {false, true, true});
    CHECK((xu.row(1).array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(xu.row(0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hopf torus frame: unit normal, J rotation, T and C") {
    const ModelParams m(1, 1);
    const GeometryField gf = geometry_field(hopf_torus(HopfTorusSpec(0.4, m)), Grid::periodic(32, 32), m);
    CHECK(gf.max_normal_defect < 1e-13);
    CHECK(gf.max_shape_asymmetry < 1e-12);
    const TangentField v = gf.xu.topRows(2);  // any tangent field
    const TangentField jj = rotate_J(gf, rotate_J(gf, v));
    CHECK((jj + v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gf.C.cwiseAbs().maxCoeff() < 1e-13);
    CHECK((norm2(gf, gf.T).array() - 1.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("Laplace-Beltrami on the flat Hopf torus matches the constant-metric oracle") {
    const ModelParams m(1, 1);
    std::vector<double> err;
    for (int n : {64, 128}) {
        const GeometryField gf = geometry_field(hopf_torus(HopfTorusSpec(0.6, m)), Grid::periodic(n, n), m);
        const Eigen::Matrix2d ginv = at(gf.metric_inv, 0);
        const ScalarField f = nodal(gf.grid, [](double u, double v) { return std::cos(u + 2 * v); });
        const double factor = ginv(0, 0) + 4 * ginv(0, 1) + 4 * ginv(1, 1);
        err.push_back(max_err(laplace_beltrami(gf, f), -factor * f));
        CHECK(max_err(trace(surface_hessian(gf, f)), laplace_beltrami(gf, f)) < 1e-10);
    }
    CHECK(err[0] < 1e-4);
    CHECK(std::log2(err[0] / err[1]) > 3.8);
}

TEST_CASE("divergences of smooth fields integrate to zero on closed surfaces") {
    const ModelParams m(1, 1);
    const Immersion imm = perturbed_torus(HopfTorusSpec(0.5, m), 0.05, {2, 3});
    const GeometryField gf = geometry_field(imm, make_grid(imm, 48, 48), m);
    TangentField v(2, gf.size());
    for (int i = 0; i < gf.grid.nu(); ++i)
        for (int j = 0; j < gf.grid.nv(); ++j)
            v.col(gf.grid.index(i, j)) << std::sin(gf.grid.u(i) + 0.3), std::cos(2 * gf.grid.v(j)) * std::sin(gf.grid.u(i));
    const double scale = integrate(gf, divergence(gf, v).cwiseAbs());
    CHECK(std::abs(integrate(gf, divergence(gf, v))) < 1e-12 * scale);
    // Green: int f Delta g = int g Delta f.
    const ScalarField f = gf.H, g = gf.C;
    CHECK(integrate(gf, f.cwiseProduct(laplace_beltrami(gf, g))) ==
          doctest::Approx(integrate(gf, g.cwiseProduct(laplace_beltrami(gf, f)))).epsilon(1e-4));
}

TEST_CASE("analytic-partials and sampled routes agree") {
    const ModelParams m(1, 1);
    const Immersion imm = perturbed_torus(HopfTorusSpec(0.5, m), 0.05, {2, 3});
    std::vector<std::array<double, 4>> gaps;
    for (int n : {48, 96}) {
        const Grid g = make_grid(imm, n, n);
        const GeometryField exact = geometry_field(imm, g, m);
        NodalImmersion nodes = sample(imm, g);
        nodes.partials.reset();
        const GeometryField fd = geometry_field(nodes, m);
        gaps.push_back({max_abs(exact, exact.H - fd.H), max_abs(exact, exact.Ke - fd.Ke), max_abs(exact, exact.C - fd.C),
                        std::abs(area(exact) - area(fd)) / area(exact)});
    }
    CHECK(gaps[1][0] < 1e-4);
    CHECK(gaps[1][1] < 1e-4);
    CHECK(gaps[1][2] < 1e-5);
    CHECK(gaps[1][3] < 1e-5);
    // The sampled route differentiates positions at fourth order.
    for (int k = 0; k < 4; ++k) CHECK_MESSAGE(std::log2(gaps[0][k] / gaps[1][k]) > 3.5, "quantity " << k);
}

TEST_CASE("degenerate immersions are rejected") {
    const ModelParams m(1, 1);
    Immersion flat;
    flat.chart = make_chart(ChartKind::Bcv, m);
    flat.position = [](double u, double) { return AmbientPoint(0.1 * std::cos(u), 0.1 * std::sin(u), 0.0); };
    CHECK_THROWS_AS(geometry_field(flat, Grid::periodic(16, 16), m), RegularityError);
}
