#include "berger/ambient.hpp"

#include <doctest.h>

#include <random>

using namespace berger;

namespace {

// BCV metric assembled from the coframe lambda dx, lambda dy, dz + tau lambda (y dx - x dy).
Eigen::Matrix3d bcv_oracle(double kappa, double tau, const Eigen::Vector3d& p) {
    const double x = p[0], y = p[1];
    const double lambda = 1.0 / (1.0 + kappa * (x * x + y * y) / 4.0);
    Eigen::Matrix3d coframe;
    coframe << lambda, 0, 0, 0, lambda, 0, tau * lambda * y, -tau * lambda * x, 1;
    return coframe.transpose() * coframe;
}

// Berger metric pulled back through (eta, phi1, phi2) -> S^3 in C^2 = R^4:
// (4 / kappa) [ <dP, dP> + (4 tau^2 / kappa - 1) <dP, iP>^2 ].
Eigen::Matrix3d hopf_oracle(double kappa, double tau, const Eigen::Vector3d& q) {
    auto embed = [](const Eigen::Vector3d& c) {
        const auto zw = hopf_to_s3(c);
        return Eigen::Vector4d(zw[0].real(), zw[0].imag(), zw[1].real(), zw[1].imag());
    };
    const Eigen::Vector4d P = embed(q);
    const Eigen::Vector4d iP(-P[1], P[0], -P[3], P[2]);
    Eigen::Matrix<double, 4, 3> J;
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[k] = h;
        J.col(k) = (embed(q + e) - embed(q - e)) / (2 * h);
    }
    const Eigen::RowVector3d v = iP.transpose() * J;
    return 4.0 / kappa * (J.transpose() * J + (4 * tau * tau / kappa - 1.0) * v.transpose() * v);
}

struct Rng {
    std::mt19937_64 gen{20261016};
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    Eigen::Vector3d vec() { return {(*this)(-1, 1), (*this)(-1, 1), (*this)(-1, 1)}; }
};

}  // namespace

TEST_CASE("model parameters") {
    CHECK_THROWS_AS(ModelParams(4.0, 1.0), ModelError);
    CHECK_THROWS_AS(ModelParams(0.0, 0.0), ModelError);
    CHECK_THROWS_AS(ModelParams(std::nan(""), 1.0), ModelError);
    CHECK(ModelParams(1, 1).kind() == SpaceKind::BergerSphere);
    CHECK(ModelParams(0, 0.5).kind() == SpaceKind::Nil);
    CHECK(ModelParams(-1, 0).kind() == SpaceKind::Product);
    CHECK(ModelParams(-1, 0.5).kind() == SpaceKind::UniversalCoverPSL);
    CHECK(ModelParams(1, 1).anisotropy() == doctest::Approx(-3.0));
    CHECK_THROWS_AS(make_chart(ChartKind::Hopf, ModelParams(0, 0.5)), ModelError);
}

TEST_CASE("metrics match the coframe and pull-back oracles") {
    Rng rng;
    for (auto [k, t] : {std::pair{1.0, 1.0}, {-1.0, 0.3}, {0.0, 0.5}, {5.0, 1.0}}) {
        const ModelParams m(k, t);
        const Chart bcv = make_chart(ChartKind::Bcv, m);
        for (int i = 0; i < 20; ++i) {
            const Eigen::Vector3d p(rng(-1, 1), rng(-1, 1), rng(-3, 3));
            if (!bcv.contains(p)) continue;
            CHECK((metric_at(m, bcv, p).g - bcv_oracle(k, t, p)).norm() < 1e-14);
        }
        if (!m.is_berger_sphere()) continue;
        const Chart hopf = make_chart(ChartKind::Hopf, m);
        for (int i = 0; i < 20; ++i) {
            const Eigen::Vector3d q(rng(0.05, 1.5), rng(0, 6.28), rng(0, 6.28));
            CHECK((metric_at(m, hopf, q).g - hopf_oracle(k, t, q)).norm() < 1e-8);
        }
    }
}

TEST_CASE("analytic metric derivatives agree with differences; Christoffels are metric") {
    Rng rng;
    const ModelParams m(1, 1);
    for (auto kind : {ChartKind::Bcv, ChartKind::Hopf}) {
        const Chart chart = make_chart(kind, m);
        for (int i = 0; i < 10; ++i) {
            const Eigen::Vector3d p = kind == ChartKind::Bcv ? Eigen::Vector3d(rng(-1, 1), rng(-1, 1), rng(-1, 1))
                                                             : Eigen::Vector3d(rng(0.1, 1.4), rng(0, 6), rng(0, 6));
            const auto a = metric_at(m, chart, p);
            const auto f = metric_at(m, chart, p, DerivativeMode::FiniteDifference, 1e-5);
            for (int k = 0; k < 3; ++k) CHECK((a.dg[k] - f.dg[k]).norm() < 1e-8);
            // d_k g_ij = Gamma^l_ki g_lj + Gamma^l_kj g_il
            for (int k = 0; k < 3; ++k)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        double s = 0;
                        for (int l = 0; l < 3; ++l) s += a.gamma[l](k, i) * a.g(l, j) + a.gamma[l](k, j) * a.g(i, l);
                        CHECK(std::abs(s - a.dg[k](i, j)) < 1e-12);
                    }
        }
    }
}

TEST_CASE("xi is a unit Killing field with nabla_X xi = tau X ^ xi") {
    Rng rng;
    for (auto [k, t] : {std::pair{1.0, 1.0}, {1.0, -0.7}, {-1.0, 0.3}, {0.0, 0.5}}) {
        const ModelParams m(k, t);
        std::vector<ChartKind> kinds{ChartKind::Bcv};
        if (m.is_berger_sphere()) kinds.push_back(ChartKind::Hopf);
        for (auto kind : kinds) {
            const Chart chart = make_chart(kind, m);
            auto field = [&](const AmbientPoint& p) { return killing_xi(m, chart, p); };
            for (int i = 0; i < 20; ++i) {
                const AmbientPoint p = kind == ChartKind::Bcv ? AmbientPoint(rng(-1, 1), rng(-1, 1), rng(-2, 2))
                                                              : AmbientPoint(rng(0.1, 1.4), rng(0, 6), rng(0, 6));
                const auto md = metric_at(m, chart, p);
                const AmbientVector xi = field(p), X = rng.vec();
                CHECK(md.norm(xi) == doctest::Approx(1.0).epsilon(1e-13));
                const AmbientVector lhs = covariant_derivative(m, chart, p, X, field);
                CHECK(md.norm(lhs - t * cross(md, chart.orientation, X, xi)) < 1e-8);
            }
        }
    }
}

TEST_CASE("curvature: numeric tensor equals the closed form and has the tensor symmetries") {
    Rng rng;
    for (auto [k, t] : {std::pair{1.0, 1.0}, {5.0, 1.0}, {-1.0, 0.3}, {0.0, 0.5}, {1.0, 0.0}}) {
        const ModelParams m(k, t);
        const Chart chart = make_chart(ChartKind::Bcv, m);
        for (int i = 0; i < 10; ++i) {
            const AmbientPoint p(rng(-0.8, 0.8), rng(-0.8, 0.8), rng(-1, 1));
            const auto md = metric_at(m, chart, p);
            const AmbientVector xi = killing_xi(m, chart, p);
            const AmbientVector X = rng.vec(), Y = rng.vec(), Z = rng.vec(), W = rng.vec();
            const AmbientVector num = curvature_numeric(m, chart, p, X, Y, Z);
            CHECK((num - curvature_closed_form(m, md.g, xi, X, Y, Z)).norm() < 1e-6);
            CHECK((num + curvature_numeric(m, chart, p, Y, X, Z)).norm() < 1e-9);
            const AmbientVector bianchi = num + curvature_numeric(m, chart, p, Y, Z, X) +
                                          curvature_numeric(m, chart, p, Z, X, Y);
            CHECK(bianchi.norm() < 1e-8);
            CHECK(std::abs(md.inner(num, W) + md.inner(curvature_numeric(m, chart, p, X, Y, W), Z)) < 1e-8);
        }
    }
}

TEST_CASE("sectional and Ricci curvatures of the vertical and horizontal directions") {
    const ModelParams m(1, 1);
    const Chart chart = make_chart(ChartKind::Bcv, m);
    const AmbientPoint p(0.3, -0.2, 0.1);
    const auto md = metric_at(m, chart, p);
    const AmbientVector xi = killing_xi(m, chart, p);
    // Horizontal lifts of the coordinate directions: e_i - <e_i, xi> xi.
    AmbientVector e1(1, 0, 0), e2(0, 1, 0);
    e1 -= md.inner(e1, xi) * xi;
    e2 -= md.inner(e2, xi) * xi;
    e2 -= md.inner(e2, e1) / md.inner(e1, e1) * e1;
    e1 /= md.norm(e1);
    e2 /= md.norm(e2);
    // R(X,Y)Z carries the opposite sign to the usual tensor: K(X,Y) = -<R(X,Y)Y, X>.
    const double k_horizontal = -md.inner(curvature_numeric(m, chart, p, e1, e2, e2), e1);
    const double k_vertical = -md.inner(curvature_numeric(m, chart, p, e1, xi, xi), e1);
    CHECK(k_horizontal == doctest::Approx(m.kappa() - 3 * m.tau() * m.tau()).epsilon(1e-8));
    CHECK(k_vertical == doctest::Approx(m.tau() * m.tau()).epsilon(1e-8));
    CHECK(ricci_numeric(m, chart, p, xi) == doctest::Approx(2 * m.tau() * m.tau()).epsilon(1e-8));
    CHECK(ricci_numeric(m, chart, p, e1) == doctest::Approx(m.kappa() - 2 * m.tau() * m.tau()).epsilon(1e-8));
}

TEST_CASE("finite-difference curvature converges at second order in the ambient step") {
    const ModelParams m(1, 1);
    const Chart chart = make_chart(ChartKind::Bcv, m);
    const AmbientPoint p(0.4, 0.3, 0.2);
    const auto md = metric_at(m, chart, p);
    const AmbientVector X(0.3, -0.5, 0.2), Y(-0.1, 0.4, 0.7), Z(0.6, 0.1, -0.3);
    const AmbientVector exact = curvature_closed_form(m, md.g, killing_xi(m, chart, p), X, Y, Z);
    std::vector<double> err;
    for (double h : {1e-2, 5e-3, 2.5e-3})
        err.push_back((curvature_numeric(m, chart, p, X, Y, Z, DerivativeMode::FiniteDifference, h) - exact).norm());
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(std::log2(err[i - 1] / err[i]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("chart domain and Hopf projection") {
    const ModelParams hyp(-1, 0.3);
    const Chart disk = make_chart(ChartKind::Bcv, hyp);
    CHECK(disk.disk_radius == doctest::Approx(2.0));
    CHECK_THROWS_AS(metric_at(hyp, disk, AmbientPoint(2.5, 0, 0)), DomainError);
    const ModelParams m(1, 1);
    const Chart hopf = make_chart(ChartKind::Hopf, m);
    CHECK_THROWS_AS(metric_at(m, hopf, AmbientPoint(-0.1, 0, 0)), DomainError);
    // Fibres (phi1 + t, phi2 + t) project to one point.
    const AmbientPoint q(0.7, 0.4, 1.9);
    const auto a = hopf_to_s3(q);
    const auto b = hopf_to_s3(q + AmbientPoint(0, 1.3, 1.3));
    CHECK((hopf_project(a[0], a[1], m) - hopf_project(b[0], b[1], m)).norm() < 1e-14);
    CHECK_THROWS_AS(hopf_project({2.0, 0.0}, {0.0, 0.0}, m), PreconditionError);
}
