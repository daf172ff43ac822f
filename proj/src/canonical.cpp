#include "berger/canonical.hpp"

#include <cmath>
#include <complex>
#include <memory>

namespace berger {

HopfTorusSpec::HopfTorusSpec(double r_, const ModelParams& m) : r(r_), model(m) {
    if (!(r > 0.0 && r < 1.0)) throw PreconditionError("Hopf torus radius must lie in (0, 1)");
    if (!model.is_berger_sphere()) throw ModelError("Hopf tori need a Berger sphere (kappa > 0, tau != 0)");
}

CurveSpec CurveSpec::circle(double radius) {
    if (!(radius > 0.0)) throw RegularityError("circle radius must be positive");
    CurveSpec c;
    c.kind = Kind::Circle;
    c.radius = radius;
    return c;
}

CurveSpec CurveSpec::line(double half_length) {
    if (!(half_length > 0.0)) throw RegularityError("line length must be positive");
    CurveSpec c;
    c.kind = Kind::Line;
    c.half_length = half_length;
    return c;
}

CurveSpec CurveSpec::periodic_samples(std::vector<Eigen::Vector2d> pts) {
    if (pts.size() < 4) throw RegularityError("a sampled curve needs at least 4 points");
    CurveSpec c;
    c.kind = Kind::Samples;
    c.samples = std::move(pts);
    return c;
}

double CurveSpec::geodesic_curvature(const ModelParams& model) const {
    switch (kind) {
    case Kind::Circle: return 1.0 / radius - model.kappa() * radius / 4.0;
    case Kind::Line: return 0.0;
    case Kind::Samples: break;
    }
    throw PreconditionError("geodesic curvature is only known in closed form for circles and lines");
}

double torus_eta(double r) { return std::acos(r); }

Immersion hopf_torus(const HopfTorusSpec& spec) {
    Immersion imm;
    imm.chart = make_chart(ChartKind::Hopf, spec.model);
    imm.kind = SurfaceKind::HopfTorus;
    const double eta = torus_eta(spec.r);
    imm.position = [eta](double u, double v) { return AmbientPoint(eta, u, v); };
    imm.partials = [](double, double) {
        Partials p;
        p.xu = AmbientVector(0.0, 1.0, 0.0);
        p.xv = AmbientVector(0.0, 0.0, 1.0);
        p.xuu = p.xuv = p.xvv = AmbientVector::Zero();
        return p;
    };
    return imm;
}

Immersion clifford_torus(const ModelParams& model) {
    Immersion imm = hopf_torus(HopfTorusSpec(1.0 / std::sqrt(2.0), model));
    imm.kind = SurfaceKind::Clifford;
    return imm;
}

CriticalRadius critical_radius(const ModelParams& model) {
    if (!model.is_berger_sphere()) throw ModelError("critical Hopf tori live in Berger spheres");
    const double kappa = model.kappa(), tau = model.tau();
    if (kappa >= 2.0 * tau * tau)
        throw NoCriticalTorusError("no Willmore Hopf torus with H != 0 when kappa >= 2 tau^2");
    const double target = std::sqrt((2.0 * tau * tau - kappa) / 2.0);
    const Grid grid = Grid::periodic(64, 64);
    auto mean_curvature = [&](double r) {
        const GeometryField gf = geometry_field(hopf_torus(HopfTorusSpec(r, model)), grid, model);
        return std::abs(gf.H[0]);
    };
    // |H| decreases from +infinity to 0 on (0, 1/sqrt 2).
    double lo = 0.05, hi = 1.0 / std::sqrt(2.0) - 1e-6;
    double f_lo = mean_curvature(lo) - target, f_hi = mean_curvature(hi) - target;
    if (f_lo < 0.0 || f_hi > 0.0) throw NoCriticalTorusError("critical radius outside the search bracket");
    double mid = 0.5 * (lo + hi), f_mid = mean_curvature(mid) - target;
    for (int it = 0; it < 200 && std::abs(f_mid) > 1e-12 && hi - lo > 1e-16; ++it) {
        if (f_mid > 0.0) lo = mid;
        else hi = mid;
        mid = 0.5 * (lo + hi);
        f_mid = mean_curvature(mid) - target;
    }
    return CriticalRadius{mid, std::sqrt(1.0 - mid * mid), f_mid + target, target};
}

namespace {

/// Trigonometric interpolant of periodic samples with its first two derivatives.
struct TrigCurve {
    std::vector<std::complex<double>> cx, cy;
    std::vector<int> freq;

    explicit TrigCurve(const std::vector<Eigen::Vector2d>& pts) {
        const int m = static_cast<int>(pts.size());
        for (int k = -(m / 2); k <= (m - 1) / 2; ++k) {
            std::complex<double> ax = 0.0, ay = 0.0;
            for (int j = 0; j < m; ++j) {
                const std::complex<double> e = std::polar(1.0 / m, -2.0 * M_PI * k * j / m);
                ax += pts[j][0] * e;
                ay += pts[j][1] * e;
            }
            // Split the Nyquist mode evenly so the interpolant stays real.
            if (m % 2 == 0 && k == -(m / 2)) {
                ax *= 0.5;
                ay *= 0.5;
                freq.push_back(m / 2);
                cx.push_back(ax);
                cy.push_back(ay);
            }
            freq.push_back(k);
            cx.push_back(ax);
            cy.push_back(ay);
        }
    }

    /// Derivative of order `order` at s.
    Eigen::Vector2d eval(double s, int order) const {
        Eigen::Vector2d out = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < freq.size(); ++i) {
            const std::complex<double> e = std::pow(std::complex<double>(0.0, freq[i]), order) *
                                           std::polar(1.0, freq[i] * s);
            out[0] += (cx[i] * e).real();
            out[1] += (cy[i] * e).real();
        }
        return out;
    }
};

}  // namespace

Immersion hopf_cylinder(const CurveSpec& curve, const ModelParams& model, double height, double t0) {
    if (!(height > 0.0)) throw PreconditionError("cylinder height must be positive");
    Immersion imm;
    imm.chart = make_chart(ChartKind::Bcv, model);
    imm.kind = SurfaceKind::Cylinder;
    imm.domain.v0 = t0;
    imm.domain.lv = height;
    imm.domain.periodic_v = false;

    std::function<Eigen::Vector2d(double, int)> alpha;
    switch (curve.kind) {
    case CurveSpec::Kind::Circle: {
        const double rho = curve.radius;
        alpha = [rho](double s, int order) {
            const double c = std::cos(s), sn = std::sin(s);
            switch (order) {
            case 0: return Eigen::Vector2d(rho * c, rho * sn);
            case 1: return Eigen::Vector2d(-rho * sn, rho * c);
            default: return Eigen::Vector2d(-rho * c, -rho * sn);
            }
        };
        break;
    }
    case CurveSpec::Kind::Line: {
        imm.domain.u0 = -curve.half_length;
        imm.domain.lu = 2.0 * curve.half_length;
        imm.domain.periodic_u = false;
        alpha = [](double s, int order) {
            if (order == 0) return Eigen::Vector2d(s, 0.0);
            if (order == 1) return Eigen::Vector2d(1.0, 0.0);
            return Eigen::Vector2d(0.0, 0.0);
        };
        break;
    }
    case CurveSpec::Kind::Samples: {
        auto trig = std::make_shared<TrigCurve>(curve.samples);
        alpha = [trig](double s, int order) { return trig->eval(s, order); };
        break;
    }
    }

    // Regularity and domain along a fine sampling of the curve.
    for (int k = 0; k <= 512; ++k) {
        const double s = imm.domain.u0 + imm.domain.lu * k / 512.0;
        if (alpha(s, 1).norm() < 1e-10) throw RegularityError("irregular base curve");
        const Eigen::Vector2d p = alpha(s, 0);
        if (!imm.chart.contains(AmbientPoint(p[0], p[1], t0)))
            throw DomainError("base curve leaves the BCV domain");
    }

    imm.position = [alpha](double s, double t) {
        const Eigen::Vector2d p = alpha(s, 0);
        return AmbientPoint(p[0], p[1], t);
    };
    imm.partials = [alpha](double s, double) {
        const Eigen::Vector2d d1 = alpha(s, 1), d2 = alpha(s, 2);
        Partials p;
        p.xu = AmbientVector(d1[0], d1[1], 0.0);
        p.xv = AmbientVector(0.0, 0.0, 1.0);
        p.xuu = AmbientVector(d2[0], d2[1], 0.0);
        p.xuv = p.xvv = AmbientVector::Zero();
        return p;
    };
    return imm;
}

Immersion product_slice(const ModelParams& model, double half_width, double z0) {
    if (model.tau() != 0.0) throw ModelError("slices are totally geodesic only in M^2(kappa) x R (tau = 0)");
    if (!(half_width > 0.0)) throw PreconditionError("slice half width must be positive");
    Immersion imm;
    imm.chart = make_chart(ChartKind::Bcv, model);
    imm.kind = SurfaceKind::Slice;
    if (!imm.chart.contains(AmbientPoint(half_width, half_width, z0)))
        throw DomainError("slice patch leaves the BCV domain");
    imm.domain = ParamDomain{-half_width, 2.0 * half_width, -half_width, 2.0 * half_width, false, false};
    imm.position = [z0](double u, double v) { return AmbientPoint(u, v, z0); };
    imm.partials = [](double, double) {
        Partials p;
        p.xu = AmbientVector(1.0, 0.0, 0.0);
        p.xv = AmbientVector(0.0, 1.0, 0.0);
        p.xuu = p.xuv = p.xvv = AmbientVector::Zero();
        return p;
    };
    return imm;
}

Immersion perturbed_torus(const HopfTorusSpec& base, double epsilon, std::pair<int, int> mode) {
    Immersion imm = hopf_torus(base);
    imm.kind = SurfaceKind::Perturbed;
    const double eta0 = torus_eta(base.r);
    // The unit normal of the base torus is orientation * (sqrt(kappa) / 2) d/deta.
    const double amp = epsilon * imm.chart.orientation * std::sqrt(base.model.kappa()) / 2.0;
    if (std::abs(amp) >= std::min(eta0, M_PI / 2.0 - eta0))
        throw RegularityError("perturbation leaves the Hopf chart");
    const double m = mode.first, n = mode.second;
    imm.position = [=](double u, double v) {
        return AmbientPoint(eta0 + amp * std::cos(m * u) * std::cos(n * v), u, v);
    };
    imm.partials = [=](double u, double v) {
        const double cu = std::cos(m * u), su = std::sin(m * u), cv = std::cos(n * v), sv = std::sin(n * v);
        Partials p;
        p.xu = AmbientVector(-amp * m * su * cv, 1.0, 0.0);
        p.xv = AmbientVector(-amp * n * cu * sv, 0.0, 1.0);
        p.xuu = AmbientVector(-amp * m * m * cu * cv, 0.0, 0.0);
        p.xuv = AmbientVector(amp * m * n * su * sv, 0.0, 0.0);
        p.xvv = AmbientVector(-amp * n * n * cu * cv, 0.0, 0.0);
        return p;
    };
    return imm;
}

}  // namespace berger
