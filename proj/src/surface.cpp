#include "berger/surface.hpp"

#include <cmath>

namespace berger {

std::string to_string(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::HopfTorus: return "hopf_torus";
    case SurfaceKind::Clifford: return "clifford";
    case SurfaceKind::Cylinder: return "cylinder";
    case SurfaceKind::Slice: return "slice";
    case SurfaceKind::Perturbed: return "perturbed";
    case SurfaceKind::Custom: return "custom";
    }
    return "custom";
}

Grid make_grid(const Immersion& imm, int nu, int nv) {
    const ParamDomain& d = imm.domain;
    return Grid::patch(nu, nv, d.u0, d.lu, d.periodic_u, d.v0, d.lv, d.periodic_v);
}

NodalImmersion sample(const Immersion& imm, const Grid& grid) {
    NodalImmersion out{grid, imm.chart, imm.kind, AmbientField(3, grid.size()), std::nullopt};
    const bool analytic = static_cast<bool>(imm.partials);
    std::array<AmbientField, 5> partials;
    if (analytic)
        for (auto& p : partials) p.resize(3, grid.size());
    for (int i = 0; i < grid.nu(); ++i) {
        for (int j = 0; j < grid.nv(); ++j) {
            const auto n = grid.index(i, j);
            const double u = grid.u(i), v = grid.v(j);
            out.x.col(n) = imm.position(u, v);
            if (analytic) {
                const Partials p = imm.partials(u, v);
                partials[0].col(n) = p.xu;
                partials[1].col(n) = p.xv;
                partials[2].col(n) = p.xuu;
                partials[3].col(n) = p.xuv;
                partials[4].col(n) = p.xvv;
            }
        }
    }
    if (analytic) out.partials = std::move(partials);
    return out;
}

NodalImmersion displaced(const NodalImmersion& imm, const AmbientField& displacement) {
    NodalImmersion out{imm.grid, imm.chart, imm.kind, imm.x + displacement, std::nullopt};
    return out;
}

namespace {

Eigen::Vector2d lower(const Eigen::Matrix2d& g, const Eigen::Vector2d& v) { return g * v; }

/// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij) from nodal metric derivatives.
Tensor3Field christoffel_from_metric(const GeometryField& gf) {
    const TensorField du = diff(gf.metric, gf.grid, Axis::U);
    const TensorField dv = diff(gf.metric, gf.grid, Axis::V);
    Tensor3Field out(8, gf.size());
    for (Eigen::Index n = 0; n < gf.size(); ++n) {
        const std::array<Eigen::Matrix2d, 2> dg{at(du, n), at(dv, n)};
        const auto ginv = at(gf.metric_inv, n);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < 2; ++l) acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                    out(t3(k, i, j), n) = 0.5 * acc;
                }
    }
    return out;
}

/// Gauss curvature from Christoffel symbols: K = <R(X_u,X_v)X_v, X_u> / det g (usual sign).
ScalarField intrinsic_curvature(const GeometryField& gf) {
    const Tensor3Field du = diff(gf.christoffel, gf.grid, Axis::U);
    const Tensor3Field dv = diff(gf.christoffel, gf.grid, Axis::V);
    ScalarField k(gf.size());
    for (Eigen::Index n = 0; n < gf.size(); ++n) {
        const auto& G = gf.christoffel;
        Eigen::Vector2d r;  // R^l_{uvv}
        for (int l = 0; l < 2; ++l) {
            double acc = du(t3(l, 1, 1), n) - dv(t3(l, 0, 1), n);
            for (int m = 0; m < 2; ++m)
                acc += G(t3(l, 0, m), n) * G(t3(m, 1, 1), n) - G(t3(l, 1, m), n) * G(t3(m, 0, 1), n);
            r[l] = acc;
        }
        const auto g = at(gf.metric, n);
        k[n] = g.row(0).dot(r) / g.determinant();
    }
    return k;
}

}  // namespace

GeometryField geometry_field(const NodalImmersion& imm, const ModelParams& model) {
    const Grid& grid = imm.grid;
    const Eigen::Index size = grid.size();
    GeometryField gf{grid, model, imm.chart, imm.kind};
    gf.x = imm.x;
    if (imm.partials) {
        gf.xu = (*imm.partials)[0];
        gf.xv = (*imm.partials)[1];
    } else {
        gf.xu = diff_positions(imm.x, grid, Axis::U, imm.chart.angular);
        gf.xv = diff_positions(imm.x, grid, Axis::V, imm.chart.angular);
    }
    gf.normal.resize(3, size);
    gf.xi.resize(3, size);
    gf.metric.resize(4, size);
    gf.metric_inv.resize(4, size);
    gf.sqrt_det.resize(size);
    gf.second_form.resize(4, size);
    gf.rotation.resize(4, size);
    gf.C.resize(size);
    gf.T.resize(2, size);
    gf.K_ambient_sec.resize(size);
    if (imm.partials) gf.christoffel.resize(8, size);

    for (Eigen::Index n = 0; n < size; ++n) {
        const AmbientPoint p = gf.x.col(n);
        const auto md = metric_at(model, imm.chart, p);
        const AmbientVector xu = gf.xu.col(n), xv = gf.xv.col(n);
        Eigen::Matrix2d g;
        g << md.inner(xu, xu), md.inner(xu, xv), md.inner(xv, xu), md.inner(xv, xv);
        const double det = g.determinant();
        if (!(det > 0.0)) throw RegularityError("degenerate induced metric (det g <= 0)");
        const Eigen::Matrix2d ginv = g.inverse();
        at(gf.metric, n) = g;
        at(gf.metric_inv, n) = ginv;
        gf.sqrt_det[n] = std::sqrt(det);

        AmbientVector nrm = cross(md, imm.chart.orientation, xu, xv);
        nrm /= md.norm(nrm);
        gf.normal.col(n) = nrm;
        gf.max_normal_defect = std::max(gf.max_normal_defect, std::abs(md.inner(nrm, nrm) - 1.0) +
                                                                  std::abs(md.inner(nrm, xu)) +
                                                                  std::abs(md.inner(nrm, xv)));

        const AmbientVector xi = killing_xi(model, imm.chart, p);
        gf.xi.col(n) = xi;
        gf.C[n] = md.inner(nrm, xi);
        gf.T.col(n) = ginv * Eigen::Vector2d(md.inner(xi, xu), md.inner(xi, xv));

        const std::array<AmbientVector, 2> basis{xu, xv};
        Eigen::Matrix2d jl;  // <N ^ X_j, X_k> at (k, j)
        for (int j = 0; j < 2; ++j) {
            const AmbientVector nx = cross(md, imm.chart.orientation, nrm, basis[j]);
            jl(0, j) = md.inner(nx, xu);
            jl(1, j) = md.inner(nx, xv);
        }
        at(gf.rotation, n) = ginv * jl;

        const AmbientVector r = curvature_closed_form<double>(model, md.g, xi, xu, xv, xv);
        gf.K_ambient_sec[n] = -md.inner(r, xu) / det;

        if (imm.partials) {
            const auto& pp = *imm.partials;
            const std::array<std::array<AmbientVector, 2>, 2> second{
                {{pp[2].col(n), pp[3].col(n)}, {pp[3].col(n), pp[4].col(n)}}};
            Eigen::Matrix2d h;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const AmbientVector cov = second[i][j] + md.connection(basis[i], basis[j]);
                    h(i, j) = md.inner(cov, nrm);
                    const Eigen::Vector2d gam = ginv * Eigen::Vector2d(md.inner(cov, xu), md.inner(cov, xv));
                    for (int k = 0; k < 2; ++k) gf.christoffel(t3(k, i, j), n) = gam[k];
                }
            at(gf.second_form, n) = h;
        }
    }

    if (!imm.partials) {
        // Weingarten: A X_i = -(nabla_{X_i} N), differentiating N on the grid.
        const AmbientField dnu = diff(gf.normal, grid, Axis::U);
        const AmbientField dnv = diff(gf.normal, grid, Axis::V);
        for (Eigen::Index n = 0; n < size; ++n) {
            const auto md = metric_at(model, imm.chart, AmbientPoint(gf.x.col(n)));
            const AmbientVector nrm = gf.normal.col(n);
            const std::array<AmbientVector, 2> basis{gf.xu.col(n), gf.xv.col(n)};
            const std::array<AmbientVector, 2> dn{dnu.col(n), dnv.col(n)};
            Eigen::Matrix2d h;
            for (int i = 0; i < 2; ++i) {
                const AmbientVector w = -(dn[i] + md.connection(basis[i], nrm));
                for (int j = 0; j < 2; ++j) h(i, j) = md.inner(w, basis[j]);
            }
            at(gf.second_form, n) = h;
        }
        gf.christoffel = christoffel_from_metric(gf);
    }

    gf.shape.resize(4, size);
    gf.phi.resize(4, size);
    gf.H.resize(size);
    gf.Ke.resize(size);
    gf.norm_A2.resize(size);
    gf.norm_phi2.resize(size);
    for (Eigen::Index n = 0; n < size; ++n) {
        Eigen::Matrix2d h = at(gf.second_form, n);
        gf.max_shape_asymmetry = std::max(gf.max_shape_asymmetry, std::abs(h(0, 1) - h(1, 0)));
        h(0, 1) = h(1, 0) = 0.5 * (h(0, 1) + h(1, 0));
        at(gf.second_form, n) = h;
        const Eigen::Matrix2d a = at(gf.metric_inv, n) * h;
        at(gf.shape, n) = a;
        gf.H[n] = 0.5 * a.trace();
        gf.Ke[n] = a.determinant();
        gf.norm_A2[n] = (a * a).trace();
        const Eigen::Matrix2d ph = a - gf.H[n] * Eigen::Matrix2d::Identity();
        at(gf.phi, n) = ph;
        gf.norm_phi2[n] = (ph * ph).trace();
    }
    gf.K = intrinsic_curvature(gf);
    gf.K_gauss_eq = gf.K_ambient_sec + gf.Ke;
    return gf;
}

GeometryField geometry_field(const Immersion& imm, const Grid& grid, const ModelParams& model) {
    return geometry_field(sample(imm, grid), model);
}

TangentField apply(const TensorField& s, const TangentField& v) {
    TangentField out(2, v.cols());
    for (Eigen::Index n = 0; n < v.cols(); ++n) out.col(n) = at(s, n) * v.col(n);
    return out;
}

TensorField compose(const TensorField& a, const TensorField& b) {
    TensorField out(4, a.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n) at(out, n) = at(a, n) * at(b, n);
    return out;
}

ScalarField trace(const TensorField& s) { return s.row(0) + s.row(3); }

ScalarField inner(const GeometryField& gf, const TangentField& a, const TangentField& b) {
    ScalarField out(a.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n) out[n] = a.col(n).dot(lower(at(gf.metric, n), b.col(n)));
    return out;
}

ScalarField norm2(const GeometryField& gf, const TangentField& a) { return inner(gf, a, a); }

ScalarField tensor_inner(const GeometryField& gf, const TensorField& a, const TensorField& b) {
    ScalarField out(a.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n)
        out[n] = (at(a, n).transpose() * at(gf.metric, n) * at(b, n) * at(gf.metric_inv, n)).trace();
    return out;
}

TensorField shifted(const TensorField& t, const ScalarField& lambda) {
    TensorField out = t;
    out.row(0) += lambda;
    out.row(3) += lambda;
    return out;
}

TangentField rotate_J(const GeometryField& gf, const TangentField& v) { return apply(gf.rotation, v); }

Eigen::Matrix2Xd differential(const GeometryField& gf, const ScalarField& f) {
    Eigen::Matrix2Xd df(2, f.cols());
    df.row(0) = diff(f, gf.grid, Axis::U);
    df.row(1) = diff(f, gf.grid, Axis::V);
    return df;
}

TangentField surface_gradient(const GeometryField& gf, const ScalarField& f) {
    return apply(gf.metric_inv, differential(gf, f));
}

TensorField surface_hessian(const GeometryField& gf, const ScalarField& f) {
    const Eigen::Matrix2Xd df = differential(gf, f);
    const ScalarField fuu = diff(ScalarField(df.row(0)), gf.grid, Axis::U);
    const ScalarField fvv = diff(ScalarField(df.row(1)), gf.grid, Axis::V);
    const ScalarField fuv = 0.5 * (diff(ScalarField(df.row(0)), gf.grid, Axis::V) +
                                   diff(ScalarField(df.row(1)), gf.grid, Axis::U));
    TensorField out(4, f.cols());
    for (Eigen::Index n = 0; n < f.cols(); ++n) {
        Eigen::Matrix2d low;
        low << fuu[n], fuv[n], fuv[n], fvv[n];
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) low(k, j) -= gf.christoffel(t3(l, k, j), n) * df(l, n);
        at(out, n) = at(gf.metric_inv, n) * low;
    }
    return out;
}

ScalarField laplace_beltrami(const GeometryField& gf, const ScalarField& f) {
    return trace(surface_hessian(gf, f));
}

TensorField covariant_derivative(const GeometryField& gf, const TangentField& v) {
    const TangentField du = diff(v, gf.grid, Axis::U);
    const TangentField dv = diff(v, gf.grid, Axis::V);
    TensorField out(4, v.cols());
    for (Eigen::Index n = 0; n < v.cols(); ++n) {
        Eigen::Matrix2d m;
        m.col(0) = du.col(n);
        m.col(1) = dv.col(n);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) m(i, k) += gf.christoffel(t3(i, k, l), n) * v(l, n);
        at(out, n) = m;
    }
    return out;
}

ScalarField divergence(const GeometryField& gf, const TangentField& v) {
    return trace(covariant_derivative(gf, v));
}

Tensor3Field covariant_derivative(const GeometryField& gf, const TensorField& s) {
    const std::array<TensorField, 2> ds{diff(s, gf.grid, Axis::U), diff(s, gf.grid, Axis::V)};
    Tensor3Field out(8, s.cols());
    for (Eigen::Index n = 0; n < s.cols(); ++n) {
        const auto S = at(s, n);
        for (int k = 0; k < 2; ++k) {
            const auto dS = at(ds[k], n);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double acc = dS(i, j);
                    for (int l = 0; l < 2; ++l)
                        acc += gf.christoffel(t3(i, k, l), n) * S(l, j) - gf.christoffel(t3(l, k, j), n) * S(i, l);
                    out(t3(i, j, k), n) = acc;
                }
        }
    }
    return out;
}

ShapeDerivative covariant_shape_derivative(const GeometryField& gf) {
    ShapeDerivative sd;
    sd.nabla_A = covariant_derivative(gf, gf.shape);
    sd.norm2.resize(gf.size());
    sd.trace.resize(2, gf.size());
    sd.codazzi.resize(2, gf.size());
    for (Eigen::Index n = 0; n < gf.size(); ++n) {
        const auto g = at(gf.metric, n);
        const auto gi = at(gf.metric_inv, n);
        const auto& B = sd.nabla_A;
        double norm = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int ii = 0; ii < 2; ++ii)
                for (int j = 0; j < 2; ++j)
                    for (int jj = 0; jj < 2; ++jj)
                        for (int k = 0; k < 2; ++k)
                            for (int kk = 0; kk < 2; ++kk)
                                norm += g(i, ii) * gi(j, jj) * gi(k, kk) * B(t3(i, j, k), n) * B(t3(ii, jj, kk), n);
        sd.norm2[n] = norm;
        for (int i = 0; i < 2; ++i) {
            double tr = 0.0;
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) tr += gi(j, k) * B(t3(i, j, k), n);
            sd.trace(i, n) = tr;
            sd.codazzi(i, n) = B(t3(i, 0, 1), n) - B(t3(i, 1, 0), n);
        }
    }
    return sd;
}

TensorField rough_laplacian(const GeometryField& gf, const Tensor3Field& nabla_A) {
    const std::array<Tensor3Field, 2> dB{diff(nabla_A, gf.grid, Axis::U), diff(nabla_A, gf.grid, Axis::V)};
    TensorField out(4, gf.size());
    for (Eigen::Index n = 0; n < gf.size(); ++n) {
        const auto gi = at(gf.metric_inv, n);
        const auto& B = nabla_A;
        const auto& G = gf.christoffel;
        Eigen::Matrix2d lap = Eigen::Matrix2d::Zero();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int m = 0; m < 2; ++m) {
                        if (gi(k, m) == 0.0) continue;
                        // (nabla_m B)^i_{jk}
                        double acc = dB[m](t3(i, j, k), n);
                        for (int l = 0; l < 2; ++l)
                            acc += G(t3(i, m, l), n) * B(t3(l, j, k), n) - G(t3(l, m, j), n) * B(t3(i, l, k), n) -
                                   G(t3(l, m, k), n) * B(t3(i, j, l), n);
                        lap(i, j) += gi(k, m) * acc;
                    }
        at(out, n) = lap;
    }
    return out;
}

double integrate(const GeometryField& gf, const ScalarField& f) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < gf.size(); ++n) acc += f[n] * gf.sqrt_det[n] * gf.grid.weight(n);
    return acc;
}

double area(const GeometryField& gf) { return integrate(gf, ScalarField::Ones(gf.size())); }

double max_abs(const GeometryField& gf, const ScalarField& f) {
    double m = 0.0;
    const int margin = gf.margin();
    for (Eigen::Index n = 0; n < f.cols(); ++n)
        if (margin == 0 || gf.grid.interior(n, margin)) m = std::max(m, std::abs(f[n]));
    return m;
}

}  // namespace berger
