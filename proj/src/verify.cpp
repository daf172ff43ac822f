#include "berger/verify.hpp"

#include "berger/willmore.hpp"

#include <algorithm>
#include <cmath>

namespace berger {

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inapplicable: return "inapplicable";
    }
    return "fail";
}

const SubResidual* CheckReport::residual(const std::string& sub_id) const {
    for (const auto& r : residuals)
        if (r.id == sub_id) return &r;
    return nullptr;
}

std::optional<double> CheckReport::value(const std::string& key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    return std::nullopt;
}

std::optional<bool> CheckReport::flag(const std::string& key) const {
    for (const auto& [k, v] : flags)
        if (k == key) return v;
    return std::nullopt;
}

double Tolerances::factor(const std::string& check_id) {
    // Worst residual / (0.0415 h^2) on the perturbed unit-model torus at 32^2, times about two.
    if (check_id == "prop3.1") return 25.0;
    if (check_id == "cor5.2") return 10.0;
    if (check_id == "eq3.5" || check_id == "lemma3.2") return 3.0;
    return 1.0;
}

Tolerances Tolerances::defaults(const GeometryField& gf, const std::string& check_id) {
    const double h = std::max(gf.grid.hu(), gf.grid.hv());
    const double scale = std::max(1.0, std::abs(gf.model.kappa()) + gf.model.tau() * gf.model.tau());
    Tolerances t;
    t.pointwise = kCalibration * factor(check_id) * scale * h * h;
    t.integral = t.pointwise * area(gf);
    return t;
}

NewtonTransform::NewtonTransform(const GeometryField& gf) : P(shifted(-gf.shape, 2.0 * gf.H)) {}

ScalarField cheng_yau(const GeometryField& gf, const ScalarField& f) {
    return trace(compose(NewtonTransform(gf).P, surface_hessian(gf, f)));
}

namespace {

using Eigen::Index;

ScalarField norm_of(const GeometryField& gf, const TangentField& v) {
    return norm2(gf, v).cwiseMax(0.0).cwiseSqrt();
}

ScalarField tensor_norm(const GeometryField& gf, const TensorField& t) {
    return tensor_inner(gf, t, t).cwiseMax(0.0).cwiseSqrt();
}

TangentField scaled(const TangentField& v, const ScalarField& s) {
    TangentField out = v;
    for (Index n = 0; n < v.cols(); ++n) out.col(n) *= s[n];
    return out;
}

TensorField scaled(const TensorField& t, const ScalarField& s) {
    TensorField out = t;
    for (Index n = 0; n < t.cols(); ++n) out.col(n) *= s[n];
    return out;
}

/// Directional derivative df(V) = df_i V^i.
ScalarField along(const GeometryField& gf, const ScalarField& f, const TangentField& v) {
    return differential(gf, f).cwiseProduct(v).colwise().sum();
}

}  // namespace

struct CheckContext {
    double kappa, tau, a;
    ShapeDerivative sd;
    TensorField P, J, hess_H;
    TangentField grad_H, grad_C, JT, AT, PhiT, half_grad_T2, nablaT_T;
    TensorField nabla_T;
    ScalarField C2, T2, grad_H2, grad_C2, AT_T, PhiT_T, PhiT_JT, AT_JT, nabla_T2, div_T, lap_Ke, box_2H, T_of_H;
    ScalarField Ke_interior_mean;

    explicit CheckContext(const GeometryField& gf)
        : kappa(gf.model.kappa()), tau(gf.model.tau()), a(gf.model.anisotropy()) {
        sd = covariant_shape_derivative(gf);
        P = NewtonTransform(gf).P;
        J = gf.rotation;
        grad_H = surface_gradient(gf, gf.H);
        grad_C = surface_gradient(gf, gf.C);
        hess_H = surface_hessian(gf, gf.H);
        JT = rotate_J(gf, gf.T);
        AT = apply(gf.shape, gf.T);
        PhiT = apply(gf.phi, gf.T);
        C2 = gf.C.cwiseProduct(gf.C);
        T2 = norm2(gf, gf.T);
        grad_H2 = norm2(gf, grad_H);
        grad_C2 = norm2(gf, grad_C);
        AT_T = inner(gf, AT, gf.T);
        PhiT_T = inner(gf, PhiT, gf.T);
        PhiT_JT = inner(gf, PhiT, JT);
        AT_JT = inner(gf, AT, JT);
        nabla_T = covariant_derivative(gf, gf.T);
        nabla_T2 = tensor_inner(gf, nabla_T, nabla_T);
        div_T = trace(nabla_T);
        nablaT_T = apply(nabla_T, gf.T);
        half_grad_T2 = 0.5 * surface_gradient(gf, T2);
        lap_Ke = laplace_beltrami(gf, gf.Ke);
        box_2H = cheng_yau(gf, 2.0 * gf.H);
        T_of_H = inner(gf, grad_H, gf.T);
    }
};

AuxFields aux_fields(const GeometryField& gf) {
    const CheckContext c(gf);
    const double a = c.a;
    const TangentField p2h = apply(c.P, 2.0 * c.grad_H);
    const TangentField divT_T = scaled(gf.T, c.div_T);
    AuxFields out;
    out.U = p2h + a * (c.nablaT_T - c.half_grad_T2 + divT_T);
    out.V = p2h + a * (c.half_grad_T2 + divT_T - c.nablaT_T);
    out.Q = (2.0 * gf.H.array() * c.PhiT_T.array() + (gf.Ke.array() - c.tau * c.tau) * (1.0 - 3.0 * c.C2.array()))
                .matrix();
    return out;
}

Verifier::Verifier(const GeometryField& gf, std::optional<Tolerances> tol)
    : gf_(gf), override_(tol), ctx_(std::make_unique<CheckContext>(gf)) {}

Verifier::~Verifier() = default;

Tolerances Verifier::tolerances(const std::string& check_id) const {
    return override_ ? *override_ : Tolerances::defaults(gf_, check_id);
}

CheckReport Verifier::make_report(const std::string& id) const {
    CheckReport r;
    r.id = id;
    const Tolerances t = tolerances(id);
    r.tolerance = t.pointwise;
    r.integral_tolerance = t.integral;
    r.grid = GridMeta{gf_.grid.nu(), gf_.grid.nv(), gf_.grid.hu(), gf_.grid.hv(), gf_.grid.closed()};
    r.kappa = gf_.model.kappa();
    r.tau = gf_.model.tau();
    r.surface = to_string(gf_.kind);
    return r;
}

void Verifier::finish_identity(CheckReport& r) const {
    r.pointwise_max_residual = 0.0;
    bool ok = true;
    for (const auto& s : r.residuals) {
        r.pointwise_max_residual = std::max(r.pointwise_max_residual, s.max_abs);
        if (!(s.max_abs <= r.tolerance)) ok = false;
        if (s.integral && !(std::abs(*s.integral) <= r.integral_tolerance)) ok = false;
    }
    if (r.integral_value && !(std::abs(*r.integral_value) <= r.integral_tolerance)) ok = false;
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
}

namespace {

SubResidual pointwise(const GeometryField& gf, std::string id, const ScalarField& field) {
    return SubResidual{std::move(id), max_abs(gf, field), std::nullopt};
}

/// Residual of a divergence identity, plus int div dA on closed surfaces.
SubResidual with_integral(const GeometryField& gf, std::string id, const ScalarField& field,
                          const ScalarField& divergence) {
    SubResidual s = pointwise(gf, std::move(id), field);
    if (gf.grid.closed()) s.integral = integrate(gf, divergence);
    return s;
}

}  // namespace

CheckReport Verifier::structural() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("structural");
    const Index n_nodes = gf.size();
    const double tau = c.tau, a = c.a;

    r.residuals.push_back(pointwise(gf, "structural.eq2.8", c.T2 - (1.0 - c.C2.array()).matrix()));

    // nabla_X T = C (A - tau J) X and grad C = -(A + tau J) T.
    TensorField int_a = c.nabla_T - scaled(TensorField(gf.shape - tau * c.J), gf.C);
    r.residuals.push_back(pointwise(gf, "structural.eq2.9a", tensor_norm(gf, int_a)));
    r.residuals.push_back(pointwise(gf, "structural.eq2.9b", norm_of(gf, c.grad_C + c.AT + tau * c.JT)));

    TensorField j_square(4, n_nodes), j_isometry(4, n_nodes);
    for (Index n = 0; n < n_nodes; ++n) {
        const Eigen::Matrix2d Jn = at(c.J, n);
        at(j_square, n) = Jn * Jn + Eigen::Matrix2d::Identity();
        at(j_isometry, n) = at(gf.metric_inv, n) * Jn.transpose() * at(gf.metric, n) * Jn - Eigen::Matrix2d::Identity();
    }
    r.residuals.push_back(pointwise(gf, "structural.eq2.10.square", tensor_norm(gf, j_square)));
    r.residuals.push_back(pointwise(gf, "structural.eq2.10.isometry", tensor_norm(gf, j_isometry)));

    r.residuals.push_back(pointwise(gf, "structural.eq2.11", c.div_T - 2.0 * gf.C.cwiseProduct(gf.H)));
    r.residuals.push_back(pointwise(
        gf, "structural.eq2.12", (4.0 * gf.H.array().square() - gf.norm_A2.array() - 2.0 * gf.Ke.array()).matrix()));
    r.residuals.push_back(pointwise(gf, "structural.eq2.16", gf.K - gf.K_gauss_eq));
    r.residuals.push_back(pointwise(
        gf, "structural.eq2.16ff",
        (2.0 * gf.K.array() - (2.0 * tau * tau + 2.0 * a * c.C2.array() + 4.0 * gf.H.array().square() -
                               gf.norm_A2.array()))
            .matrix()));

    // Codazzi on (X_u, X_v), divided by |X_u ^ X_v| to make it frame independent.
    TangentField codazzi(2, n_nodes);
    for (Index n = 0; n < n_nodes; ++n) {
        const Eigen::Vector2d Tl = at(gf.metric, n) * gf.T.col(n);  // (<X_u,T>, <X_v,T>)
        const Eigen::Vector2d expected = a * gf.C[n] * Eigen::Vector2d(-Tl[1], Tl[0]);
        codazzi.col(n) = (c.sd.codazzi.col(n) - expected) / gf.sqrt_det[n];
    }
    r.residuals.push_back(pointwise(gf, "structural.eq2.17", norm_of(gf, codazzi)));

    // <A T, J T> = (l2 - l1) <T, e1> <T, e2> in an eigenframe with J e1 = e2.
    ScalarField eigen_form = ScalarField::Zero(n_nodes);
    for (Index n = 0; n < n_nodes; ++n) {
        if (gf.norm_phi2[n] < 1e-10) continue;
        // g = Lt^T Lt; Lt maps coordinates to a g-orthonormal frame.
        const Eigen::Matrix2d g = at(gf.metric, n);
        const double l00 = std::sqrt(g(0, 0)), l01 = g(0, 1) / l00;
        Eigen::Matrix2d Lt;
        Lt << l00, l01, 0.0, std::sqrt(g(1, 1) - l01 * l01);
        const Eigen::Matrix2d Lt_inv = Lt.inverse();
        const Eigen::Matrix2d A_on = Lt * at(gf.shape, n) * Lt_inv;
        const Eigen::Matrix2d J_on = Lt * at(c.J, n) * Lt_inv;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
        es.computeDirect(0.5 * (A_on + A_on.transpose()));
        const Eigen::Vector2d e1 = es.eigenvectors().col(0);
        const Eigen::Vector2d e2 = J_on * e1;
        const double l1 = es.eigenvalues()[0], l2 = e2.dot(A_on * e2);
        const Eigen::Vector2d t_on = Lt * gf.T.col(n);
        eigen_form[n] = c.AT_JT[n] - (l2 - l1) * t_on.dot(e1) * t_on.dot(e2);
    }
    r.residuals.push_back(pointwise(gf, "structural.eq3.17", eigen_form));

    r.residuals.push_back(pointwise(
        gf, "structural.eq4.21",
        (c.grad_C2.array() - (2.0 * gf.H.array() * c.PhiT_T.array() + 2.0 * tau * c.PhiT_JT.array() +
                              (gf.norm_phi2.array() + gf.Ke.array() + tau * tau) * c.T2.array()))
            .matrix()));
    r.residuals.push_back(pointwise(gf, "structural.eq4.22", divergence(gf, c.JT) - 2.0 * tau * gf.C));
    const ScalarField div_tcjt = divergence(gf, tau * scaled(c.JT, gf.C));
    r.residuals.push_back(with_integral(
        gf, "structural.eq4.23",
        (div_tcjt.array() + tau * c.PhiT_JT.array() + tau * tau * (1.0 - 3.0 * c.C2.array())).matrix(), div_tcjt));
    r.residuals.push_back(pointwise(
        gf, "structural.eq5.7",
        (c.nabla_T2.array() - c.C2.array() * (gf.norm_A2.array() + 2.0 * tau * tau)).matrix()));
    r.residuals.push_back(pointwise(
        gf, "structural.eq5.8", norm_of(gf, c.half_grad_T2 - scaled(TangentField(c.AT + tau * c.JT), gf.C))));
    r.residuals.push_back(SubResidual{"structural.normal", gf.max_normal_defect, std::nullopt});
    finish_identity(r);
    return r;
}

CheckReport Verifier::trace_nabla_A() const {
    const auto& c = *ctx_;
    CheckReport r = make_report("eq3.5");
    const TangentField expected = 2.0 * c.grad_H + c.a * scaled(gf_.T, gf_.C);
    r.residuals.push_back(pointwise(gf_, "eq3.5", norm_of(gf_, c.sd.trace - expected)));
    finish_identity(r);
    return r;
}

CheckReport Verifier::simons() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("prop3.1");
    const double a = c.a, tau = c.tau;
    const auto Ke = gf.Ke.array(), H = gf.H.array(), phi2 = gf.norm_phi2.array(), C2 = c.C2.array();
    const ScalarField rhs = (c.lap_Ke.array() + c.sd.norm2.array() - 4.0 * c.grad_H2.array() +
                             phi2 * (2.0 * Ke + a * (5.0 * C2 - 1.0) + 2.0 * tau * tau) -
                             2.0 * a * (H * c.PhiT_T.array() + tau * c.PhiT_JT.array()))
                                .matrix();
    r.residuals.push_back(pointwise(gf, "prop3.1", c.box_2H - rhs));

    // 1/2 Delta |A|^2 = |nabla A|^2 + <Delta A, A> with the rough Laplacian.
    const TensorField rough = rough_laplacian(gf, c.sd.nabla_A);
    const ScalarField weitzenbock =
        0.5 * laplace_beltrami(gf, gf.norm_A2) - c.sd.norm2 - tensor_inner(gf, rough, gf.shape);
    r.residuals.push_back(pointwise(gf, "prop3.1.weitzenbock", weitzenbock));

    // Second assembly of box(2H): 2H Delta(2H) - 2 tr(A o Hess H).
    const ScalarField alt = (2.0 * H * laplace_beltrami(gf, 2.0 * gf.H).array() -
                             2.0 * trace(compose(gf.shape, c.hess_H)).array())
                                .matrix();
    r.residuals.push_back(pointwise(gf, "prop3.1.assembly", c.box_2H - alt));
    finish_identity(r);
    return r;
}

CheckReport Verifier::cheng_yau_divergence() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("lemma3.2");
    const ScalarField div_p = divergence(gf, apply(c.P, 2.0 * c.grad_H));
    const ScalarField rhs = c.box_2H - 2.0 * c.a * gf.C.cwiseProduct(c.T_of_H);
    r.residuals.push_back(pointwise(gf, "lemma3.2", div_p - rhs));
    if (gf.grid.closed()) {
        r.integral_value = integrate(gf, rhs);
        r.values.emplace_back("integral_div_P2gradH", integrate(gf, div_p));
    }
    ScalarField trace_gap = trace(c.P) - 2.0 * gf.H;
    TensorField commutator = compose(c.P, gf.shape) - compose(gf.shape, c.P);
    r.residuals.push_back(pointwise(gf, "lemma3.2.newton_trace", trace_gap));
    r.residuals.push_back(pointwise(gf, "lemma3.2.newton_commute", tensor_norm(gf, commutator)));
    finish_identity(r);
    return r;
}

CheckReport Verifier::divergence_lemma() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("lemma5.1");
    const double tau = c.tau;
    const auto K = gf.K.array(), T2 = c.T2.array(), C2 = c.C2.array();
    const ScalarField T_divT = along(gf, c.div_T, gf.T);
    const auto TdT = T_divT.array(), nT2 = c.nabla_T2.array();

    const ScalarField div_a = divergence(gf, c.nablaT_T);
    const ScalarField rhs_a = (K * T2 + TdT + nT2 - 4.0 * tau * tau * C2).matrix();
    r.residuals.push_back(with_integral(gf, "lemma5.1a", div_a - rhs_a, div_a));

    const ScalarField div_b = divergence(gf, scaled(gf.T, c.div_T));
    const ScalarField rhs_b = (TdT + 4.0 * gf.H.array().square() * C2).matrix();
    r.residuals.push_back(with_integral(gf, "lemma5.1b", div_b - rhs_b, div_b));

    // |T| grad|T| = 1/2 grad |T|^2 is smooth through the zeros of T.
    const ScalarField div_c = divergence(gf, c.half_grad_T2);
    const ScalarField rhs_c = (K * T2 + TdT + nT2 - 2.0 * tau * tau * T2 - 2.0 * tau * c.PhiT_JT.array()).matrix();
    r.residuals.push_back(with_integral(gf, "lemma5.1c", div_c - rhs_c, div_c));

    r.residuals.push_back(pointwise(gf, "lemma5.1.norm_nabla_T",
                                    (nT2 - C2 * (gf.norm_A2.array() + 2.0 * tau * tau)).matrix()));
    finish_identity(r);
    return r;
}

CheckReport Verifier::corollary_UV() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("cor5.2");
    const double a = c.a, tau = c.tau;
    const AuxFields aux = aux_fields(gf);
    const auto Ke = gf.Ke.array(), phi2 = gf.norm_phi2.array(), C2 = c.C2.array(), H = gf.H.array();
    const auto common = c.lap_Ke.array() + c.sd.norm2.array() - 4.0 * c.grad_H2.array();

    const ScalarField div_U = divergence(gf, aux.U);
    const ScalarField rhs_U = (common + 2.0 * phi2 * (Ke + a * (4.0 * C2 - 1.0) + tau * tau) -
                               2.0 * a * (2.0 * H * c.PhiT_T.array() + (Ke - tau * tau) * (1.0 - 3.0 * C2)))
                                  .matrix();
    r.residuals.push_back(with_integral(gf, "cor5.2U", div_U - rhs_U, div_U));

    const ScalarField div_V = divergence(gf, aux.V);
    const ScalarField rhs_V = (common + 2.0 * phi2 * (Ke + 3.0 * a * C2 + tau * tau) -
                               2.0 * a * (c.grad_C2.array() - 2.0 * (Ke + tau * tau) * C2))
                                  .matrix();
    r.residuals.push_back(with_integral(gf, "cor5.2V", div_V - rhs_V, div_V));
    finish_identity(r);
    return r;
}

namespace {

double interior_min(const GeometryField& gf, const ScalarField& f) {
    double m = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < f.cols(); ++n)
        if (gf.margin() == 0 || gf.grid.interior(n, gf.margin())) m = std::min(m, f[n]);
    return m;
}

double interior_max(const GeometryField& gf, const ScalarField& f) { return -interior_min(gf, -f); }

/// Kₑ constant and negative: standard deviation <= 1e-6 and max < 0 over interior nodes.
bool constant_negative_Ke(const GeometryField& gf) {
    double sum = 0.0, sum2 = 0.0;
    int count = 0;
    for (Index n = 0; n < gf.size(); ++n) {
        if (gf.margin() != 0 && !gf.grid.interior(n, gf.margin())) continue;
        sum += gf.Ke[n];
        sum2 += gf.Ke[n] * gf.Ke[n];
        ++count;
    }
    const double mean = sum / count;
    const double var = std::max(0.0, sum2 / count - mean * mean);
    return std::sqrt(var) <= 1e-6 && interior_max(gf, gf.Ke) < 0.0;
}

}  // namespace

CheckReport Verifier::kato() const {
    const auto& c = *ctx_;
    CheckReport r = make_report("lemma4.4");
    const ScalarField defect = c.sd.norm2 - 3.0 * c.grad_H2 - 2.0 * c.a * gf_.C.cwiseProduct(c.T_of_H);
    const double lo = interior_min(gf_, defect);
    r.values.emplace_back("min_defect", lo);
    r.values.emplace_back("max_defect", interior_max(gf_, defect));
    r.pointwise_max_residual = std::max(0.0, -lo);
    r.residuals.push_back(SubResidual{"lemma4.4", r.pointwise_max_residual, std::nullopt});
    r.status = lo >= -r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

CheckReport Verifier::reverse_kato() const {
    const auto& c = *ctx_;
    CheckReport r = make_report("lemma5.3");
    if (!constant_negative_Ke(gf_)) {
        r.status = CheckStatus::Inapplicable;
        r.note = "extrinsic curvature is not a negative constant";
        return r;
    }
    const ScalarField defect = 4.0 * c.grad_H2 - c.sd.norm2;
    const double lo = interior_min(gf_, defect);
    const double worst = max_abs(gf_, defect);
    r.values.emplace_back("min_defect", lo);
    r.values.emplace_back("max_abs_defect", worst);
    r.pointwise_max_residual = std::max(0.0, -lo);
    r.residuals.push_back(SubResidual{"lemma5.3", r.pointwise_max_residual, std::nullopt});
    r.flags.emplace_back("equality", worst <= r.tolerance);
    r.flags.emplace_back("parallel", max_abs(gf_, c.sd.norm2) <= r.tolerance);
    r.status = lo >= -r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

CheckReport Verifier::euler_lagrange() const {
    CheckReport r = make_report("prop4.1");
    if (!gf_.grid.closed()) {
        r.status = CheckStatus::Inapplicable;
        r.note = "the Euler-Lagrange equation concerns closed surfaces";
        return r;
    }
    const ELResidual el = el_residual(gf_);
    const ScalarField G = variation_gradient(gf_);
    r.residuals.push_back(pointwise(gf_, "prop4.1.gradient", G - el.field));
    r.values.emplace_back("el_max", el.max_abs);
    r.values.emplace_back("el_integral", el.integral);
    r.values.emplace_back("el_rms", el.rms);
    r.flags.emplace_back("stationary", el.max_abs <= r.tolerance);
    finish_identity(r);
    return r;
}

namespace {

int sign_of(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

}  // namespace

CheckReport Verifier::theorem_46() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("thm4.6");
    if (!gf.grid.closed()) {
        r.status = CheckStatus::Inapplicable;
        r.note = "needs a closed surface";
        return r;
    }
    const double a = c.a, tau = c.tau;
    const auto phi2 = gf.norm_phi2.array(), C2 = c.C2.array(), Ke = gf.Ke.array();
    const ScalarField first = (phi2.square() - (2.0 * tau * tau - a * (1.0 - 3.0 * C2)) * phi2).matrix();
    const ScalarField second = (c.grad_C2.array() + (Ke + tau * tau) * (1.0 - 5.0 * C2) +
                                2.0 * tau * tau * (1.0 - 3.0 * C2))
                                   .matrix();
    const double I1 = integrate(gf, first) - a * integrate(gf, second);
    const ELResidual el = el_residual(gf);
    const double A = area(gf);
    const bool willmore = el.max_abs <= r.tolerance;
    const bool equality = std::abs(I1) <= r.integral_tolerance;
    const bool parallel = max_abs(gf, c.sd.norm2) <= r.tolerance;
    r.integral_value = I1;
    r.values.emplace_back("I1", I1);
    r.values.emplace_back("I1_over_area", I1 / A);
    r.values.emplace_back("I1_sign", sign_of(I1, r.integral_tolerance));
    r.values.emplace_back("el_max", el.max_abs);
    r.flags.emplace_back("willmore", willmore);
    r.flags.emplace_back("equality", equality);
    r.flags.emplace_back("parallel", parallel);
    if (!willmore) {
        r.status = CheckStatus::Inapplicable;
        r.note = "surface is not Willmore (Euler-Lagrange residual above tolerance); I1 recorded only";
        return r;
    }
    r.status = equality == parallel ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

namespace {

CheckReport constant_Ke_theorem(const GeometryField& gf, const CheckContext& c, CheckReport r, double lhs,
                                double rhs, const char* note) {
    const double defect = lhs - rhs;
    const bool equality = std::abs(defect) <= r.integral_tolerance;
    const bool parallel = max_abs(gf, c.sd.norm2) <= r.tolerance;
    r.integral_value = defect;
    r.values.emplace_back("lhs", lhs);
    r.values.emplace_back("rhs", rhs);
    r.values.emplace_back("defect", defect);
    r.values.emplace_back("defect_over_area", defect / area(gf));
    r.flags.emplace_back("equality", equality);
    r.flags.emplace_back("parallel", parallel);
    r.note = note;
    r.status = defect >= -r.integral_tolerance && equality == parallel ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

}  // namespace

CheckReport Verifier::theorem_55() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("thm5.5");
    if (!gf.grid.closed() || !constant_negative_Ke(gf)) {
        r.status = CheckStatus::Inapplicable;
        r.note = gf.grid.closed() ? "extrinsic curvature is not a negative constant" : "needs a closed surface";
        return r;
    }
    const double a = c.a, tau = c.tau;
    const AuxFields aux = aux_fields(gf);
    const double lhs = integrate(
        gf, (gf.norm_phi2.array() * (gf.Ke.array() + a * (4.0 * c.C2.array() - 1.0) + tau * tau)).matrix());
    const double rhs = a * integrate(gf, aux.Q);
    return constant_Ke_theorem(gf, c, std::move(r), lhs, rhs, "lhs - rhs >= 0");
}

CheckReport Verifier::theorem_56() const {
    const auto& c = *ctx_;
    const GeometryField& gf = gf_;
    CheckReport r = make_report("thm5.6");
    if (!gf.grid.closed() || !constant_negative_Ke(gf) || !(c.a > 0.0)) {
        r.status = CheckStatus::Inapplicable;
        r.note = !gf.grid.closed() ? "needs a closed surface"
                 : !(c.a > 0.0)    ? "needs kappa - 4 tau^2 > 0"
                                   : "extrinsic curvature is not a negative constant";
        return r;
    }
    const double a = c.a, tau = c.tau;
    const auto Ke = gf.Ke.array(), C2 = c.C2.array();
    const double I2 = integrate(
        gf, ((3.0 * a * C2 + Ke + tau * tau) * gf.norm_phi2.array() + 2.0 * a * (Ke + tau * tau) * C2).matrix());
    return constant_Ke_theorem(gf, c, std::move(r), I2, 0.0, "I2 >= 0");
}

const std::vector<std::string>& all_check_ids() {
    static const std::vector<std::string> ids{"structural", "eq3.5",    "prop3.1",  "lemma3.2",
                                              "lemma5.1",   "cor5.2",   "lemma4.4", "lemma5.3",
                                              "prop4.1",    "thm4.6",   "thm5.5",   "thm5.6"};
    return ids;
}

namespace {

const std::vector<std::string>& sub_residual_ids() {
    static const std::vector<std::string> ids{
        "structural.eq2.8",      "structural.eq2.9a",         "structural.eq2.9b",
        "structural.eq2.10.square", "structural.eq2.10.isometry", "structural.eq2.11",
        "structural.eq2.12",     "structural.eq2.16",          "structural.eq2.16ff",
        "structural.eq2.17",     "structural.eq3.17",          "structural.eq4.21",
        "structural.eq4.22",     "structural.eq4.23",          "structural.eq5.7",
        "structural.eq5.8",      "structural.normal",          "prop3.1.weitzenbock",
        "prop3.1.assembly",      "lemma3.2.newton_trace",      "lemma3.2.newton_commute",
        "lemma5.1a",             "lemma5.1b",                  "lemma5.1c",
        "lemma5.1.norm_nabla_T", "cor5.2U",                    "cor5.2V",
        "prop4.1.gradient"};
    return ids;
}

/// The check that produces a residual id: the longest check id prefixing it.
std::string owner_of(const std::string& id) {
    std::string best;
    for (const auto& c : all_check_ids())
        if (id.rfind(c, 0) == 0 && c.size() > best.size()) best = c;
    return best;
}

}  // namespace

bool is_known_residual(const std::string& id) {
    const auto& checks = all_check_ids();
    const auto& subs = sub_residual_ids();
    return std::find(checks.begin(), checks.end(), id) != checks.end() ||
           std::find(subs.begin(), subs.end(), id) != subs.end();
}

CheckReport Verifier::run(const std::string& id) const {
    if (id == "structural") return structural();
    if (id == "eq3.5") return trace_nabla_A();
    if (id == "prop3.1") return simons();
    if (id == "lemma3.2") return cheng_yau_divergence();
    if (id == "lemma5.1") return divergence_lemma();
    if (id == "cor5.2") return corollary_UV();
    if (id == "lemma4.4") return kato();
    if (id == "lemma5.3") return reverse_kato();
    if (id == "prop4.1") return euler_lagrange();
    if (id == "thm4.6") return theorem_46();
    if (id == "thm5.5") return theorem_55();
    if (id == "thm5.6") return theorem_56();
    throw UnknownCheckError("unknown check id: " + id);
}

std::vector<CheckReport> run_checks(const GeometryField& gf, const std::vector<std::string>& ids,
                                    std::optional<Tolerances> tol) {
    std::vector<std::string> selected;
    if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) selected = all_check_ids();
    else selected = ids;
    for (const auto& id : selected) {
        const auto& all = all_check_ids();
        if (std::find(all.begin(), all.end(), id) == all.end()) throw UnknownCheckError("unknown check id: " + id);
    }
    const Verifier v(gf, tol);
    std::vector<CheckReport> out;
    out.reserve(selected.size());
    for (const auto& id : selected) out.push_back(v.run(id));
    return out;
}

double residual_of(const GeometryField& gf, const std::string& id) {
    if (!is_known_residual(id)) throw UnknownCheckError("unknown check or residual id: " + id);
    const Verifier v(gf);
    const CheckReport r = v.run(owner_of(id));
    if (r.id == id) return r.pointwise_max_residual;
    const SubResidual* s = r.residual(id);
    if (!s) throw UnknownCheckError("residual " + id + " not produced on this surface");
    return s->max_abs;
}

CheckReport check_structural(const GeometryField& gf) { return Verifier(gf).structural(); }
CheckReport check_simons(const GeometryField& gf) { return Verifier(gf).simons(); }
CheckReport check_cheng_yau_divergence(const GeometryField& gf) { return Verifier(gf).cheng_yau_divergence(); }
CheckReport check_divergence_lemma(const GeometryField& gf) { return Verifier(gf).divergence_lemma(); }
CheckReport check_corollary_UV(const GeometryField& gf) { return Verifier(gf).corollary_UV(); }
CheckReport check_kato(const GeometryField& gf) { return Verifier(gf).kato(); }
CheckReport check_reverse_kato(const GeometryField& gf) { return Verifier(gf).reverse_kato(); }
CheckReport check_theorem_46(const GeometryField& gf) { return Verifier(gf).theorem_46(); }
CheckReport check_theorem_55(const GeometryField& gf) { return Verifier(gf).theorem_55(); }
CheckReport check_theorem_56(const GeometryField& gf) { return Verifier(gf).theorem_56(); }

}  // namespace berger
