#pragma once

// Extrinsic geometry of parametric surfaces in E^3(kappa, tau), sampled on a grid.
//
// Tangent vectors are stored by their components in the coordinate basis {X_u, X_v};
// 2x2 operators (shape operator A, Phi, J, Hessians) by mixed components S^i_j, so that
// S(X_j) = S^i_j X_i and composition is the matrix product.

#include "berger/ambient.hpp"
#include "berger/grid.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace berger {

struct RegularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SurfaceKind { HopfTorus, Clifford, Cylinder, Slice, Perturbed, Custom };

std::string to_string(SurfaceKind kind);

/// Analytic first and second partials of a parametrization.
struct Partials {
    AmbientVector xu, xv, xuu, xuv, xvv;
};

/// Parameter rectangle of an immersion; periodic directions wrap around.
struct ParamDomain {
    double u0 = 0.0, lu = 2.0 * M_PI;
    double v0 = 0.0, lv = 2.0 * M_PI;
    bool periodic_u = true, periodic_v = true;
};

/// A parametric map (u, v) -> chart coordinates, optionally with analytic partials.
struct Immersion {
    Chart chart;
    SurfaceKind kind = SurfaceKind::Custom;
    ParamDomain domain;
    std::function<AmbientPoint(double, double)> position;
    std::function<Partials(double, double)> partials;  ///< empty when unavailable
};

/// An immersion sampled on a grid. Without partials, derivatives are finite differences.
struct NodalImmersion {
    Grid grid;
    Chart chart;
    SurfaceKind kind = SurfaceKind::Custom;
    AmbientField x;
    /// X_u, X_v, X_uu, X_uv, X_vv when known in closed form.
    std::optional<std::array<AmbientField, 5>> partials;
};

/// Grid with nu x nv nodes over the immersion's parameter domain.
Grid make_grid(const Immersion& imm, int nu, int nv);

NodalImmersion sample(const Immersion& imm, const Grid& grid);

/// Moves every node by `displacement` (chart components); the result has no analytic partials.
NodalImmersion displaced(const NodalImmersion& imm, const AmbientField& displacement);

/// Pointwise extrinsic data of an immersed surface.
struct GeometryField {
    GeometryField(const Grid& g, const ModelParams& m, const Chart& c, SurfaceKind k)
        : grid(g), model(m), chart(c), kind(k) {}

    Grid grid;
    ModelParams model;
    Chart chart;
    SurfaceKind kind = SurfaceKind::Custom;

    AmbientField x, xu, xv;
    AmbientField normal;  ///< N = X_u ^ X_v / |X_u ^ X_v|
    AmbientField xi;

    TensorField metric;      ///< g_ij
    TensorField metric_inv;  ///< g^ij
    ScalarField sqrt_det;
    Tensor3Field christoffel;  ///< Gamma^k_ij at t3(k, i, j)

    TensorField second_form;  ///< h_ij = <A X_i, X_j>
    TensorField shape;        ///< A^i_j
    TensorField phi;          ///< Phi = A - H Id
    TensorField rotation;     ///< J^i_j, J(X) = N ^ X

    ScalarField H, Ke, norm_A2, norm_phi2, C;
    TangentField T;
    ScalarField K;              ///< intrinsic Gauss curvature from the induced metric
    ScalarField K_gauss_eq;     ///< ambient sectional curvature of the tangent plane + Ke
    ScalarField K_ambient_sec;  ///< sectional curvature of the tangent plane from the closed form

    double max_normal_defect = 0.0;  ///< max |<N,N> - 1| + |<N,X_u>| + |<N,X_v>|
    double max_shape_asymmetry = 0.0;  ///< max |h_uv - h_vu| before symmetrisation

    Eigen::Index size() const { return grid.size(); }
    /// Rows excluded from pointwise maxima at patch edges (one-sided stencils).
    int margin() const { return grid.closed() ? 0 : 4; }
};

GeometryField geometry_field(const NodalImmersion& imm, const ModelParams& model);
GeometryField geometry_field(const Immersion& imm, const Grid& grid, const ModelParams& model);

// Pointwise algebra ---------------------------------------------------------------------

TangentField apply(const TensorField& s, const TangentField& v);
TensorField compose(const TensorField& a, const TensorField& b);
ScalarField trace(const TensorField& s);
ScalarField inner(const GeometryField& gf, const TangentField& a, const TangentField& b);
ScalarField norm2(const GeometryField& gf, const TangentField& a);
/// <S, T> = sum_i <S e_i, T e_i> for mixed (1,1) tensors.
ScalarField tensor_inner(const GeometryField& gf, const TensorField& a, const TensorField& b);
/// (T^i_j + lambda delta^i_j) per node.
TensorField shifted(const TensorField& t, const ScalarField& lambda);

/// J(V) = N ^ V in the tangent basis.
TangentField rotate_J(const GeometryField& gf, const TangentField& v);

// Differential operators ----------------------------------------------------------------

/// Covariant components df_i.
Eigen::Matrix2Xd differential(const GeometryField& gf, const ScalarField& f);
TangentField surface_gradient(const GeometryField& gf, const ScalarField& f);
/// Mixed components of Hess f = nabla df.
TensorField surface_hessian(const GeometryField& gf, const ScalarField& f);
ScalarField laplace_beltrami(const GeometryField& gf, const ScalarField& f);

/// (nabla_k V)^i stored as the mixed tensor M^i_k, so M V' = nabla_{V'} V.
TensorField covariant_derivative(const GeometryField& gf, const TangentField& v);
ScalarField divergence(const GeometryField& gf, const TangentField& v);
/// (nabla_k S)^i_j at t3(i, j, k) for a (1,1) tensor field S.
Tensor3Field covariant_derivative(const GeometryField& gf, const TensorField& s);

struct ShapeDerivative {
    Tensor3Field nabla_A;  ///< nabla A(X_j, X_k) = (nabla_k A)(X_j), component i at t3(i, j, k)
    ScalarField norm2;     ///< |nabla A|^2
    TangentField trace;    ///< tr(nabla A) = sum_i nabla A(e_i, e_i)
    TangentField codazzi;  ///< nabla A(X_u, X_v) - nabla A(X_v, X_u)
};

ShapeDerivative covariant_shape_derivative(const GeometryField& gf);

/// Rough Laplacian (Delta A)(X) = sum_i nabla^2 A(X, e_i, e_i).
TensorField rough_laplacian(const GeometryField& gf, const Tensor3Field& nabla_A);

// Integration and residual norms --------------------------------------------------------

double integrate(const GeometryField& gf, const ScalarField& f);
double area(const GeometryField& gf);
/// Max |f| over nodes, excluding patch-edge rows.
double max_abs(const GeometryField& gf, const ScalarField& f);

}  // namespace berger
