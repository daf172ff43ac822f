#pragma once

// Homogeneous 3-manifolds E^3(kappa, tau) in explicit coordinates.
//
// Two charts are supported:
//   * Bcv:  R^3 (or a disk x R when kappa < 0) with the Bianchi-Cartan-Vranceanu
//           metric  lambda^2 (dx^2 + dy^2) + (dz + tau*lambda*(y dx - x dy))^2.
//   * Hopf: (eta, phi1, phi2) -> (cos(eta) e^{i phi1}, sin(eta) e^{i phi2}) in S^3,
//           pulling back the Berger metric (Berger spheres only).
//
// Curvature follows the convention R(X,Y)Z = nabla_[X,Y] Z - [nabla_X, nabla_Y] Z,
// which is the negative of the usual one.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace berger {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using AmbientPoint = Vector3<double>;
using AmbientVector = Vector3<double>;

enum class SpaceKind { BergerSphere, Nil, Product, UniversalCoverPSL };

inline std::string to_string(SpaceKind k) {
    switch (k) {
    case SpaceKind::BergerSphere: return "berger_sphere";
    case SpaceKind::Nil: return "nil3";
    case SpaceKind::Product: return "product";
    case SpaceKind::UniversalCoverPSL: return "psl2r";
    }
    return "unknown";
}

/// The pair (kappa, tau). kappa = 4 tau^2 (a space form) is rejected.
class ModelParams {
public:
    ModelParams(double kappa, double tau) : kappa_(kappa), tau_(tau) {
        if (!std::isfinite(kappa) || !std::isfinite(tau))
            throw ModelError("kappa and tau must be finite");
        const double gap = kappa - 4.0 * tau * tau;
        if (std::abs(gap) <= 1e-14 * std::max(1.0, std::abs(kappa)))
            throw ModelError("kappa = 4 tau^2 excluded (space form)");
    }

    double kappa() const { return kappa_; }
    double tau() const { return tau_; }
    /// kappa - 4 tau^2, the coefficient that measures the departure from a space form.
    double anisotropy() const { return kappa_ - 4.0 * tau_ * tau_; }

    SpaceKind kind() const {
        if (tau_ == 0.0) return SpaceKind::Product;
        if (kappa_ > 0.0) return SpaceKind::BergerSphere;
        if (kappa_ == 0.0) return SpaceKind::Nil;
        return SpaceKind::UniversalCoverPSL;
    }
    bool is_berger_sphere() const { return kind() == SpaceKind::BergerSphere; }

private:
    double kappa_;
    double tau_;
};

enum class ChartKind { Bcv, Hopf };

inline std::string to_string(ChartKind k) { return k == ChartKind::Bcv ? "bcv" : "hopf"; }

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double v) const { return v > lo && v < hi; }
};

/// A coordinate chart together with its validity region and orientation.
struct Chart {
    ChartKind kind = ChartKind::Bcv;
    std::array<Interval, 3> bounds{};
    /// Radius of the disk {x^2 + y^2 < r^2} for BCV with kappa < 0; infinity otherwise.
    double disk_radius = std::numeric_limits<double>::infinity();
    /// Coordinates that are angles with period 2 pi (phi1, phi2 in the Hopf chart).
    std::array<bool, 3> angular{false, false, false};
    /// Sign relating the metric volume form to dx^1 ^ dx^2 ^ dx^3.
    int orientation = 1;

    template <typename Scalar>
    bool contains(const Vector3<Scalar>& p) const {
        for (int i = 0; i < 3; ++i)
            if (!bounds[i].contains(static_cast<double>(p[i]))) return false;
        const double r2 = static_cast<double>(p[0] * p[0] + p[1] * p[1]);
        return r2 < disk_radius * disk_radius;
    }
};

inline Chart make_chart(ChartKind kind, const ModelParams& model) {
    Chart chart;
    chart.kind = kind;
    if (kind == ChartKind::Bcv) {
        if (model.kappa() < 0.0) chart.disk_radius = 2.0 / std::sqrt(-model.kappa());
        return chart;
    }
    if (!model.is_berger_sphere())
        throw ModelError("Hopf coordinates require a Berger sphere (kappa > 0, tau != 0)");
    chart.bounds[0] = Interval{0.0, M_PI / 2.0};
    chart.angular = {false, true, true};
    // Reversing tau reverses the orientation of the same Riemannian manifold; with this
    // choice nabla_X xi = tau X ^ xi holds for either sign.
    chart.orientation = model.tau() > 0.0 ? 1 : -1;
    return chart;
}

template <typename Scalar>
struct MetricData {
    Matrix3<Scalar> g;
    Matrix3<Scalar> g_inv;
    Scalar sqrt_det;
    std::array<Matrix3<Scalar>, 3> dg;     ///< dg[k] = d g / d x^k
    std::array<Matrix3<Scalar>, 3> gamma;  ///< gamma[k](i, j) = Gamma^k_{ij}

    Scalar inner(const Vector3<Scalar>& a, const Vector3<Scalar>& b) const { return a.dot(g * b); }
    Scalar norm(const Vector3<Scalar>& a) const { return std::sqrt(inner(a, a)); }

    /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
    Vector3<Scalar> connection(const Vector3<Scalar>& x, const Vector3<Scalar>& y) const {
        Vector3<Scalar> out;
        for (int k = 0; k < 3; ++k) out[k] = x.dot(gamma[k] * y);
        return out;
    }
};

enum class DerivativeMode { Analytic, FiniteDifference };

constexpr double kDefaultAmbientStep = 1e-5;

namespace detail {

template <typename Scalar>
void require_inside(const Chart& chart, const Vector3<Scalar>& p) {
    if (!chart.contains(p)) throw DomainError("point outside the chart domain");
}

template <typename Scalar>
Matrix3<Scalar> bcv_metric(const ModelParams& m, const Vector3<Scalar>& p,
                           std::array<Matrix3<Scalar>, 3>* dg) {
    const Scalar x = p[0], y = p[1];
    const Scalar kappa = m.kappa(), tau = m.tau();
    const Scalar lambda = Scalar(1) / (Scalar(1) + kappa * (x * x + y * y) / Scalar(4));
    const Vector3<Scalar> theta(tau * lambda * y, -tau * lambda * x, Scalar(1));
    Matrix3<Scalar> planar = Matrix3<Scalar>::Zero();
    planar(0, 0) = planar(1, 1) = Scalar(1);
    if (dg) {
        const Scalar lx = -kappa * x * lambda * lambda / Scalar(2);
        const Scalar ly = -kappa * y * lambda * lambda / Scalar(2);
        const std::array<Scalar, 3> dl{lx, ly, Scalar(0)};
        std::array<Vector3<Scalar>, 3> dtheta;
        dtheta[0] = Vector3<Scalar>(tau * lx * y, -tau * (lx * x + lambda), Scalar(0));
        dtheta[1] = Vector3<Scalar>(tau * (ly * y + lambda), -tau * ly * x, Scalar(0));
        dtheta[2] = Vector3<Scalar>::Zero();
        for (int k = 0; k < 3; ++k)
            (*dg)[k] = Scalar(2) * lambda * dl[k] * planar + dtheta[k] * theta.transpose() +
                       theta * dtheta[k].transpose();
    }
    return lambda * lambda * planar + theta * theta.transpose();
}

template <typename Scalar>
Matrix3<Scalar> hopf_metric(const ModelParams& m, const Vector3<Scalar>& p,
                            std::array<Matrix3<Scalar>, 3>* dg) {
    const Scalar c = std::cos(p[0]), s = std::sin(p[0]);
    const Scalar scale = Scalar(4) / m.kappa();
    const Scalar beta = (Scalar(4) * m.tau() * m.tau() - m.kappa()) / m.kappa();
    // omega = <., V> on S^3 in these coordinates, V = d/dphi1 + d/dphi2.
    const Vector3<Scalar> omega(Scalar(0), c * c, s * s);
    Matrix3<Scalar> round = Matrix3<Scalar>::Zero();
    round.diagonal() << Scalar(1), c * c, s * s;
    if (dg) {
        const Vector3<Scalar> domega(Scalar(0), -Scalar(2) * c * s, Scalar(2) * c * s);
        Matrix3<Scalar> dround = Matrix3<Scalar>::Zero();
        dround.diagonal() = domega;
        (*dg)[0] = scale * (dround + beta * (domega * omega.transpose() + omega * domega.transpose()));
        (*dg)[1].setZero();
        (*dg)[2].setZero();
    }
    return scale * (round + beta * omega * omega.transpose());
}

template <typename Scalar>
Matrix3<Scalar> metric_only(const ModelParams& m, const Chart& chart, const Vector3<Scalar>& p) {
    return chart.kind == ChartKind::Bcv ? bcv_metric<Scalar>(m, p, nullptr)
                                        : hopf_metric<Scalar>(m, p, nullptr);
}

template <typename Scalar>
void assemble_christoffel(MetricData<Scalar>& md) {
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                Scalar acc(0);
                for (int l = 0; l < 3; ++l)
                    acc += md.g_inv(k, l) * (md.dg[i](j, l) + md.dg[j](i, l) - md.dg[l](i, j));
                md.gamma[k](i, j) = md.gamma[k](j, i) = acc / Scalar(2);
            }
        }
    }
}

}  // namespace detail

/// Metric, its first derivatives and the Christoffel symbols at p.
template <typename Scalar = double>
MetricData<Scalar> metric_at(const ModelParams& model, const Chart& chart, const Vector3<Scalar>& p,
                             DerivativeMode mode = DerivativeMode::Analytic,
                             double h_amb = kDefaultAmbientStep) {
    detail::require_inside(chart, p);
    MetricData<Scalar> md;
    if (mode == DerivativeMode::Analytic) {
        md.g = chart.kind == ChartKind::Bcv ? detail::bcv_metric<Scalar>(model, p, &md.dg)
                                            : detail::hopf_metric<Scalar>(model, p, &md.dg);
    } else {
        md.g = detail::metric_only<Scalar>(model, chart, p);
        for (int k = 0; k < 3; ++k) {
            Vector3<Scalar> e = Vector3<Scalar>::Zero();
            e[k] = Scalar(h_amb);
            md.dg[k] = (detail::metric_only<Scalar>(model, chart, Vector3<Scalar>(p + e)) -
                        detail::metric_only<Scalar>(model, chart, Vector3<Scalar>(p - e))) /
                       Scalar(2 * h_amb);
        }
    }
    md.g_inv = md.g.inverse();
    md.sqrt_det = std::sqrt(md.g.determinant());
    detail::assemble_christoffel(md);
    return md;
}

/// Oriented vector product: <X ^ Y, W> = vol(X, Y, W).
template <typename Scalar>
Vector3<Scalar> cross(const MetricData<Scalar>& md, int orientation, const Vector3<Scalar>& x,
                      const Vector3<Scalar>& y) {
    return Scalar(orientation) * md.sqrt_det * (md.g_inv * x.cross(y));
}

/// Unit vertical Killing field xi in chart components.
template <typename Scalar = double>
Vector3<Scalar> killing_xi(const ModelParams& model, const Chart& chart, const Vector3<Scalar>& p) {
    detail::require_inside(chart, p);
    if (chart.kind == ChartKind::Bcv) return Vector3<Scalar>(Scalar(0), Scalar(0), Scalar(1));
    const Scalar a = model.kappa() / (Scalar(4) * model.tau());
    return Vector3<Scalar>(Scalar(0), a, a);
}

/// Levi-Civita derivative of a vector field along X at p; the directional derivative of
/// the components is a central difference with step h_amb * |X|^-1.
inline AmbientVector covariant_derivative(
    const ModelParams& model, const Chart& chart, const AmbientPoint& p, const AmbientVector& x,
    const std::function<AmbientVector(const AmbientPoint&)>& field, double h_amb = kDefaultAmbientStep) {
    const auto md = metric_at(model, chart, p);
    const AmbientVector y = field(p);
    if (!y.allFinite()) throw DomainError("vector field evaluation failed");
    const double len = x.norm();
    if (len == 0.0) return AmbientVector::Zero();
    const double h = h_amb / len;
    const AmbientVector dy = (field(p + h * x) - field(p - h * x)) / (2.0 * h);
    if (!dy.allFinite()) throw DomainError("vector field is not differentiable at p");
    return dy + md.connection(x, y);
}

/// Closed-form curvature tensor of E^3(kappa, tau), inner products taken with g.
template <typename Scalar>
Vector3<Scalar> curvature_closed_form(const ModelParams& model, const Matrix3<Scalar>& g,
                                      const Vector3<Scalar>& xi, const Vector3<Scalar>& x,
                                      const Vector3<Scalar>& y, const Vector3<Scalar>& z) {
    const Scalar a = model.kappa() - 3.0 * model.tau() * model.tau();
    const Scalar b = model.anisotropy();
    auto ip = [&](const Vector3<Scalar>& u, const Vector3<Scalar>& v) { return u.dot(g * v); };
    const Scalar xz = ip(x, z), yz = ip(y, z), zxi = ip(z, xi), xxi = ip(x, xi), yxi = ip(y, xi);
    return a * (xz * y - yz * x) + b * zxi * (yxi * x - xxi * y) + b * (yz * xxi - xz * yxi) * xi;
}

/// Christoffel symbols differentiated by central differences.
template <typename Scalar = double>
std::array<std::array<Matrix3<Scalar>, 3>, 3> christoffel_derivatives(
    const ModelParams& model, const Chart& chart, const Vector3<Scalar>& p,
    DerivativeMode mode = DerivativeMode::Analytic, double h_amb = kDefaultAmbientStep) {
    std::array<std::array<Matrix3<Scalar>, 3>, 3> dgamma;  // dgamma[m][k] = d_m Gamma^k
    for (int m = 0; m < 3; ++m) {
        Vector3<Scalar> e = Vector3<Scalar>::Zero();
        e[m] = Scalar(h_amb);
        const auto plus = metric_at<Scalar>(model, chart, Vector3<Scalar>(p + e), mode, h_amb);
        const auto minus = metric_at<Scalar>(model, chart, Vector3<Scalar>(p - e), mode, h_amb);
        for (int k = 0; k < 3; ++k) dgamma[m][k] = (plus.gamma[k] - minus.gamma[k]) / Scalar(2 * h_amb);
    }
    return dgamma;
}

/// Curvature tensor from Christoffel symbols and their numerical derivatives, in the
/// convention R(X,Y)Z = nabla_[X,Y] Z - [nabla_X, nabla_Y] Z.
template <typename Scalar = double>
Vector3<Scalar> curvature_numeric(const ModelParams& model, const Chart& chart, const Vector3<Scalar>& p,
                                  const Vector3<Scalar>& x, const Vector3<Scalar>& y,
                                  const Vector3<Scalar>& z, DerivativeMode mode = DerivativeMode::Analytic,
                                  double h_amb = kDefaultAmbientStep) {
    const auto md = metric_at<Scalar>(model, chart, p, mode, h_amb);
    const auto dgamma = christoffel_derivatives<Scalar>(model, chart, p, mode, h_amb);
    // Usual R^l_{ijk} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik.
    Vector3<Scalar> out = Vector3<Scalar>::Zero();
    for (int l = 0; l < 3; ++l) {
        Scalar acc(0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    Scalar r = dgamma[i][l](j, k) - dgamma[j][l](i, k);
                    for (int m = 0; m < 3; ++m)
                        r += md.gamma[l](i, m) * md.gamma[m](j, k) - md.gamma[l](j, m) * md.gamma[m](i, k);
                    acc += r * x[i] * y[j] * z[k];
                }
        out[l] = -acc;
    }
    return out;
}

/// Ricci curvature Ric(Y, Y) (usual sign: positive on round spheres), contracted from
/// curvature_numeric over a g-orthonormal basis.
inline double ricci_numeric(const ModelParams& model, const Chart& chart, const AmbientPoint& p,
                            const AmbientVector& y, DerivativeMode mode = DerivativeMode::Analytic,
                            double h_amb = kDefaultAmbientStep) {
    const auto md = metric_at(model, chart, p, mode, h_amb);
    // Cholesky gives g = L L^T; the columns of L^{-T} are g-orthonormal.
    const Eigen::Matrix3d frame = md.g.llt().matrixL().transpose().solve(Eigen::Matrix3d::Identity());
    double ric = 0.0;
    for (int a = 0; a < 3; ++a) {
        const AmbientVector e = frame.col(a);
        ric -= md.inner(curvature_numeric(model, chart, p, e, y, y, mode, h_amb), e);
    }
    return ric;
}

/// Point of S^3 in C^2 for Hopf coordinates (eta, phi1, phi2).
inline std::array<std::complex<double>, 2> hopf_to_s3(const AmbientPoint& q) {
    return {std::polar(std::cos(q[0]), q[1]), std::polar(std::sin(q[0]), q[2])};
}

/// Hopf fibration S^3 -> base: (1/sqrt(kappa)) (z conj(w), (|z|^2 - |w|^2) / 2).
inline Eigen::Vector3d hopf_project(std::complex<double> z, std::complex<double> w, const ModelParams& model) {
    if (!(model.kappa() > 0.0)) throw ModelError("Hopf fibration requires kappa > 0");
    const double n2 = std::norm(z) + std::norm(w);
    if (std::abs(n2 - 1.0) > 1e-12) throw PreconditionError("hopf_project expects |z|^2 + |w|^2 = 1");
    const std::complex<double> zw = z * std::conj(w);
    return Eigen::Vector3d(zw.real(), zw.imag(), 0.5 * (std::norm(z) - std::norm(w))) / std::sqrt(model.kappa());
}

}  // namespace berger
