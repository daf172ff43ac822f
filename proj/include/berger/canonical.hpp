#pragma once

// Model surfaces with closed-form parametrizations: Hopf tori (including the Clifford
// torus), Hopf cylinders in BCV coordinates, horizontal slices of M^2(kappa) x R and
// normal perturbations of Hopf tori.

#include "berger/surface.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace berger {

struct NoCriticalTorusError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Hopf torus {|z| = r, |w| = sqrt(1 - r^2)} in a Berger sphere.
struct HopfTorusSpec {
    double r;
    ModelParams model;

    HopfTorusSpec(double r_, const ModelParams& m);
};

/// Planar curve in the BCV base (x, y), parametrized by s.
struct CurveSpec {
    enum class Kind { Circle, Line, Samples };

    Kind kind = Kind::Circle;
    double radius = 1.0;       ///< Euclidean radius of a circle centred at the origin
    double half_length = 0.5;  ///< a line runs along the x axis over [-half_length, half_length]
    /// Periodic samples alpha(2 pi k / M), k = 0..M-1, interpolated trigonometrically.
    std::vector<Eigen::Vector2d> samples;

    static CurveSpec circle(double radius);
    static CurveSpec line(double half_length);
    static CurveSpec periodic_samples(std::vector<Eigen::Vector2d> pts);

    bool closed() const { return kind != Kind::Line; }
    /// Geodesic curvature of a circle in the base of curvature kappa; 0 for a line.
    double geodesic_curvature(const ModelParams& model) const;
};

Immersion hopf_torus(const HopfTorusSpec& spec);
Immersion clifford_torus(const ModelParams& model);

/// Hopf-coordinate eta of the torus of radius r, and the inverse.
double torus_eta(double r);

struct CriticalRadius {
    double r;        ///< root in (0, 1/sqrt 2)
    double mirror;   ///< sqrt(1 - r^2), the congruent torus with z and w swapped
    double H;        ///< |H| at r
    double target;   ///< sqrt((2 tau^2 - kappa) / 2)
};

/// Radius of the non-minimal Willmore Hopf torus, |H(r)| = sqrt((2 tau^2 - kappa) / 2).
CriticalRadius critical_radius(const ModelParams& model);

/// Vertical cylinder over a base curve in BCV coordinates; t runs over [t0, t0 + height].
Immersion hopf_cylinder(const CurveSpec& curve, const ModelParams& model, double height = 1.0,
                        double t0 = 0.0);

/// Patch {(x, y, z0) : |x|, |y| <= half_width} of a slice; requires tau = 0.
Immersion product_slice(const ModelParams& model, double half_width = 0.5, double z0 = 0.0);

/// Hopf torus moved along its normal by epsilon * cos(m u) cos(n v).
Immersion perturbed_torus(const HopfTorusSpec& base, double epsilon, std::pair<int, int> mode);

}  // namespace berger
