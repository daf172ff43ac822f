#pragma once

// Uniform (u, v) parameter grids and fourth-order finite differences on them.
//
// Fields store one column per node, node index n = i * nv + j for u-index i and
// v-index j. Periodic directions use the centred five-point stencil with wraparound;
// patch directions switch to one-sided fourth-order stencils at the two outer rows.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace berger {

using ScalarField = Eigen::RowVectorXd;
using TangentField = Eigen::Matrix2Xd;
using AmbientField = Eigen::Matrix3Xd;
/// 2x2 tensors (column-major) per node; mixed components T^i_j unless stated otherwise.
using TensorField = Eigen::Matrix<double, 4, Eigen::Dynamic>;
/// Three-index tensors per node, component (i, j, k) at row i + 2 j + 4 k.
using Tensor3Field = Eigen::Matrix<double, 8, Eigen::Dynamic>;

constexpr int t3(int i, int j, int k) { return i + 2 * j + 4 * k; }

inline Eigen::Map<const Eigen::Matrix2d> at(const TensorField& t, Eigen::Index n) {
    return Eigen::Map<const Eigen::Matrix2d>(t.col(n).data());
}
inline Eigen::Map<Eigen::Matrix2d> at(TensorField& t, Eigen::Index n) {
    return Eigen::Map<Eigen::Matrix2d>(t.col(n).data());
}

enum class Axis { U = 0, V = 1 };

struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Grid {
public:
    static constexpr int kMinNodes = 16;

    /// Doubly periodic grid on [u0, u0 + lu) x [v0, v0 + lv).
    static Grid periodic(int nu, int nv, double lu = 2.0 * M_PI, double lv = 2.0 * M_PI) {
        return Grid(nu, nv, lu, lv, 0.0, 0.0, true, true);
    }
    /// Grid whose non-periodic directions include both end points of their interval.
    static Grid patch(int nu, int nv, double u0, double lu, bool periodic_u, double v0, double lv,
                      bool periodic_v) {
        return Grid(nu, nv, lu, lv, u0, v0, periodic_u, periodic_v);
    }

    int nu() const { return nu_; }
    int nv() const { return nv_; }
    Eigen::Index size() const { return Eigen::Index(nu_) * nv_; }
    double lu() const { return lu_; }
    double lv() const { return lv_; }
    bool periodic(Axis a) const { return a == Axis::U ? periodic_u_ : periodic_v_; }
    bool closed() const { return periodic_u_ && periodic_v_; }
    int count(Axis a) const { return a == Axis::U ? nu_ : nv_; }
    double spacing(Axis a) const {
        return a == Axis::U ? (periodic_u_ ? lu_ / nu_ : lu_ / (nu_ - 1))
                            : (periodic_v_ ? lv_ / nv_ : lv_ / (nv_ - 1));
    }
    double hu() const { return spacing(Axis::U); }
    double hv() const { return spacing(Axis::V); }
    double u(int i) const { return u0_ + i * hu(); }
    double v(int j) const { return v0_ + j * hv(); }
    Eigen::Index index(int i, int j) const { return Eigen::Index(i) * nv_ + j; }

    /// Trapezoidal weight of node n (hu * hv in the interior of every direction).
    double weight(Eigen::Index n) const;
    /// Whether n lies at least `margin` rows away from every patch edge.
    bool interior(Eigen::Index n, int margin) const;

private:
    Grid(int nu, int nv, double lu, double lv, double u0, double v0, bool pu, bool pv)
        : nu_(nu), nv_(nv), lu_(lu), lv_(lv), u0_(u0), v0_(v0), periodic_u_(pu), periodic_v_(pv) {
        if (nu < kMinNodes || nv < kMinNodes) throw GridError("grid needs at least 16 nodes per direction");
        if (!(lu > 0.0) || !(lv > 0.0)) throw GridError("grid periods must be positive");
    }

    int nu_, nv_;
    double lu_, lv_, u0_, v0_;
    bool periodic_u_, periodic_v_;
};

struct Stencil {
    std::array<int, 5> node{};  // indices along the axis
    std::array<double, 5> weight{};
};

/// First-derivative stencil at position i along `axis`, weights already divided by h.
Stencil stencil(const Grid& grid, Axis axis, int i);

/// d/du or d/dv of every row of a node field.
template <typename Derived>
typename Derived::PlainObject diff(const Eigen::MatrixBase<Derived>& f, const Grid& grid, Axis axis) {
    typename Derived::PlainObject out(f.rows(), f.cols());
    const int n_axis = grid.count(axis);
    for (int a = 0; a < n_axis; ++a) {
        const Stencil s = stencil(grid, axis, a);
        const int n_other = grid.count(axis == Axis::U ? Axis::V : Axis::U);
        for (int b = 0; b < n_other; ++b) {
            const Eigen::Index n = axis == Axis::U ? grid.index(a, b) : grid.index(b, a);
            out.col(n).setZero();
            for (int t = 0; t < 5; ++t) {
                if (s.weight[t] == 0.0) continue;
                const Eigen::Index m = axis == Axis::U ? grid.index(s.node[t], b) : grid.index(b, s.node[t]);
                out.col(n) += s.weight[t] * f.col(m);
            }
        }
    }
    return out;
}

/// Derivative of chart positions; differences of angular coordinates are wrapped to
/// (-pi, pi] so windings around a period are handled.
AmbientField diff_positions(const AmbientField& x, const Grid& grid, Axis axis,
                            const std::array<bool, 3>& angular);

}  // namespace berger
