#include "berger/grid.hpp"

#include <cmath>

namespace berger {

double Grid::weight(Eigen::Index n) const {
    const int i = static_cast<int>(n / nv_);
    const int j = static_cast<int>(n % nv_);
    double w = hu() * hv();
    if (!periodic_u_ && (i == 0 || i == nu_ - 1)) w *= 0.5;
    if (!periodic_v_ && (j == 0 || j == nv_ - 1)) w *= 0.5;
    return w;
}

bool Grid::interior(Eigen::Index n, int margin) const {
    const int i = static_cast<int>(n / nv_);
    const int j = static_cast<int>(n % nv_);
    if (!periodic_u_ && (i < margin || i >= nu_ - margin)) return false;
    if (!periodic_v_ && (j < margin || j >= nv_ - margin)) return false;
    return true;
}

Stencil stencil(const Grid& grid, Axis axis, int i) {
    const int n = grid.count(axis);
    const double scale = 1.0 / (12.0 * grid.spacing(axis));
    Stencil s;
    auto set = [&](std::array<int, 5> offsets, std::array<double, 5> w) {
        for (int t = 0; t < 5; ++t) {
            int k = i + offsets[t];
            if (grid.periodic(axis)) k = ((k % n) + n) % n;
            s.node[t] = k;
            s.weight[t] = w[t] * scale;
        }
    };
    if (grid.periodic(axis) || (i >= 2 && i <= n - 3))
        set({-2, -1, 0, 1, 2}, {1.0, -8.0, 0.0, 8.0, -1.0});
    else if (i == 0)
        set({0, 1, 2, 3, 4}, {-25.0, 48.0, -36.0, 16.0, -3.0});
    else if (i == 1)
        set({-1, 0, 1, 2, 3}, {-3.0, -10.0, 18.0, -6.0, 1.0});
    else if (i == n - 2)
        set({1, 0, -1, -2, -3}, {3.0, 10.0, -18.0, 6.0, -1.0});
    else
        set({0, -1, -2, -3, -4}, {25.0, -48.0, 36.0, -16.0, 3.0});
    return s;
}

AmbientField diff_positions(const AmbientField& x, const Grid& grid, Axis axis,
                            const std::array<bool, 3>& angular) {
    AmbientField out(3, x.cols());
    const int n_axis = grid.count(axis);
    const int n_other = grid.count(axis == Axis::U ? Axis::V : Axis::U);
    for (int a = 0; a < n_axis; ++a) {
        const Stencil s = stencil(grid, axis, a);
        for (int b = 0; b < n_other; ++b) {
            const Eigen::Index n = axis == Axis::U ? grid.index(a, b) : grid.index(b, a);
            Eigen::Vector3d acc = Eigen::Vector3d::Zero();
            for (int t = 0; t < 5; ++t) {
                if (s.weight[t] == 0.0) continue;
                const Eigen::Index m = axis == Axis::U ? grid.index(s.node[t], b) : grid.index(b, s.node[t]);
                Eigen::Vector3d d = x.col(m) - x.col(n);
                for (int c = 0; c < 3; ++c)
                    if (angular[c]) d[c] = std::remainder(d[c], 2.0 * M_PI);
                acc += s.weight[t] * d;
            }
            out.col(n) = acc;
        }
    }
    return out;
}

}  // namespace berger
