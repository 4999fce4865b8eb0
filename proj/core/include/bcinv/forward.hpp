#pragma once

#include "bcinv/grid.hpp"

#include <vector>

namespace bcinv {

/// Sampled kernel w(x_i, t_j) of the representation
///   u^f(x, t) = f(t - x) + int_x^t w(x, s) f(t - s) ds
/// stored on a characteristic triangle. The extended extent covers
/// 0 <= x_i <= T, x_i <= t_j <= 2T - x_i (what the forward solver produces);
/// the square extent covers x_i <= t_j <= T (what inversion recovers).
class TransmutationKernel {
public:
    enum class Extent { extended, square };

    TransmutationKernel(SpaceTimeGrid grid, Extent extent);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    Extent extent() const noexcept { return extent_; }

    int last_time_index(int i) const noexcept {
        return extent_ == Extent::extended ? 2 * grid_.steps() - i : grid_.steps();
    }
    bool contains(int i, int j) const noexcept {
        return i >= 0 && i <= grid_.steps() && j >= i && j <= last_time_index(i);
    }

    /// Throws InvalidInput for indices outside the stored triangle.
    Eigen::Map<const Matrix> at(int i, int j) const;
    Eigen::Map<Matrix> at(int i, int j);

    /// w(x_i, x_i), i = 0..M.
    std::vector<Matrix> diagonal() const;

    /// Max entrywise difference over the nodes stored by both kernels.
    static double max_difference(const TransmutationKernel& a, const TransmutationKernel& b);
    double max_abs() const;

private:
    std::size_t offset(int i, int j) const;

    SpaceTimeGrid grid_;
    Extent extent_;
    std::vector<std::size_t> row_start_;
    std::vector<double> data_;
};

/// r(t_j), j = 0..2M: the kernel of the response operator,
///   (R^{2T} f)(t) = -f'(t) + int_0^t r(t - s) f(s) ds.
class ResponseFunction {
public:
    explicit ResponseFunction(MatrixFunction1D samples);

    static ResponseFunction zeros(const SpaceTimeGrid& grid);

    const SpaceTimeGrid& grid() const noexcept { return values_.grid(); }
    const MatrixFunction1D& values() const noexcept { return values_; }
    const Matrix& operator[](int j) const { return values_[j]; }
    int size() const noexcept { return values_.size(); }

    ResponseFunction transposed() const { return ResponseFunction(values_.transposed()); }

private:
    MatrixFunction1D values_;
};

/// Snapshot u(x_i, t) of a wave at grid time t = t_index h.
struct WaveField {
    SpaceTimeGrid grid;
    int time_index;
    std::vector<Vector> samples;

    double time() const noexcept { return grid.t(time_index); }
};

/// Marches the Goursat problem for w on the extended triangle.
///
/// In characteristic variables a = t + x, b = t - x the equation
/// w_tt - w_xx + V w = 0 becomes 4 w_ab = -V((a - b)/2) w. The march runs on
/// the lattice a = p h, b = q h (0 <= q <= p <= 2M), which holds every grid
/// node (i, j) at p = i + j, q = j - i together with the half-step nodes in
/// between. Each cell is closed with the box rule
///   (I + c V_c) w_NE = w_E + w_N - w_SW - c V_c (w_E + w_N + w_SW),
/// c = h^2 / 16 = h_e^2 / 8 with h_e = h / sqrt(2) the cell edge length, and V_c
/// the potential at the cell centre. Data: w = -1/2 int_0^x V on b = 0 and
/// w = 0 on a = b (x = 0). V at half-step nodes comes from four-point Lagrange
/// interpolation that never reads beyond x = T.
TransmutationKernel solve_goursat(const MatrixFunction1D& potential);

/// r(t_j) = (4 w(x_1, t_j) - w(x_2, t_j)) / (2h) for j = 2..2M-2; the two
/// nodes at each end are filled by quadratic extrapolation.
ResponseFunction response_from_kernel(const TransmutationKernel& w);

ResponseFunction forward_response(const MatrixFunction1D& potential);

/// u(x_i, t) = f(t - x_i) + trapezoid over s in [x_i, t] of w(x_i, s) f(t - s).
/// Controls vanish for negative time, so u(x_i) = 0 for x_i > t.
WaveField evaluate_wavefield(const TransmutationKernel& w, const Control& f, double t);

/// V_b(x) = V(x)^T, the potential of the dual system.
MatrixFunction1D dual_potential(const MatrixFunction1D& potential);

}  // namespace bcinv
