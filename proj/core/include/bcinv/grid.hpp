#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace bcinv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Uniform characteristic discretization: the space step equals the time step,
/// so x_i = i h on [0, T] and t_j = j h on the doubled interval [0, 2T].
class SpaceTimeGrid {
public:
    SpaceTimeGrid(int n, double horizon, int steps);

    int n() const noexcept { return n_; }
    double horizon() const noexcept { return horizon_; }
    int steps() const noexcept { return steps_; }
    double h() const noexcept { return h_; }

    int space_nodes() const noexcept { return steps_ + 1; }
    int time_nodes() const noexcept { return 2 * steps_ + 1; }

    double x(int i) const noexcept { return i * h_; }
    double t(int j) const noexcept { return j * h_; }

    /// Index of grid time t, or throws InvalidInput when t is not a node.
    int node_index(double t) const;

    /// Same N and T with `steps` replaced.
    SpaceTimeGrid refined(int steps) const { return {n_, horizon_, steps}; }

    friend bool operator==(const SpaceTimeGrid&, const SpaceTimeGrid&) = default;

private:
    int n_;
    double horizon_;
    int steps_;
    double h_;
};

/// Sampled N x N matrix function of one variable. Lives either on the space
/// interval [0, T] (M + 1 nodes) or on the doubled time interval [0, 2T]
/// (2M + 1 nodes).
class MatrixFunction1D {
public:
    MatrixFunction1D(SpaceTimeGrid grid, std::vector<Matrix> samples);

    static MatrixFunction1D zeros(const SpaceTimeGrid& grid, int count);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    int size() const noexcept { return static_cast<int>(samples_.size()); }
    bool on_doubled_interval() const noexcept { return size() == grid_.time_nodes(); }

    const Matrix& operator[](int k) const { return samples_[k]; }
    const std::vector<Matrix>& samples() const noexcept { return samples_; }

    MatrixFunction1D transposed() const;

    /// max_k ||a_k - b_k||_max over the shared nodes.
    static double max_difference(const MatrixFunction1D& a, const MatrixFunction1D& b);
    double max_abs() const;

private:
    SpaceTimeGrid grid_;
    std::vector<Matrix> samples_;
};

/// Sampled R^N-valued control on [0, T]; M + 1 samples at t_0..t_M.
class Control {
public:
    Control(SpaceTimeGrid grid, std::vector<Vector> samples);

    static Control zeros(const SpaceTimeGrid& grid);
    /// Unpacks a stacked time-major vector of length N (M + 1).
    static Control from_stacked(const SpaceTimeGrid& grid, const Vector& stacked);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    const Vector& operator[](int j) const { return samples_[j]; }
    const std::vector<Vector>& samples() const noexcept { return samples_; }
    int size() const noexcept { return static_cast<int>(samples_.size()); }

    /// f(t_j) with the convention that controls vanish for negative time.
    Vector at(int j) const;

    Vector stacked() const;

    /// True when the control vanishes at every node with t_j < T - xi_steps h.
    bool delayed_by(int xi_steps) const;

private:
    SpaceTimeGrid grid_;
    std::vector<Vector> samples_;
};

/// Composite-trapezoid antiderivative: F(t_0) = 0, exact for affine integrands.
std::vector<Matrix> cumulative_integral(std::span<const Matrix> f, double h);
MatrixFunction1D cumulative_integral(const MatrixFunction1D& f);

/// d/dx of a sampled matrix function: central differences inside, second-order
/// one-sided stencils at both ends. Exact on quadratics.
std::vector<Matrix> diagonal_derivative(std::span<const Matrix> d, double h);
MatrixFunction1D diagonal_derivative(const SpaceTimeGrid& grid, std::span<const Matrix> d);

/// Trapezoid weights on k + 1 nodes of step h (h/2 at both ends, h inside).
Vector trapezoid_weights(int k, double h);

}  // namespace bcinv
