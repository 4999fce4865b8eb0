#include "bcinv/grid.hpp"

#include "bcinv/error.hpp"

#include <cmath>
#include <string>

namespace bcinv {

SpaceTimeGrid::SpaceTimeGrid(int n, double horizon, int steps)
    : n_(n), horizon_(horizon), steps_(steps), h_(0.0) {
    if (n < 1) throw InvalidInput("grid: control dimension N must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidInput("grid: horizon T must be positive and finite");
    if (steps < 1) throw InvalidInput("grid: step count M must be positive");
    h_ = horizon / steps;
}

int SpaceTimeGrid::node_index(double t) const {
    const double scaled = t / h_;
    const double nearest = std::round(scaled);
    if (!std::isfinite(scaled) || std::abs(scaled - nearest) > 1e-9 * std::max(1.0, std::abs(scaled)))
        throw InvalidInput("grid: time " + std::to_string(t) + " is not a grid node");
    return static_cast<int>(nearest);
}

MatrixFunction1D::MatrixFunction1D(SpaceTimeGrid grid, std::vector<Matrix> samples)
    : grid_(grid), samples_(std::move(samples)) {
    const int count = static_cast<int>(samples_.size());
    if (count != grid_.space_nodes() && count != grid_.time_nodes())
        throw InvalidInput("matrix function: expected " + std::to_string(grid_.space_nodes()) + " or " +
                           std::to_string(grid_.time_nodes()) + " samples, got " + std::to_string(count));
    for (const auto& s : samples_) {
        if (s.rows() != grid_.n() || s.cols() != grid_.n())
            throw InvalidInput("matrix function: sample is not N x N");
        if (!s.allFinite()) throw InvalidInput("matrix function: non-finite sample");
    }
}

MatrixFunction1D MatrixFunction1D::zeros(const SpaceTimeGrid& grid, int count) {
    return {grid, std::vector<Matrix>(count, Matrix::Zero(grid.n(), grid.n()))};
}

MatrixFunction1D MatrixFunction1D::transposed() const {
    std::vector<Matrix> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.emplace_back(s.transpose());
    return {grid_, std::move(out)};
}

double MatrixFunction1D::max_difference(const MatrixFunction1D& a, const MatrixFunction1D& b) {
    if (a.size() != b.size() || a.grid().n() != b.grid().n())
        throw InvalidInput("matrix function: shape mismatch in comparison");
    double worst = 0.0;
    for (int k = 0; k < a.size(); ++k) worst = std::max(worst, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return worst;
}

double MatrixFunction1D::max_abs() const {
    double worst = 0.0;
    for (const auto& s : samples_) worst = std::max(worst, s.cwiseAbs().maxCoeff());
    return worst;
}

Control::Control(SpaceTimeGrid grid, std::vector<Vector> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (static_cast<int>(samples_.size()) != grid_.space_nodes())
        throw InvalidInput("control: expected " + std::to_string(grid_.space_nodes()) + " samples");
    for (const auto& s : samples_) {
        if (s.size() != grid_.n()) throw InvalidInput("control: sample is not an N-vector");
        if (!s.allFinite()) throw InvalidInput("control: non-finite sample");
    }
}

Control Control::zeros(const SpaceTimeGrid& grid) {
    return {grid, std::vector<Vector>(grid.space_nodes(), Vector::Zero(grid.n()))};
}

Control Control::from_stacked(const SpaceTimeGrid& grid, const Vector& stacked) {
    const int n = grid.n();
    if (stacked.size() != n * grid.space_nodes()) throw InvalidInput("control: stacked vector has wrong length");
    std::vector<Vector> samples;
    samples.reserve(grid.space_nodes());
    for (int j = 0; j < grid.space_nodes(); ++j) samples.emplace_back(stacked.segment(j * n, n));
    return {grid, std::move(samples)};
}

Vector Control::at(int j) const {
    if (j < 0) return Vector::Zero(grid_.n());
    if (j >= size()) throw InvalidInput("control: node index beyond T");
    return samples_[j];
}

Vector Control::stacked() const {
    const int n = grid_.n();
    Vector out(n * size());
    for (int j = 0; j < size(); ++j) out.segment(j * n, n) = samples_[j];
    return out;
}

bool Control::delayed_by(int xi_steps) const {
    const int first = grid_.steps() - xi_steps;
    for (int j = 0; j < first && j < size(); ++j)
        if (!samples_[j].isZero(0.0)) return false;
    return true;
}

std::vector<Matrix> cumulative_integral(std::span<const Matrix> f, double h) {
    if (f.empty()) throw InvalidInput("cumulative_integral: empty sample array");
    std::vector<Matrix> out;
    out.reserve(f.size());
    out.emplace_back(Matrix::Zero(f[0].rows(), f[0].cols()));
    for (std::size_t k = 1; k < f.size(); ++k) out.emplace_back(out.back() + 0.5 * h * (f[k - 1] + f[k]));
    return out;
}

MatrixFunction1D cumulative_integral(const MatrixFunction1D& f) {
    return {f.grid(), cumulative_integral(std::span(f.samples()), f.grid().h())};
}

std::vector<Matrix> diagonal_derivative(std::span<const Matrix> d, double h) {
    const std::size_t n = d.size();
    if (n < 3) throw InvalidInput("diagonal_derivative: need at least 3 samples");
    std::vector<Matrix> out(n);
    const double inv2h = 1.0 / (2.0 * h);
    out[0] = (-3.0 * d[0] + 4.0 * d[1] - d[2]) * inv2h;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (d[i + 1] - d[i - 1]) * inv2h;
    out[n - 1] = (3.0 * d[n - 1] - 4.0 * d[n - 2] + d[n - 3]) * inv2h;
    return out;
}

MatrixFunction1D diagonal_derivative(const SpaceTimeGrid& grid, std::span<const Matrix> d) {
    return {grid, diagonal_derivative(d, grid.h())};
}

Vector trapezoid_weights(int k, double h) {
    if (k < 1) throw InvalidInput("trapezoid_weights: need at least two nodes");
    Vector w = Vector::Constant(k + 1, h);
    w[0] = w[k] = 0.5 * h;
    return w;
}

}  // namespace bcinv
