#include "bcinv/operators.hpp"

#include "bcinv/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace bcinv {

namespace {

Vector expand(const Vector& per_node, int n) {
    Vector out(per_node.size() * n);
    for (Eigen::Index j = 0; j < per_node.size(); ++j) out.segment(j * n, n).setConstant(per_node[j]);
    return out;
}

Matrix conjugated(const ControlSpaceOperator& a) {
    const int n = a.grid().n();
    const Vector left = expand(a.weights_out(), n).cwiseSqrt();
    const Vector right = expand(a.weights_in(), n).cwiseSqrt().cwiseInverse();
    return left.asDiagonal() * a.matrix() * right.asDiagonal();
}

Vector tail_weights(const SpaceTimeGrid& grid, int k) {
    return trapezoid_weights(grid.steps(), grid.h()).tail(k + 1);
}

void check_k(const SpaceTimeGrid& grid, int k, const char* who, int lowest = 1) {
    if (k < lowest || k > grid.steps())
        throw InvalidInput(std::string(who) + ": xi index " + std::to_string(k) + " outside [" +
                           std::to_string(lowest) + ", " + std::to_string(grid.steps()) + "]");
}

}  // namespace

ControlSpaceOperator::ControlSpaceOperator(SpaceTimeGrid grid, int xi_steps, Matrix matrix, Vector weights_in,
                                           Vector weights_out, bool identity_plus_kernel)
    : grid_(grid),
      xi_steps_(xi_steps),
      matrix_(std::move(matrix)),
      weights_in_(std::move(weights_in)),
      weights_out_(std::move(weights_out)),
      identity_plus_kernel_(identity_plus_kernel) {
    const int n = grid_.n();
    if (matrix_.rows() != n * weights_out_.size() || matrix_.cols() != n * weights_in_.size())
        throw InvalidInput("operator: matrix shape does not match the weight vectors");
    if ((weights_in_.array() <= 0.0).any() || (weights_out_.array() <= 0.0).any())
        throw InvalidInput("operator: quadrature weights must be positive");
}

Vector ControlSpaceOperator::apply(const Vector& f) const {
    if (f.size() != matrix_.cols()) throw InvalidInput("operator: argument has wrong length");
    return matrix_ * f;
}

double ControlSpaceOperator::weighted_norm() const { return sigma_extremes(*this).sigma_max; }

ControlSpaceOperator operator*(const ControlSpaceOperator& a, const ControlSpaceOperator& b) {
    if (a.weights_in().size() != b.weights_out().size() || a.weights_in() != b.weights_out())
        throw InvalidInput("operator: composition of operators with mismatched spaces");
    return {a.grid(), a.xi_steps(), a.matrix() * b.matrix(), b.weights_in(), a.weights_out()};
}

Matrix connecting_kernel(const ResponseFunction& r, int k) {
    const SpaceTimeGrid& grid = r.grid();
    check_k(grid, k, "connecting_kernel");
    const int n = grid.n();
    const std::vector<Matrix> integral = cumulative_integral(std::span(r.values().samples()), grid.h());
    Matrix kernel(n * (k + 1), n * (k + 1));
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
            kernel.block(i * n, j * n, n, n) = 0.5 * (integral[2 * k - i - j] - integral[std::abs(i - j)]);
    return kernel;
}

ControlSpaceOperator build_connecting(const ResponseFunction& r, int k) {
    const SpaceTimeGrid& grid = r.grid();
    check_k(grid, k, "build_connecting");
    const Vector weights = trapezoid_weights(k, grid.h());
    Matrix a = connecting_kernel(r, k) * expand(weights, grid.n()).asDiagonal();
    a.diagonal().array() += 1.0;
    return {grid, k, std::move(a), weights, weights, true};
}

ControlSpaceOperator compress(const ControlSpaceOperator& c_full, int k) {
    const SpaceTimeGrid& grid = c_full.grid();
    check_k(grid, k, "compress");
    if (c_full.input_nodes() != grid.space_nodes() || c_full.output_nodes() != grid.space_nodes())
        throw InvalidInput("compress: operator must act on F^T");
    const int n = grid.n();
    const int first = (grid.steps() - k) * n;
    const int size = (k + 1) * n;
    return {grid,
            k,
            c_full.matrix().block(first, first, size, size),
            c_full.weights_in().tail(k + 1),
            c_full.weights_out().tail(k + 1),
            c_full.identity_plus_kernel()};
}

Vector embed(const Vector& f, const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "embed", 0);
    const int n = grid.n();
    if (f.size() != n * (k + 1)) throw InvalidInput("embed: control must have k + 1 samples");
    Vector g = Vector::Zero(n * grid.space_nodes());
    g.tail(f.size()) = f;
    return g;
}

Vector restrict(const Vector& g, const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "restrict", 0);
    const int n = grid.n();
    if (g.size() != n * grid.space_nodes()) throw InvalidInput("restrict: control must have M + 1 samples");
    return g.tail(n * (k + 1));
}

ControlSpaceOperator embedding_operator(const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "embedding_operator", 0);
    const int n = grid.n();
    Matrix e = Matrix::Zero(n * grid.space_nodes(), n * (k + 1));
    e.bottomRows(n * (k + 1)).setIdentity();
    return {grid, k, std::move(e), tail_weights(grid, k), trapezoid_weights(grid.steps(), grid.h())};
}

ControlSpaceOperator restriction_operator(const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "restriction_operator", 0);
    const int n = grid.n();
    Matrix e = Matrix::Zero(n * (k + 1), n * grid.space_nodes());
    e.rightCols(n * (k + 1)).setIdentity();
    return {grid, k, std::move(e), trapezoid_weights(grid.steps(), grid.h()), tail_weights(grid, k)};
}

ControlSpaceOperator cutoff(const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "cutoff", 0);
    const int n = grid.n();
    const int size = n * grid.space_nodes();
    Matrix x = Matrix::Zero(size, size);
    x.bottomRightCorner(n * (k + 1), n * (k + 1)).setIdentity();
    const Vector w = trapezoid_weights(grid.steps(), grid.h());
    return {grid, k, std::move(x), w, w};
}

ControlSpaceOperator space_cutoff(const SpaceTimeGrid& grid, int k) {
    check_k(grid, k, "space_cutoff", 0);
    const int n = grid.n();
    const int size = n * grid.space_nodes();
    Matrix y = Matrix::Zero(size, size);
    y.topLeftCorner(n * (k + 1), n * (k + 1)).setIdentity();
    const Vector w = trapezoid_weights(grid.steps(), grid.h());
    return {grid, k, std::move(y), w, w};
}

ControlSpaceOperator flip_isometry(const SpaceTimeGrid& grid) {
    const int n = grid.n();
    const int m = grid.steps();
    Matrix flip = Matrix::Zero(n * (m + 1), n * (m + 1));
    for (int j = 0; j <= m; ++j) flip.block(j * n, (m - j) * n, n, n).setIdentity();
    const Vector w = trapezoid_weights(m, grid.h());
    return {grid, m, std::move(flip), w, w};
}

ControlSpaceOperator weighted_adjoint(const ControlSpaceOperator& a) {
    const int n = a.grid().n();
    const Vector in = expand(a.weights_in(), n);
    const Vector out = expand(a.weights_out(), n);
    Matrix adj = in.cwiseInverse().asDiagonal() * a.matrix().transpose() * out.asDiagonal();
    return {a.grid(), a.xi_steps(), std::move(adj), a.weights_out(), a.weights_in(), a.identity_plus_kernel()};
}

SigmaExtremes sigma_extremes(const ControlSpaceOperator& a) {
    const Matrix b = conjugated(a);
    if (b.size() == 0) return {0.0, 0.0};
    if (std::max(b.rows(), b.cols()) <= 1500) {
        Eigen::BDCSVD<Matrix> svd(b);
        const Vector& s = svd.singularValues();
        return {s[s.size() - 1], s[0]};
    }

    // Power iteration for sigma_max, inverse iteration through LU for sigma_min.
    Vector v = Vector::Ones(b.cols()).normalized();
    double sigma_max = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Vector next = b.transpose() * (b * v);
        const double norm = next.norm();
        if (norm == 0.0) break;
        const double estimate = std::sqrt(norm);
        next /= norm;
        const bool done = std::abs(estimate - sigma_max) <= 1e-14 * estimate;
        sigma_max = estimate;
        v = std::move(next);
        if (done) break;
    }
    if (b.rows() != b.cols()) throw InvalidInput("sigma_extremes: iterative path needs a square operator");
    Eigen::PartialPivLU<Matrix> lu(b);
    Vector u = Vector::Ones(b.cols()).normalized();
    double sigma_min = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Vector next = lu.transpose().solve(Vector(lu.solve(u)));
        const double norm = next.norm();
        if (!std::isfinite(norm) || norm == 0.0) return {0.0, sigma_max};
        const double estimate = 1.0 / std::sqrt(norm);
        next /= norm;
        const bool done = std::abs(estimate - sigma_min) <= 1e-14 * estimate;
        sigma_min = estimate;
        u = std::move(next);
        if (done) break;
    }
    return {sigma_min, sigma_max};
}

FactorizedOperator::FactorizedOperator(const ControlSpaceOperator& a, double rcond_threshold)
    : lu_(a.matrix()), rcond_(0.0) {
    const auto pivots = lu_.matrixLU().diagonal().cwiseAbs();
    if (pivots.size() > 0 && pivots.minCoeff() > 0.0 && pivots.allFinite()) rcond_ = lu_.rcond();
    if (!std::isfinite(rcond_)) rcond_ = 0.0;
    if (!(rcond_ > rcond_threshold))
        throw SingularOperator("connecting operator at xi = " + detail::short_number(a.xi()) +
                                   " is numerically singular (rcond " + detail::short_number(rcond_) + ")",
                               a.xi(), a.xi_steps(), rcond_);
}

SolveResult solve(const ControlSpaceOperator& a, const Vector& g, double rcond_threshold) {
    if (a.matrix().rows() != a.matrix().cols()) throw InvalidInput("solve: operator is not square");
    if (g.size() != a.matrix().rows()) throw InvalidInput("solve: right-hand side has wrong length");
    const FactorizedOperator lu(a, rcond_threshold);
    return {lu.solve(g), lu.rcond(), sigma_extremes(a).sigma_min};
}

namespace {

ControlSpaceOperator projector_from(const ControlSpaceOperator& c_full, const ControlSpaceOperator& c_short) {
    const SpaceTimeGrid& grid = c_full.grid();
    const int k = c_short.xi_steps();
    const int n = grid.n();
    const FactorizedOperator lu(c_short);
    const Matrix tail = c_full.matrix().bottomRows(n * (k + 1));
    Matrix p = Matrix::Zero(c_full.matrix().rows(), c_full.matrix().cols());
    p.bottomRows(n * (k + 1)) = lu.solve(tail);
    return {grid, k, std::move(p), c_full.weights_in(), c_full.weights_out()};
}

}  // namespace

ControlSpaceOperator build_projector(const ResponseFunction& r, int k, ProjectorForm form) {
    const ControlSpaceOperator c_full = build_connecting(r, r.grid().steps());
    check_k(r.grid(), k, "build_projector");
    return projector_from(c_full, form == ProjectorForm::compressed ? compress(c_full, k) : build_connecting(r, k));
}

ControlSpaceOperator build_dual_projector(const ResponseFunction& r, int k, ProjectorForm form) {
    const ControlSpaceOperator c_full = weighted_adjoint(build_connecting(r, r.grid().steps()));
    check_k(r.grid(), k, "build_dual_projector");
    return projector_from(c_full, form == ProjectorForm::compressed ? compress(c_full, k)
                                                                    : weighted_adjoint(build_connecting(r, k)));
}

}  // namespace bcinv
