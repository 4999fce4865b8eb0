#pragma once

#include "bcinv/forward.hpp"
#include "bcinv/grid.hpp"

#include <Eigen/LU>

namespace bcinv {

/// Dense block matrix acting on stacked time-major samples (N entries per
/// node). The quadrature weights are folded into the matrix, so it acts on raw
/// sample vectors; `weights_in` / `weights_out` are the per-node trapezoid
/// weights of the domain and range spaces and define the adjoint.
class ControlSpaceOperator {
public:
    ControlSpaceOperator(SpaceTimeGrid grid, int xi_steps, Matrix matrix, Vector weights_in, Vector weights_out,
                         bool identity_plus_kernel = false);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    int xi_steps() const noexcept { return xi_steps_; }
    double xi() const noexcept { return grid_.x(xi_steps_); }
    const Matrix& matrix() const noexcept { return matrix_; }
    const Vector& weights_in() const noexcept { return weights_in_; }
    const Vector& weights_out() const noexcept { return weights_out_; }
    bool identity_plus_kernel() const noexcept { return identity_plus_kernel_; }

    int input_nodes() const noexcept { return static_cast<int>(weights_in_.size()); }
    int output_nodes() const noexcept { return static_cast<int>(weights_out_.size()); }

    Vector apply(const Vector& f) const;

    /// 2-norm of diag(w_out)^{1/2} A diag(w_in)^{-1/2}: the operator norm
    /// between the trapezoid-weighted spaces, independent of the mesh.
    double weighted_norm() const;

private:
    SpaceTimeGrid grid_;
    int xi_steps_;
    Matrix matrix_;
    Vector weights_in_;
    Vector weights_out_;
    bool identity_plus_kernel_;
};

/// Composition a * b; the range weights of b must equal the domain weights of a.
/// The result carries the xi of a.
ControlSpaceOperator operator*(const ControlSpaceOperator& a, const ControlSpaceOperator& b);

/// Block kernel C^xi(t_i, s_j) = 1/2 (R(2 xi - t_i - s_j) - R(|t_i - s_j|)),
/// xi = k h, R the trapezoid antiderivative of r. Both arguments of R are
/// grid nodes, so no interpolation happens.
Matrix connecting_kernel(const ResponseFunction& r, int k);

/// C^xi = I + K diag(omega ⊗ I_N) with omega the trapezoid weights on [0, xi].
ControlSpaceOperator build_connecting(const ResponseFunction& r, int k);

/// (e^{T,xi})* C^T e^{T,xi}: the block of C^T acting on the last k + 1 nodes.
/// Same kernel as build_connecting(r, k); the column weight at the left end is
/// inherited from C^T (h rather than h / 2 when k < M).
ControlSpaceOperator compress(const ControlSpaceOperator& c_full, int k);

/// e^{T,xi}: zero-pads a stacked control on [0, xi] on the left to [0, T].
Vector embed(const Vector& f, const SpaceTimeGrid& grid, int k);
/// (e^{T,xi})*: keeps the last k + 1 nodes.
Vector restrict(const Vector& g, const SpaceTimeGrid& grid, int k);

ControlSpaceOperator embedding_operator(const SpaceTimeGrid& grid, int k);
ControlSpaceOperator restriction_operator(const SpaceTimeGrid& grid, int k);

/// X^{T,xi}: zeroes samples at t_j < T - xi.
ControlSpaceOperator cutoff(const SpaceTimeGrid& grid, int k);

/// Y^xi: zeroes space samples at x_i > xi (acts on M + 1 space nodes).
ControlSpaceOperator space_cutoff(const SpaceTimeGrid& grid, int k);

/// I^T on M + 1 nodes: (I y)(t_j) = y(t_{M-j}).
ControlSpaceOperator flip_isometry(const SpaceTimeGrid& grid);

/// A* = diag(w_in)^{-1} A^T diag(w_out).
ControlSpaceOperator weighted_adjoint(const ControlSpaceOperator& a);

struct SigmaExtremes {
    double sigma_min;
    double sigma_max;
};

/// Extreme singular values of the weight-conjugated matrix. Full SVD up to
/// dimension 1500, inverse / power iteration above.
SigmaExtremes sigma_extremes(const ControlSpaceOperator& a);

inline constexpr double default_rcond_threshold = 1e-12;

/// LU with partial pivoting that refuses to exist for numerically singular
/// operators (throws SingularOperator carrying xi).
class FactorizedOperator {
public:
    explicit FactorizedOperator(const ControlSpaceOperator& a, double rcond_threshold = default_rcond_threshold);

    double rcond() const noexcept { return rcond_; }
    Matrix solve(const Matrix& rhs) const { return lu_.solve(rhs); }
    Matrix solve_transposed(const Matrix& rhs) const { return lu_.transpose().solve(rhs); }
    Matrix inverse() const { return lu_.inverse(); }

private:
    Eigen::PartialPivLU<Matrix> lu_;
    double rcond_;
};

struct SolveResult {
    Vector solution;
    double rcond;
    double sigma_min;
};

SolveResult solve(const ControlSpaceOperator& a, const Vector& g, double rcond_threshold = default_rcond_threshold);

enum class ProjectorForm {
    /// [C^xi] taken as (e)* C^T e: exact projector identities.
    compressed,
    /// [C^xi] taken as build_connecting(r, k) with its own trapezoid weights.
    shortened,
};

/// P^{T,xi} = e [C^xi]^{-1} e* C^T.
ControlSpaceOperator build_projector(const ResponseFunction& r, int k,
                                     ProjectorForm form = ProjectorForm::compressed);

/// P_b^{T,xi} = e [(C^xi)*]^{-1} e* (C^T)*, the projector of the dual system.
ControlSpaceOperator build_dual_projector(const ResponseFunction& r, int k,
                                          ProjectorForm form = ProjectorForm::compressed);

}  // namespace bcinv
