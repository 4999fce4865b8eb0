#pragma once

#include "bcinv/characterization.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace bcinv::testing {

inline MatrixFunction1D sample_potential(const SpaceTimeGrid& grid, const std::function<Matrix(double)>& v) {
    std::vector<Matrix> s;
    for (int i = 0; i <= grid.steps(); ++i) s.push_back(v(grid.x(i)));
    return {grid, std::move(s)};
}

/// [[sin x, 0.3], [-0.1, cos x]]
inline Matrix nonsymmetric(double x) {
    Matrix m(2, 2);
    m << std::sin(x), 0.3, -0.1, std::cos(x);
    return m;
}

inline Matrix scalar_cos(double x) { return Matrix::Constant(1, 1, std::cos(x)); }

inline Matrix nilpotent(double) {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

/// Symmetric with a non-commuting x-dependence.
inline Matrix symmetric(double x) {
    Matrix m(2, 2);
    m << 1.0 + x, 0.4 * std::cos(2 * x), 0.4 * std::cos(2 * x), 0.5 - x * x;
    return m;
}

inline double relative_max(const Matrix& a, double scale) { return a.cwiseAbs().maxCoeff() / scale; }

/// Successive approximations for the scalar kernel on the characteristic
/// lattice a = t + x in [0, 2T], b = t - x in [0, T] with step delta:
/// with w extended oddly in x and V evenly,
///   w(a, b) = g(a) - g(b) - 1/4 int_0^a int_0^b V(|alpha - beta| / 2) w d beta d alpha,
///   g(a) = -1/2 int_0^{a/2} V.
/// The double integral is a product trapezoid rule.
class PicardOracle {
public:
    PicardOracle(std::function<double(double)> v, double horizon, int cells, int iterations)
        : delta_(horizon / cells), na_(2 * cells + 1), nb_(cells + 1), u_(na_ * nb_, 0.0) {
        // g on the lattice by a fine trapezoid of V over [0, a/2] (step delta / 2).
        std::vector<double> g(na_, 0.0);
        for (int i = 1; i < na_; ++i) {
            const double x0 = (i - 1) * delta_ / 2, x1 = i * delta_ / 2;
            g[i] = g[i - 1] - 0.5 * 0.5 * (x1 - x0) * (v(x0) + v(x1));
        }
        std::vector<double> vtab(na_);
        for (int d = 0; d < na_; ++d) vtab[d] = v(d * delta_ / 2);
        std::vector<double> base(na_ * nb_);
        for (int i = 0; i < na_; ++i)
            for (int j = 0; j < nb_; ++j) base[idx(i, j)] = g[i] - g[j];
        u_ = base;
        std::vector<double> s(na_ * nb_);
        for (int it = 0; it < iterations; ++it) {
            // S(a, b) = int_0^a int_0^b V w, cumulative trapezoid in b, then in a.
            for (int i = 0; i < na_; ++i) {
                double prev = vtab[i] * u_[idx(i, 0)];
                s[idx(i, 0)] = 0.0;
                for (int j = 1; j < nb_; ++j) {
                    const double cur = vtab[std::abs(i - j)] * u_[idx(i, j)];
                    s[idx(i, j)] = s[idx(i, j - 1)] + 0.5 * delta_ * (prev + cur);
                    prev = cur;
                }
            }
            for (int j = 0; j < nb_; ++j) {
                double acc = 0.0, prev = s[idx(0, j)];
                s[idx(0, j)] = 0.0;
                for (int i = 1; i < na_; ++i) {
                    const double cur = s[idx(i, j)];
                    acc += 0.5 * delta_ * (prev + cur);
                    prev = cur;
                    s[idx(i, j)] = acc;
                }
            }
            for (std::size_t k = 0; k < u_.size(); ++k) u_[k] = base[k] - 0.25 * s[k];
        }
    }

    /// w at lattice indices a = ia delta, b = ib delta.
    double at(int ia, int ib) const { return u_[idx(ia, ib)]; }
    double delta() const { return delta_; }
    int b_cells() const { return nb_ - 1; }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * nb_ + j; }

    double delta_;
    int na_;
    int nb_;
    std::vector<double> u_;
};

/// Row 0 of L = sum_{m >= 1} (-1)^{m+1} Ktilde^m, Ktilde = K diag(omega), for the
/// scalar kernel C^xi(t, s) = r0 (xi - max(t, s)) of a constant response,
/// returned as l(0, eta_j) = L[0, j] / omega_j.
inline std::vector<double> neumann_resolvent_row(double r0, double xi, int k, int terms) {
    const double h = xi / k;
    Matrix kt(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) {
            const double omega = (j == 0 || j == k) ? h / 2 : h;
            kt(i, j) = r0 * (xi - std::max(i, j) * h) * omega;
        }
    Matrix power = kt, sum = Matrix::Zero(k + 1, k + 1);
    double sign = 1.0;
    for (int m = 1; m <= terms; ++m) {
        sum += sign * power;
        power = power * kt;
        sign = -sign;
    }
    std::vector<double> out(k + 1);
    for (int j = 0; j <= k; ++j) out[j] = sum(0, j) / ((j == 0 || j == k) ? h / 2 : h);
    return out;
}

/// Max difference of two forward kernels on the coarse grid's nodes.
inline double kernel_gap(const TransmutationKernel& coarse, const TransmutationKernel& fine) {
    const int ratio = fine.grid().steps() / coarse.grid().steps();
    double worst = 0.0;
    for (int i = 0; i <= coarse.grid().steps(); ++i)
        for (int j = i; j <= coarse.last_time_index(i); ++j)
            worst = std::max(worst, (coarse.at(i, j) - fine.at(ratio * i, ratio * j)).cwiseAbs().maxCoeff());
    return worst;
}

/// Refinement rule for residuals that are O(h^2) in exact arithmetic but may
/// already sit at roundoff: pass when the coarse residual is within the bound
/// and it either drops by `min_ratio` or both are below `floor`.
inline bool refines(double coarse, double fine, double bound, double min_ratio = 3.5, double floor = 1e-10) {
    if (!(coarse <= bound)) return false;
    if (coarse < floor && fine < floor) return true;
    return fine > 0.0 && coarse / fine >= min_ratio;
}

}  // namespace bcinv::testing
