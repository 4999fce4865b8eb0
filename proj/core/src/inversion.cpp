#include "bcinv/inversion.hpp"

#include "bcinv/error.hpp"
#include "bcinv/parallel.hpp"

#include <optional>
#include <string>

namespace bcinv {

std::string_view to_string(Method method) {
    return method == Method::amplitude ? "amplitude" : "resolvent";
}

Method parse_method(std::string_view name) {
    if (name == "amplitude") return Method::amplitude;
    if (name == "resolvent") return Method::resolvent;
    throw InvalidInput("unknown method '" + std::string(name) + "' (expected amplitude or resolvent)");
}

namespace {

// Shared data of one xi sweep: the antiderivative R of r and C^T.
class Sweep {
public:
    Sweep(const ResponseFunction& r, double rcond_threshold)
        : r_(r),
          grid_(r.grid()),
          n_(grid_.n()),
          m_(grid_.steps()),
          threshold_(rcond_threshold),
          integral_(cumulative_integral(std::span(r.values().samples()), grid_.h())) {}

    const SpaceTimeGrid& grid() const { return grid_; }

    // C^T(t_i, t_j).
    Matrix kernel_full(int i, int j) const {
        return 0.5 * (integral_[2 * m_ - i - j] - integral_[std::abs(i - j)]);
    }

    // Block row 0 of [C^k]^{-1} (N x N(k + 1)) and the rcond of C^k.
    std::pair<Matrix, double> first_row_of_inverse(int k) const {
        const FactorizedOperator lu(build_connecting(r_, k), threshold_);
        const Matrix unit = Matrix::Identity(n_ * (k + 1), n_);
        return {lu.solve_transposed(unit).transpose(), lu.rcond()};
    }

    // Row k of W^T restricted to the columns [first, last] of F^T.
    Matrix amplitude_row(const Matrix& row0, int k, int first, int last) const {
        const int cols = last - first + 1;
        Matrix tail(n_ * (k + 1), n_ * cols);
        const Vector weights = trapezoid_weights(m_, grid_.h());
        for (int i = 0; i <= k; ++i)
            for (int j = first; j <= last; ++j) {
                const int row_node = m_ - k + i;
                auto block = tail.block(i * n_, (j - first) * n_, n_, n_);
                block = kernel_full(row_node, j) * weights[j];
                if (row_node == j) block.diagonal().array() += 1.0;
            }
        return row0 * tail;
    }

    // w(x_k, s_j) from the resolvent row; `lrow` holds L[0, i] = l(0, eta_i) omega_i.
    Matrix resolvent_kernel(const Matrix& lrow, int k, int s) const {
        Matrix value = kernel_full(m_ - k, m_ - s);
        for (int i = 0; i <= k; ++i)
            value.noalias() -= lrow.middleCols(i * n_, n_) * kernel_full(m_ - k + i, m_ - s);
        return value;
    }

    Matrix resolvent_matrix(const Matrix& row0) const {
        Matrix lrow = -row0;
        lrow.leftCols(n_).diagonal().array() += 1.0;
        return lrow;
    }

private:
    const ResponseFunction& r_;
    SpaceTimeGrid grid_;
    int n_;
    int m_;
    double threshold_;
    std::vector<Matrix> integral_;
};

// Runs task(k) for each swept k, recording rcond; failures are collected and the
// smallest failing xi is raised as a characterization failure.
template <class Task>
std::vector<XiDiagnostic> sweep_xi(const SpaceTimeGrid& grid, const std::vector<int>& ks, Task&& task) {
    std::vector<XiDiagnostic> diagnostics(ks.size());
    std::vector<std::optional<SingularOperator>> failures(ks.size());
    parallel_for(static_cast<int>(ks.size()), [&](int idx) {
        const int k = ks[idx];
        try {
            diagnostics[idx] = {k, grid.x(k), task(k, idx)};
        } catch (const SingularOperator& e) {
            diagnostics[idx] = {k, grid.x(k), e.rcond()};
            failures[idx] = e;
        }
    });
    for (std::size_t idx = 0; idx < ks.size(); ++idx)
        if (failures[idx])
            throw CharacterizationFailure("characterization condition fails: C^xi is not invertible at xi = " +
                                              detail::short_number(grid.x(ks[idx])) + " (rcond " +
                                              detail::short_number(failures[idx]->rcond()) + ")",
                                          grid.x(ks[idx]), ks[idx], failures[idx]->rcond());
    return diagnostics;
}

// Cubic extrapolation to the node after the last sample.
Matrix extrapolate_end(const std::vector<Matrix>& d) {
    const std::size_t last = d.size() - 1;
    return 4.0 * d[last] - 6.0 * d[last - 1] + 4.0 * d[last - 2] - d[last - 3];
}

}  // namespace

AmplitudeRecovery recover_W_amplitude(const ResponseFunction& r, double rcond_threshold) {
    const SpaceTimeGrid& grid = r.grid();
    const int n = grid.n();
    const int m = grid.steps();
    const double h = grid.h();
    if (m < 4) throw GridTooCoarse("recover_W_amplitude: need M >= 4");
    const Sweep sweep(r, rcond_threshold);

    Matrix w_matrix = Matrix::Zero(n * (m + 1), n * (m + 1));
    w_matrix.block(0, m * n, n, n).setIdentity();
    std::vector<int> ks(m);
    for (int k = 1; k <= m; ++k) ks[k - 1] = k;
    auto diagnostics = sweep_xi(grid, ks, [&](int k, int) {
        auto [row0, rcond] = sweep.first_row_of_inverse(k);
        w_matrix.middleRows(k * n, n) = sweep.amplitude_row(row0, k, 0, m);
        return rcond;
    });

    TransmutationKernel kernel(grid, TransmutationKernel::Extent::square);
    const Matrix identity = Matrix::Identity(n, n);
    for (int k = 0; k < m; ++k)
        for (int s = k; s <= m; ++s) {
            const int j = m - s;
            const double weight = (s == k || s == m) ? 0.5 * h : h;
            Matrix value = w_matrix.block(k * n, j * n, n, n);
            if (s == k) value -= identity;
            kernel.at(k, s) = value / weight;
        }
    std::vector<Matrix> diag = kernel.diagonal();
    diag.pop_back();
    const Matrix corner = extrapolate_end(diag);
    kernel.at(m, m) = corner;
    w_matrix.block(m * n, 0, n, n) += 0.25 * h * corner;

    const Vector weights = trapezoid_weights(m, h);
    return {ControlSpaceOperator(grid, m, std::move(w_matrix), weights, weights), std::move(kernel),
            std::move(diagnostics)};
}

ResolventRow resolvent_row(const ResponseFunction& r, int k, double rcond_threshold) {
    const SpaceTimeGrid& grid = r.grid();
    if (k < 1 || k > grid.steps()) throw InvalidInput("resolvent_row: xi index out of range");
    const Sweep sweep(r, rcond_threshold);
    const Matrix lrow = sweep.resolvent_matrix(sweep.first_row_of_inverse(k).first);
    const Vector weights = trapezoid_weights(k, grid.h());
    ResolventRow out{k, {}};
    out.samples.reserve(k + 1);
    for (int i = 0; i <= k; ++i) out.samples.emplace_back(lrow.middleCols(i * grid.n(), grid.n()) / weights[i]);
    return out;
}

TransmutationKernel recover_kernel_resolvent(const ResponseFunction& r, double rcond_threshold) {
    const SpaceTimeGrid& grid = r.grid();
    const int m = grid.steps();
    const Sweep sweep(r, rcond_threshold);
    TransmutationKernel kernel(grid, TransmutationKernel::Extent::square);
    for (int s = 0; s <= m; ++s) kernel.at(0, s) = sweep.kernel_full(m, m - s);
    std::vector<int> ks(m);
    for (int k = 1; k <= m; ++k) ks[k - 1] = k;
    sweep_xi(grid, ks, [&](int k, int) {
        auto [row0, rcond] = sweep.first_row_of_inverse(k);
        const Matrix lrow = sweep.resolvent_matrix(row0);
        for (int s = k; s <= m; ++s) kernel.at(k, s) = sweep.resolvent_kernel(lrow, k, s);
        return rcond;
    });
    return kernel;
}

MatrixFunction1D potential_from_kernel(const TransmutationKernel& w) {
    std::vector<Matrix> d = diagonal_derivative(std::span<const Matrix>(w.diagonal()), w.grid().h());
    for (auto& v : d) v *= -2.0;
    return {w.grid(), std::move(d)};
}

RecoveredPotential invert_response(const ResponseFunction& r, const InversionOptions& options) {
    const SpaceTimeGrid& grid = r.grid();
    const int n = grid.n();
    const int m = grid.steps();
    const int stride = options.stride;
    if (stride < 1 || m % stride != 0)
        throw InvalidInput("invert_response: stride " + std::to_string(stride) + " does not divide M = " +
                           std::to_string(m) + "; interpolating between swept xi is refused");
    const int coarse = m / stride;
    if (coarse < 4) throw GridTooCoarse("invert_response: need at least 4 swept xi");

    const Sweep sweep(r, options.rcond_threshold);
    std::vector<int> ks(coarse);
    for (int c = 1; c <= coarse; ++c) ks[c - 1] = c * stride;
    std::vector<Matrix> diag(coarse + 1, Matrix::Zero(n, n));
    const Matrix identity = Matrix::Identity(n, n);
    const double h = grid.h();
    const bool amplitude = options.method == Method::amplitude;

    auto diagnostics = sweep_xi(grid, ks, [&](int k, int idx) {
        auto [row0, rcond] = sweep.first_row_of_inverse(k);
        if (amplitude) {
            if (k < m) diag[idx + 1] = (sweep.amplitude_row(row0, k, m - k, m - k) - identity) / (0.5 * h);
        } else {
            diag[idx + 1] = sweep.resolvent_kernel(sweep.resolvent_matrix(row0), k, k);
        }
        return rcond;
    });
    if (amplitude) {
        std::vector<Matrix> head(diag.begin(), diag.end() - 1);
        diag.back() = extrapolate_end(head);
    }

    const SpaceTimeGrid coarse_grid(n, grid.horizon(), coarse);
    std::vector<Matrix> v = diagonal_derivative(std::span<const Matrix>(diag), coarse_grid.h());
    for (auto& s : v) s *= -2.0;
    return {MatrixFunction1D(coarse_grid, std::move(v)), options.method, stride, std::move(diagnostics)};
}

}  // namespace bcinv
