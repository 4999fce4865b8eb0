#include "bcinv/forward.hpp"

#include "bcinv/error.hpp"

#include <array>
#include <string>

namespace bcinv {

TransmutationKernel::TransmutationKernel(SpaceTimeGrid grid, Extent extent)
    : grid_(grid), extent_(extent) {
    const int m = grid_.steps();
    const std::size_t block = static_cast<std::size_t>(grid_.n()) * grid_.n();
    row_start_.resize(m + 2);
    row_start_[0] = 0;
    for (int i = 0; i <= m; ++i)
        row_start_[i + 1] = row_start_[i] + static_cast<std::size_t>(last_time_index(i) - i + 1) * block;
    data_.assign(row_start_[m + 1], 0.0);
}

std::size_t TransmutationKernel::offset(int i, int j) const {
    if (!contains(i, j))
        throw InvalidInput("kernel: node (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is outside the stored triangle");
    const std::size_t block = static_cast<std::size_t>(grid_.n()) * grid_.n();
    return row_start_[i] + static_cast<std::size_t>(j - i) * block;
}

Eigen::Map<const Matrix> TransmutationKernel::at(int i, int j) const {
    return {data_.data() + offset(i, j), grid_.n(), grid_.n()};
}

Eigen::Map<Matrix> TransmutationKernel::at(int i, int j) {
    return {data_.data() + offset(i, j), grid_.n(), grid_.n()};
}

std::vector<Matrix> TransmutationKernel::diagonal() const {
    std::vector<Matrix> out;
    out.reserve(grid_.space_nodes());
    for (int i = 0; i <= grid_.steps(); ++i) out.emplace_back(at(i, i));
    return out;
}

double TransmutationKernel::max_difference(const TransmutationKernel& a, const TransmutationKernel& b) {
    if (!(a.grid() == b.grid())) throw InvalidInput("kernel: grids differ");
    double worst = 0.0;
    for (int i = 0; i <= a.grid().steps(); ++i) {
        const int last = std::min(a.last_time_index(i), b.last_time_index(i));
        for (int j = i; j <= last; ++j) worst = std::max(worst, (a.at(i, j) - b.at(i, j)).cwiseAbs().maxCoeff());
    }
    return worst;
}

double TransmutationKernel::max_abs() const {
    double worst = 0.0;
    for (double v : data_) worst = std::max(worst, std::abs(v));
    return worst;
}

ResponseFunction::ResponseFunction(MatrixFunction1D samples) : values_(std::move(samples)) {
    if (!values_.on_doubled_interval())
        throw InvalidInput("response: expected 2M + 1 samples on [0, 2T]");
}

ResponseFunction ResponseFunction::zeros(const SpaceTimeGrid& grid) {
    return ResponseFunction(MatrixFunction1D::zeros(grid, grid.time_nodes()));
}

namespace {

// Lagrange weights for the point `at` (in node units) on nodes 0, 1, 2, 3.
std::array<double, 4> cubic_weights(double at) {
    std::array<double, 4> c{};
    for (int a = 0; a < 4; ++a) {
        double v = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) v *= (at - b) / static_cast<double>(a - b);
        c[a] = v;
    }
    return c;
}

// V at x = (i + 1/2) h, i = 0..M-1, from the four nearest nodes inside [0, T].
std::vector<Matrix> potential_at_half_nodes(const MatrixFunction1D& v) {
    const int m = v.grid().steps();
    const auto left = cubic_weights(0.5);
    const auto centre = cubic_weights(1.5);
    const auto right = cubic_weights(2.5);
    std::vector<Matrix> out;
    out.reserve(m);
    for (int i = 0; i < m; ++i) {
        int first = i - 1;
        const std::array<double, 4>* c = &centre;
        if (i == 0) {
            first = 0;
            c = &left;
        } else if (i == m - 1) {
            first = m - 3;
            c = &right;
        }
        Matrix s = (*c)[0] * v[first];
        for (int a = 1; a < 4; ++a) s += (*c)[a] * v[first + a];
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TransmutationKernel solve_goursat(const MatrixFunction1D& potential) {
    const SpaceTimeGrid& grid = potential.grid();
    const int m = grid.steps();
    const int n = grid.n();
    const double h = grid.h();
    if (potential.size() != grid.space_nodes())
        throw InvalidInput("solve_goursat: potential must be sampled at x_0..x_M");
    if (m < 3) throw GridTooCoarse("solve_goursat: need M >= 3");

    // Potential and diagonal data on the half-step lattice x = l h / 2, l = 0..2M.
    const std::vector<Matrix> half = potential_at_half_nodes(potential);
    const std::vector<Matrix> integral = cumulative_integral(std::span(potential.samples()), h);
    std::vector<Matrix> v_fine(2 * m + 1);
    std::vector<Matrix> data_fine(2 * m + 1);
    for (int i = 0; i <= m; ++i) {
        v_fine[2 * i] = potential[i];
        data_fine[2 * i] = -0.5 * integral[i];
    }
    for (int i = 0; i < m; ++i) {
        v_fine[2 * i + 1] = half[i];
        // Midpoint of the trapezoid antiderivative, corrected so the half-step
        // data carries the same O(h^2) error profile as the integer nodes.
        const Matrix mid = 0.5 * (integral[i] + integral[i + 1]) - (h / 8.0) * (potential[i + 1] - potential[i]);
        data_fine[2 * i + 1] = -0.5 * mid;
    }

    const double c = h * h / 16.0;
    const Matrix identity = Matrix::Identity(n, n);
    // Cell centres sit at x = (p - q) h / 2, so the corner system depends on p - q only.
    std::vector<Eigen::PartialPivLU<Matrix>> corner(2 * m);
    for (int l = 1; l < 2 * m; ++l) {
        corner[l].compute(identity + c * v_fine[l]);
        if (!(corner[l].rcond() > 1e-14))
            throw IllPosedStep("solve_goursat: singular corner system at cell centre x = " +
                                   detail::short_number(l * h / 2) + " (V h^2 too large)",
                               l, 0);
    }

    const int width = 2 * m + 1;
    const std::size_t block = static_cast<std::size_t>(n) * n;
    std::vector<double> lower(width * block, 0.0);
    std::vector<double> upper(width * block, 0.0);
    auto node = [&](std::vector<double>& row, int p) { return Eigen::Map<Matrix>(row.data() + p * block, n, n); };

    TransmutationKernel w(grid, TransmutationKernel::Extent::extended);
    auto store_row = [&](std::vector<double>& row, int q) {
        for (int p = q; p <= 2 * m; p += 2) w.at((p - q) / 2, (p + q) / 2) = node(row, p);
    };

    for (int p = 0; p <= 2 * m; ++p) node(lower, p) = data_fine[p];
    store_row(lower, 0);

    Matrix rhs(n, n);
    for (int q = 0; q < 2 * m; ++q) {
        node(upper, q + 1).setZero();
        for (int p = q + 1; p < 2 * m; ++p) {
            const auto sw = node(lower, p);
            const auto east = node(lower, p + 1);
            const auto north = node(upper, p);
            const Matrix& vc = v_fine[p - q];
            rhs = east + north - sw;
            rhs.noalias() -= c * (vc * (east + north + sw));
            node(upper, p + 1) = corner[p - q].solve(rhs);
        }
        store_row(upper, q + 1);
        std::swap(lower, upper);
    }
    return w;
}

ResponseFunction response_from_kernel(const TransmutationKernel& w) {
    const SpaceTimeGrid& grid = w.grid();
    const int m = grid.steps();
    if (m < 3) throw GridTooCoarse("response_from_kernel: need M >= 3");
    if (w.extent() != TransmutationKernel::Extent::extended)
        throw InvalidInput("response_from_kernel: kernel must cover t up to 2T - x");
    const double inv2h = 1.0 / (2.0 * grid.h());
    const int last = 2 * m;
    std::vector<Matrix> r(last + 1);
    for (int j = 2; j <= last - 2; ++j) r[j] = (4.0 * w.at(1, j) - w.at(2, j)) * inv2h;
    r[1] = 3.0 * r[2] - 3.0 * r[3] + r[4];
    r[0] = 6.0 * r[2] - 8.0 * r[3] + 3.0 * r[4];
    r[last - 1] = 3.0 * r[last - 2] - 3.0 * r[last - 3] + r[last - 4];
    r[last] = 6.0 * r[last - 2] - 8.0 * r[last - 3] + 3.0 * r[last - 4];
    return ResponseFunction(MatrixFunction1D(grid, std::move(r)));
}

ResponseFunction forward_response(const MatrixFunction1D& potential) {
    return response_from_kernel(solve_goursat(potential));
}

WaveField evaluate_wavefield(const TransmutationKernel& w, const Control& f, double t) {
    const SpaceTimeGrid& grid = w.grid();
    if (!(f.grid() == grid)) throw InvalidInput("evaluate_wavefield: control grid differs from kernel grid");
    const int j = grid.node_index(t);
    if (j < 0 || j > grid.steps()) throw InvalidInput("evaluate_wavefield: t must be a node in [0, T]");
    const double h = grid.h();

    WaveField field{grid, j, std::vector<Vector>(grid.space_nodes(), Vector::Zero(grid.n()))};
    for (int i = 0; i <= j; ++i) {
        Vector u = f.at(j - i);
        for (int k = i; k <= j; ++k) {
            if (k == i && k == j) break;
            const double weight = (k == i || k == j) ? 0.5 * h : h;
            u.noalias() += weight * (w.at(i, k) * f.at(j - k));
        }
        field.samples[i] = std::move(u);
    }
    return field;
}

MatrixFunction1D dual_potential(const MatrixFunction1D& potential) { return potential.transposed(); }

}  // namespace bcinv
