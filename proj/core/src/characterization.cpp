#include "bcinv/characterization.hpp"

#include "bcinv/error.hpp"
#include "bcinv/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace bcinv {

namespace {

Vector expand(const Vector& per_node, int n) {
    Vector out(per_node.size() * n);
    for (Eigen::Index j = 0; j < per_node.size(); ++j) out.segment(j * n, n).setConstant(per_node[j]);
    return out;
}

Matrix conjugate(const Matrix& a, const Vector& w_in, const Vector& w_out, int n) {
    return expand(w_out, n).cwiseSqrt().asDiagonal() * a * expand(w_in, n).cwiseSqrt().cwiseInverse().asDiagonal();
}

double norm_of(const ControlSpaceOperator& a) { return a.weighted_norm(); }

ControlSpaceOperator difference(const ControlSpaceOperator& a, const ControlSpaceOperator& b) {
    return {a.grid(), a.xi_steps(), a.matrix() - b.matrix(), a.weights_in(), a.weights_out()};
}

double relative(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

// Largest weighted block of Z that maps F^{T,xi} outside itself, over all xi.
double triangularity_defect(const ControlSpaceOperator& z) {
    const SpaceTimeGrid& grid = z.grid();
    const int n = grid.n();
    const int m = grid.steps();
    const Matrix b = conjugate(z.matrix(), z.weights_in(), z.weights_out(), n);
    double worst = 0.0;
    for (int k = 1; k < m; ++k) {
        const int head = (m - k) * n;
        worst = std::max(worst, b.block(0, head, head, b.cols() - head).norm());
    }
    return relative(worst, norm_of(z));
}

int sign_of_determinant(const Matrix& a) {
    Eigen::PartialPivLU<Matrix> lu(a);
    int sign = static_cast<int>(lu.permutationP().determinant());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double u = lu.matrixLU()(i, i);
        if (u == 0.0) return 0;
        if (u < 0.0) sign = -sign;
    }
    return sign;
}

double sigma_ratio(const ControlSpaceOperator& a) {
    const SigmaExtremes s = sigma_extremes(a);
    return s.sigma_max > 0.0 ? s.sigma_min / s.sigma_max : 0.0;
}

}  // namespace

std::optional<SweepRecord> CharacterizationReport::first_failure() const {
    for (const auto& rec : records)
        if (!rec.pass) return rec;
    return std::nullopt;
}

CharacterizationReport sigma_min_sweep(const ResponseFunction& r, int stride, double threshold) {
    const SpaceTimeGrid& grid = r.grid();
    const int m = grid.steps();
    if (stride < 1 || m % stride != 0)
        throw InvalidInput("sigma_min_sweep: stride " + std::to_string(stride) + " does not divide M");
    const int count = m / stride;
    const int n = grid.n();
    std::vector<SweepRecord> records(count);
    parallel_for(count, [&](int idx) {
        const int k = (idx + 1) * stride;
        const ControlSpaceOperator c = build_connecting(r, k);
        const SigmaExtremes s = sigma_extremes(c);
        const Eigen::PartialPivLU<Matrix> lu(c.matrix());
        Matrix integral_part = c.matrix();
        integral_part.diagonal().array() -= 1.0;
        const double kernel_norm = conjugate(integral_part, c.weights_in(), c.weights_out(), n).norm();
        records[idx] = {k, grid.x(k), s.sigma_min, s.sigma_max, lu.rcond(), kernel_norm,
                        s.sigma_min > threshold * s.sigma_max};
    });
    CharacterizationReport report{threshold, stride, std::move(records), true, 0};
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        report.pass = report.pass && report.records[i].pass;
        if (report.records[i].sigma_min < report.records[report.argmin].sigma_min) report.argmin = i;
    }
    return report;
}

FactorizationReport check_factorization(const ResponseFunction& r) {
    const ControlSpaceOperator flip = flip_isometry(r.grid());
    const ControlSpaceOperator z = flip * recover_W_amplitude(r).control_operator;
    const ControlSpaceOperator z_dual = flip * recover_W_amplitude(r.transposed()).control_operator;
    const ControlSpaceOperator c_full = build_connecting(r, r.grid().steps());
    const ControlSpaceOperator product = weighted_adjoint(z_dual) * z;
    return {relative(norm_of(difference(c_full, product)), norm_of(c_full)), triangularity_defect(z),
            triangularity_defect(z_dual)};
}

IntertwiningReport check_intertwining(const ResponseFunction& r, int k) {
    const SpaceTimeGrid& grid = r.grid();
    const ControlSpaceOperator y = space_cutoff(grid, k);
    auto residual = [&](const ControlSpaceOperator& w, const ControlSpaceOperator& p) {
        return relative(norm_of(difference(w * p, y * w)), norm_of(w));
    };
    const ControlSpaceOperator w = recover_W_amplitude(r).control_operator;
    const ControlSpaceOperator w_dual = recover_W_amplitude(r.transposed()).control_operator;
    return {residual(w, build_projector(r, k)), residual(w_dual, build_dual_projector(r, k))};
}

ProjectorReport check_projector_identities(const ResponseFunction& r, int k, int k_outer, ProjectorForm form) {
    const SpaceTimeGrid& grid = r.grid();
    if (k_outer < k) throw InvalidInput("check_projector_identities: need k <= k_outer");
    const ControlSpaceOperator p = build_projector(r, k, form);
    const ControlSpaceOperator p_outer = build_projector(r, k_outer, form);
    const ControlSpaceOperator p_dual = build_dual_projector(r, k, form);
    const ControlSpaceOperator c_full = build_connecting(r, grid.steps());
    const double p_norm = norm_of(p);

    ProjectorReport report{};
    report.idempotency = relative(norm_of(difference(p * p, p)), p_norm);
    report.intertwining =
        relative(norm_of(difference(c_full * p, weighted_adjoint(p_dual) * c_full)), norm_of(c_full) * p_norm);
    report.nesting = relative(
        std::max(norm_of(difference(p * p_outer, p)), norm_of(difference(p_outer * p, p))), p_norm);

    const int n = grid.n();
    const int first = (grid.steps() - k) * n;
    double range = 0.0;
    for (int col = first; col < p.matrix().cols(); ++col) {
        Vector e = Vector::Zero(p.matrix().cols());
        e[col] = 1.0;
        range = std::max(range, (p.matrix().col(col) - e).norm());
    }
    report.range_defect = range;
    return report;
}

DualityReport check_duality(const MatrixFunction1D& potential) {
    ResponseFunction r = forward_response(potential);
    ResponseFunction r_dual = forward_response(dual_potential(potential));
    double residual = 0.0;
    for (int j = 0; j < r.size(); ++j)
        residual = std::max(residual, (r_dual[j] - r[j].transpose()).cwiseAbs().maxCoeff());
    return {std::move(r), std::move(r_dual), residual};
}

SymmetricPdReport check_symmetric_pd(const ResponseFunction& r) {
    const ControlSpaceOperator c = build_connecting(r, r.grid().steps());
    const Matrix b = conjugate(c.matrix(), c.weights_in(), c.weights_out(), r.grid().n());
    const Matrix sym = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    return {ev[0], ev[ev.size() - 1]};
}

ResponseFunction cosine_response(const SpaceTimeGrid& grid, double amplitude, double frequency) {
    std::vector<Matrix> samples;
    samples.reserve(grid.time_nodes());
    for (int j = 0; j < grid.time_nodes(); ++j)
        samples.emplace_back(amplitude * std::cos(frequency * grid.t(j)) * Matrix::Identity(grid.n(), grid.n()));
    return ResponseFunction(MatrixFunction1D(grid, std::move(samples)));
}

ScanResult scan_cosine_family(const SpaceTimeGrid& grid, const ScanOptions& options) {
    const int m = grid.steps();
    if (!(options.amplitude_step > 0.0)) throw InvalidInput("scan: amplitude step must be positive");
    auto signs_at = [&](double a) {
        const ResponseFunction r = cosine_response(grid, a, options.frequency);
        std::vector<int> signs(m);
        parallel_for(m - 1, [&](int idx) { signs[idx] = sign_of_determinant(build_connecting(r, idx + 1).matrix()); });
        return signs;
    };
    auto sign_for = [&](double a, int k) {
        return sign_of_determinant(build_connecting(cosine_response(grid, a, options.frequency), k).matrix());
    };

    const int steps =
        static_cast<int>(std::floor((options.amplitude_max - options.amplitude_min) / options.amplitude_step + 1e-9));
    std::vector<int> previous = signs_at(options.amplitude_min);
    for (int step = 1; step <= steps; ++step) {
        const double a_prev = options.amplitude_min + (step - 1) * options.amplitude_step;
        const double a_next = options.amplitude_min + step * options.amplitude_step;
        std::vector<int> current = signs_at(a_next);
        for (int k = 1; k < m; ++k) {
            if (previous[k - 1] == current[k - 1]) continue;
            double lo = a_prev;
            double hi = a_next;
            const int lo_sign = previous[k - 1];
            while (true) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const int s = sign_for(mid, k);
                if (s == 0) {
                    lo = hi = mid;
                    break;
                }
                (s == lo_sign ? lo : hi) = mid;
            }
            const double ratio_lo = sigma_ratio(build_connecting(cosine_response(grid, lo, options.frequency), k));
            const double ratio_hi = sigma_ratio(build_connecting(cosine_response(grid, hi, options.frequency), k));
            const double a = ratio_lo <= ratio_hi ? lo : hi;
            const double ratio = std::min(ratio_lo, ratio_hi);
            const double ratio_full = sigma_ratio(build_connecting(cosine_response(grid, a, options.frequency), m));
            if (ratio <= options.threshold && ratio_full > options.threshold)
                return {true, a, k, grid.x(k), ratio, ratio_full};
        }
        previous = std::move(current);
    }
    return {};
}

}  // namespace bcinv
