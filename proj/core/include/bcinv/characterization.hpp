#pragma once

#include "bcinv/forward.hpp"
#include "bcinv/inversion.hpp"
#include "bcinv/operators.hpp"

#include <optional>
#include <vector>

namespace bcinv {

inline constexpr double default_sigma_threshold = 1e-8;

struct SweepRecord {
    int xi_steps;
    double xi;
    /// Extreme singular values of C^xi between the weighted spaces.
    double sigma_min;
    double sigma_max;
    double rcond;
    /// Hilbert-Schmidt norm of the integral part of C^xi.
    double kernel_norm;
    bool pass;
};

/// One record per swept xi, sorted by xi. Passes iff every record has
/// sigma_min > threshold * sigma_max.
struct CharacterizationReport {
    double threshold;
    int stride;
    std::vector<SweepRecord> records;
    bool pass;
    std::size_t argmin;

    const SweepRecord& weakest() const { return records.at(argmin); }
    std::optional<SweepRecord> first_failure() const;
};

CharacterizationReport sigma_min_sweep(const ResponseFunction& r, int stride = 1,
                                       double threshold = default_sigma_threshold);

struct FactorizationReport {
    /// ||C^T - Z_b* Z|| / ||C^T|| in the weighted operator norm.
    double relative_residual;
    /// max over xi of ||(I - X) Z X|| / ||Z|| (Frobenius over weighted blocks).
    double triangularity;
    double triangularity_dual;
};

/// Z = I^T W and Z_b = I^T W_b, with W and W_b from the amplitude path on r
/// and on r^T.
FactorizationReport check_factorization(const ResponseFunction& r);

struct IntertwiningReport {
    /// ||W P^xi - Y^xi W|| / ||W||.
    double relative_residual;
    /// The same with W_b and the dual projector.
    double dual_relative_residual;
};

IntertwiningReport check_intertwining(const ResponseFunction& r, int k);

struct ProjectorReport {
    /// ||P^2 - P|| / ||P||.
    double idempotency;
    /// ||C^T P - (P_b)* C^T|| / (||C^T|| ||P||).
    double intertwining;
    /// max(||P P' - P||, ||P' P - P||) / ||P|| with P' the projector at k_outer.
    double nesting;
    /// max ||P f - f|| / ||f|| over the basis controls supported in [T - xi, T].
    double range_defect;
};

ProjectorReport check_projector_identities(const ResponseFunction& r, int k, int k_outer,
                                           ProjectorForm form = ProjectorForm::compressed);

struct DualityReport {
    ResponseFunction response;
    ResponseFunction dual_response;
    /// max_j ||r_b(t_j) - r(t_j)^T||.
    double residual;
};

DualityReport check_duality(const MatrixFunction1D& potential);

struct SymmetricPdReport {
    double min_eigenvalue;
    double max_eigenvalue;
};

/// Spectrum bounds of the symmetric part of the weight-conjugated C^T.
SymmetricPdReport check_symmetric_pd(const ResponseFunction& r);

/// r(t) = a cos(omega t) I_N.
ResponseFunction cosine_response(const SpaceTimeGrid& grid, double amplitude, double frequency);

struct ScanOptions {
    double amplitude_min = 0.0;
    double amplitude_max = 40.0;
    double amplitude_step = 0.5;
    double frequency = 3.0;
    double threshold = default_sigma_threshold;
};

struct ScanResult {
    bool found = false;
    double amplitude = 0.0;
    /// The failing shortened operator.
    int xi_steps = 0;
    double xi = 0.0;
    double sigma_ratio = 0.0;
    /// sigma_min / sigma_max of C^T at the same amplitude.
    double sigma_ratio_full = 0.0;
};

/// Walks the family r_a = a cos(omega t) in amplitude steps, watching the sign
/// of det C^xi for every xi < T. When a sign changes between two steps, the
/// crossing is bisected down to adjacent doubles; the first crossing at which
/// C^xi fails the threshold while C^T passes is returned.
ScanResult scan_cosine_family(const SpaceTimeGrid& grid, const ScanOptions& options = {});

}  // namespace bcinv
