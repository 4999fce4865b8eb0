#pragma once

#include "bcinv/forward.hpp"
#include "bcinv/operators.hpp"

#include <string_view>
#include <vector>

namespace bcinv {

enum class Method { amplitude, resolvent };

std::string_view to_string(Method method);
/// Accepts "amplitude" or "resolvent"; throws InvalidInput otherwise.
Method parse_method(std::string_view name);

/// l^x(0, eta_j), j = 0..k, the first row of the resolvent kernel of C^x.
struct ResolventRow {
    int x_index;
    std::vector<Matrix> samples;
};

struct XiDiagnostic {
    int xi_steps;
    double xi;
    double rcond;
};

/// V^ sampled on the (possibly subsampled) diagonal. With stride s the grid
/// has M / s steps of size s h.
struct RecoveredPotential {
    MatrixFunction1D values;
    Method method;
    int stride;
    std::vector<XiDiagnostic> diagnostics;

    const SpaceTimeGrid& grid() const noexcept { return values.grid(); }
};

struct AmplitudeRecovery {
    /// W^T as a map F^T -> H^T (rows: space nodes, columns: control nodes).
    ControlSpaceOperator control_operator;
    /// w(x_i, s_j) for x_i <= s_j <= T.
    TransmutationKernel kernel;
    std::vector<XiDiagnostic> diagnostics;
};

/// Row k of W^T is block row 0 of [C^xi]^{-1} e* C^T, xi = k h: the value of
/// the projected basis controls at the right-limit node T - xi. Row 0 is the
/// trace f(T). The kernel is un-scaled by the column weights of the integral
/// over s in [x, T] (h / 2 at s = x and s = T). Row M carries no kernel
/// information (the integral is empty); w(T, T) is extrapolated from the
/// four previous diagonal nodes and enters the assembled operator through the
/// half-cell corner weight h / 4.
AmplitudeRecovery recover_W_amplitude(const ResponseFunction& r,
                                      double rcond_threshold = default_rcond_threshold);

/// Solves (C^x)^T z = e_0 for the first row of [C^x]^{-1} = I - L.
ResolventRow resolvent_row(const ResponseFunction& r, int k, double rcond_threshold = default_rcond_threshold);

/// w(x, s) = C^T(T - x, T - s) - int_0^x l^x(0, eta) C^T(eta + T - x, T - s) d eta.
TransmutationKernel recover_kernel_resolvent(const ResponseFunction& r,
                                             double rcond_threshold = default_rcond_threshold);

/// V^(x_i) = -2 d/dx w(x_i, x_i).
MatrixFunction1D potential_from_kernel(const TransmutationKernel& w);

struct InversionOptions {
    Method method = Method::resolvent;
    int stride = 1;
    double rcond_threshold = default_rcond_threshold;
};

/// Full pipeline. Sweeps xi = s h, 2 s h, ..., T; the stride must divide M
/// and leave at least 4 coarse steps. Throws CharacterizationFailure naming
/// the smallest xi whose C^xi is numerically singular.
RecoveredPotential invert_response(const ResponseFunction& r, const InversionOptions& options = {});

}  // namespace bcinv
