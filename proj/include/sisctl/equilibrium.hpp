#pragma once

#include "sisctl/core.hpp"
#include "sisctl/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sisctl {

struct ClosedFormEquilibrium {
    double value = 0.0;
    /// Set when r0 <= 1: the value is then <= 0 and not an endemic level.
    bool regime_mismatch = false;
};

/// (3 r0 - sqrt(r0^2 + 8 r0)) / (4 r0), evaluated in the cancellation-free
/// form 2 (r0 - 1) / (3 r0 + sqrt(r0^2 + 8 r0)). Throws NonPositiveR0.
ClosedFormEquilibrium endemic_closed_form(double r0);

enum class EquilibriumMethod { ClosedForm, FixedPoint };

std::string_view to_string(EquilibriumMethod method);

struct EquilibriumResult {
    double x_bar = 0.0;  ///< mean of vector_form
    Vector vector_form;
    EquilibriumMethod method = EquilibriumMethod::FixedPoint;
    int iterations = 0;
    double residual = 0.0;  ///< ||x - H(x)^-1 r0 A x||_inf, recomputed at the limit
    double damping = 1.0;   ///< damping in effect when the iteration stopped
};

struct FixedPointOptions {
    double damping = 1.0;
    double tol = 1e-12;
    int max_iter = 100000;
};

/// Diagonal of H(x) = I + diag(3 r0 A x) - diag(2 r0 A x) diag(x).
Vector h_diagonal(const EpidemicNetwork& network, double r0, const Vector& x);

/// H(x)^-1 r0 A x; H is diagonal so the inverse is entrywise.
Vector fixed_point_map(const EpidemicNetwork& network, double r0, const Vector& x);

double fixed_point_residual(const EpidemicNetwork& network, double r0, const Vector& x);

/// Damped iteration x <- (1 - d) x + d H(x)^-1 r0 A x until the update is
/// below `tol` in the max norm. When consecutive updates keep alternating in
/// sign the damping drops to 0.5 and then 0.25.
///
/// Requires a strongly connected, row-stochastic, strong-diagonal network,
/// r0 > 1 and x_init in (0, 1/2)^n; otherwise throws AssumptionViolation.
/// Throws NoConvergence after max_iter iterations.
EquilibriumResult endemic_fixed_point(const EpidemicNetwork& network, double r0, const Vector& x_init,
                                      const FixedPointOptions& options = {});

inline constexpr double kProbeAgreement = 1e-7;

struct ProbeReport {
    std::size_t trials = 0;
    double max_pairwise_distance = 0.0;
    bool agreed = false;
    Vector limit;  ///< limit of the first trial
    std::vector<Vector> limits;
};

/// Runs the fixed-point solver from `trials` random starts in (0, 1/2)^n and
/// compares the limits pairwise. A NoConvergence error carries the trial index.
ProbeReport uniqueness_probe(const EpidemicNetwork& network, double r0, std::size_t trials, std::uint64_t seed,
                             const FixedPointOptions& options = {});

}  // namespace sisctl
