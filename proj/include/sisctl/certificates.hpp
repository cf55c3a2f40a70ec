#pragma once

#include "sisctl/core.hpp"
#include "sisctl/dynamics.hpp"
#include "sisctl/graph.hpp"
#include "sisctl/spectral.hpp"

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sisctl {

inline constexpr int kLyapunovBudget = 10000;
/// A non-strict certificate may have lambda_max up to this value.
inline constexpr double kNonStrictSlack = 1e-12;
inline constexpr double kBbarSlack = 1e-15;
inline constexpr double kDRowSumTolerance = 1e-12;
inline constexpr double kDRadiusTolerance = 1e-8;
/// Allowed roundoff when comparing the recorded error y(k) against the
/// comparison state z(k).
inline constexpr double kSandwichTolerance = 1e-12;

/// Positive diagonal P with M^T P M - P negative definite (strict) or
/// negative semidefinite (rho(M) = 1).
struct LyapunovCertificate {
    Vector p_diag;
    double margin = 0.0;  ///< lambda_max(M^T P M - P)
    bool strict = false;
    double rho = 0.0;     ///< spectral radius of M
    int evaluations = 0;  ///< margin evaluations spent, 1 when the Perron candidate works
};

/// Largest eigenvalue of a symmetric matrix.
double lambda_max_symmetric(const Matrix& symmetric);

/// lambda_max(M^T diag(p) M - diag(p)).
double lyapunov_margin(const Matrix& m, const Vector& p_diag);

/// Starts from p_i = u_i / w_i with u, w the left and right Perron vectors of
/// m, then refines log p by coordinate descent on the margin if needed.
///
/// rho(m) < 1 - tol gives a strict certificate, |rho(m) - 1| <= tol a
/// non-strict one. Throws SpectralRadiusExceedsOne when rho(m) > 1 + tol,
/// Reducible for a reducible m, SearchExhausted when the budget runs out.
LyapunovCertificate find_diagonal_lyapunov(const Matrix& m, double tol = kRegimeTieTolerance);

struct DescentReport {
    std::size_t steps_checked = 0;
    bool strictly_decreasing = true;
    /// Smallest V(k) - V(k+1) over checked steps; empty when nothing was checked.
    std::optional<double> min_decrement;
    std::optional<std::size_t> first_failure;
    std::vector<double> values;  ///< V(k) = x(k)^T P x(k)
};

/// Checks V(k+1) < V(k) at every step with x(k) != 0.
DescentReport verify_dfe_descent(const Trajectory& trajectory, const Matrix& m, const LyapunovCertificate& certificate);

/// Diagonal of -2 dt beta I + B(x): dt beta (-2 x_i^2 + 3 x_i - 2).
Vector bbar_diagonal(const Vector& x, const EpidemicParams& params);

/// True iff every bbar entry is <= -(7/8) dt beta (+1e-15).
bool bbar_bound_check(const Vector& x, const EpidemicParams& params);

/// Per-step record of the comparison matrix Phi(k) against D.
struct PhiCheck {
    std::size_t k = 0;
    bool phi_nonnegative = true;
    double min_phi_entry = 0.0;
    /// [Phi - D]_ij < 0 on every edge a_ij > 0, i != j, with x_i(k) > 0.
    bool offdiag_negative_on_edges = true;
    /// [Phi - D]_ii < 0 wherever x_i(k) > 0.
    bool diag_negative_where_infected = true;
    double max_checked_difference = 0.0;  ///< largest checked entry of Phi - D
};

struct EndemicAudit {
    double x_bar = 0.0;
    Matrix d_matrix;
    Vector v;  ///< left Perron vector of D, unit sum
    double rho_d = 0.0;
    double d_row_sum_error = 0.0;  ///< ||D 1 - 1||_inf
    bool v_positive = false;

    std::vector<PhiCheck> phi_checks;
    std::vector<double> lyap_sequence;  ///< V(k) = v^T z(k), k = 0..K
    bool phi_nonnegative = true;
    bool phi_minus_d_signs_ok = true;

    bool descent_ok = true;
    std::optional<std::size_t> first_descent_failure;
    std::optional<double> min_descent_margin;

    bool sandwich_ok = true;
    std::optional<std::size_t> first_sandwich_failure;

    std::vector<std::string> warnings;

    bool d_row_sums_ok() const { return d_row_sum_error <= kDRowSumTolerance; }
    bool rho_d_ok() const { return std::abs(rho_d - 1.0) <= kDRadiusTolerance; }
    bool passed() const { return d_row_sums_ok() && rho_d_ok() && v_positive && descent_ok && sandwich_ok; }
};

/// Replays the endemic stability argument on a recorded trajectory: builds
/// D = I - dt gamma/((1-2x)(1-x)) I + dt beta A and its left Perron vector v,
/// iterates z(k+1) = Phi(k) z(k) from z(0) = |x(0) - x_bar 1|, and checks
/// -z <= x - x_bar 1 <= z and the decrease of v^T z.
///
/// Requires a strongly connected row-stochastic strong-diagonal network,
/// r0 > 1 and x_bar in (0, 1/2); throws AssumptionViolation otherwise.
EndemicAudit build_endemic_audit(const Trajectory& trajectory, const EpidemicNetwork& network,
                                 const EpidemicParams& params, double x_bar);

/// Header `k,V,descent_margin,phi_nonneg`; the last row has an empty margin.
void write_audit_log_csv(const EndemicAudit& audit, const std::filesystem::path& path);

struct StateIndex {
    std::size_t k = 0;
    Eigen::Index agent = 0;
};

struct BoundReport {
    double max_state = 0.0;
    StateIndex argmax;
    bool bound_holds = true;
    std::size_t violation_count = 0;
    std::vector<StateIndex> violations;  ///< first kMaxListedViolations

    bool cap_checked = false;   ///< r0 > 1
    double cap_threshold = 0.0; ///< (1 - 1/r0) / 2
    std::size_t cap_checks = 0;
    std::size_t cap_violation_count = 0;
    std::vector<StateIndex> cap_violations;
    bool cap_holds = true;
};

inline constexpr std::size_t kMaxListedViolations = 1000;

/// Max over all agents and steps, and the monotone cap: for r0 > 1, whenever
/// x_i(k) > (1 - 1/r0)/2 then x_i(k+1) < max_j x_j(k).
BoundReport verify_half_bound(const Trajectory& trajectory, const EpidemicParams& params);

}  // namespace sisctl
