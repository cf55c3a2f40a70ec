#pragma once

#include "sisctl/core.hpp"
#include "sisctl/graph.hpp"

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace sisctl {

enum class PolicyKind { None, LinearDistancing, CustomTable };

std::string_view to_string(PolicyKind kind);

/// Piecewise-linear map from an agent's infection level to its gain.
/// Breakpoints must be strictly increasing; values outside the table are held
/// at the end gains.
struct GainTable {
    std::vector<double> states;
    std::vector<double> gains;

    double evaluate(double x) const;
};

/// Infection reduction policy. Evaluated gains are always clamped to [0, 1].
class ControlPolicy {
public:
    static ControlPolicy none();
    /// b_i = max(0, 1 - 2 x_i)
    static ControlPolicy linear_distancing();
    /// One table per agent, or a single table shared by all agents.
    static ControlPolicy custom_table(std::vector<GainTable> tables);

    PolicyKind kind() const { return kind_; }
    const std::vector<GainTable>& tables() const { return tables_; }

    Vector gain(const Vector& x) const;

private:
    explicit ControlPolicy(PolicyKind kind) : kind_(kind) {}

    PolicyKind kind_;
    std::vector<GainTable> tables_;
};

Vector control_gain(const ControlPolicy& policy, const Vector& x);

/// Uncontrolled Euler step: x_i + dt [beta (1 - x_i) (A x)_i - gamma x_i].
/// No clamping is applied.
Vector step_basic(const Vector& x, const EpidemicNetwork& network, const EpidemicParams& params);

/// Controlled Euler step: x_i + dt [b_i(x) beta (1 - x_i) (A x)_i - gamma x_i].
Vector step_controlled(const Vector& x, const EpidemicNetwork& network, const EpidemicParams& params,
                       const ControlPolicy& policy);

/// M = I + dt beta A - dt gamma I
Matrix system_matrix(const EpidemicNetwork& network, const EpidemicParams& params);

struct SystemMatrices {
    Matrix m;      ///< I + dt beta A - dt gamma I
    Matrix b;      ///< dt beta diag(x) (3I - 2 diag(x))
    Matrix m_hat;  ///< M - B A; M_hat x reproduces the distancing step
};

SystemMatrices build_system_matrices(const EpidemicNetwork& network, const EpidemicParams& params, const Vector& x);

enum class StopReason { Converged, Horizon };

std::string_view to_string(StopReason reason);

/// Time-indexed infection states x(0), ..., x(K) together with the inputs
/// that produced them. States are stored contiguously.
class Trajectory {
public:
    Trajectory(EpidemicNetwork network, EpidemicParams params, ControlPolicy policy);

    /// Assemble a trajectory from given states (for replay or synthetic checks).
    static Trajectory from_states(EpidemicNetwork network, EpidemicParams params, ControlPolicy policy,
                                  const std::vector<Vector>& states);

    void push(const Vector& state);
    void reserve(std::size_t states);

    std::size_t length() const { return length_; }
    std::size_t steps() const { return length_ == 0 ? 0 : length_ - 1; }
    Eigen::Index agents() const { return network_->size(); }

    Eigen::Map<const Vector> state(std::size_t k) const;
    Eigen::Map<const Vector> final_state() const { return state(length_ - 1); }

    const EpidemicNetwork& network() const { return *network_; }
    const EpidemicParams& params() const { return params_; }
    const ControlPolicy& policy() const { return policy_; }

    StopReason stop_reason() const { return stop_reason_; }
    void set_stop_reason(StopReason reason) { stop_reason_ = reason; }

    /// First step whose state left [0, 1]^n, if any.
    std::optional<std::size_t> first_exit_step() const { return first_exit_; }

private:
    std::shared_ptr<const EpidemicNetwork> network_;
    EpidemicParams params_;
    ControlPolicy policy_;
    std::vector<double> data_;
    std::size_t length_ = 0;
    StopReason stop_reason_ = StopReason::Horizon;
    std::optional<std::size_t> first_exit_;
};

inline constexpr std::size_t kDefaultHorizon = 200000;
inline constexpr double kDefaultStopTolerance = 1e-10;

struct SimulationOptions {
    std::size_t horizon = kDefaultHorizon;
    double stop_tol = kDefaultStopTolerance;
};

/// Iterates the controlled step from x0. Stops after `horizon` steps or as
/// soon as max_i |x_i(k+1) - x_i(k)| < stop_tol. Throws AssumptionViolation
/// when the graph is not strongly connected or dt is not small enough.
Trajectory simulate(const Vector& x0, const EpidemicNetwork& network, const EpidemicParams& params,
                    const ControlPolicy& policy, const SimulationOptions& options = {});

/// Header `k,x_1,...,x_n`, one row per step, 17 significant digits.
void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path);

}  // namespace sisctl
