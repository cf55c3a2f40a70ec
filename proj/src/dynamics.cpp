#include "sisctl/dynamics.hpp"

#include "sisctl/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace sisctl {

std::string_view to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::None: return "none";
    case PolicyKind::LinearDistancing: return "linear_distancing";
    case PolicyKind::CustomTable: return "custom_table";
    }
    return "unknown";
}

std::string_view to_string(StopReason reason)
{
    return reason == StopReason::Converged ? "converged" : "horizon";
}

double GainTable::evaluate(double x) const
{
    if (x <= states.front())
        return gains.front();
    if (x >= states.back())
        return gains.back();
    const auto upper = std::upper_bound(states.begin(), states.end(), x);
    const auto hi = static_cast<std::size_t>(upper - states.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - states[lo]) / (states[hi] - states[lo]);
    return gains[lo] + t * (gains[hi] - gains[lo]);
}

ControlPolicy ControlPolicy::none()
{
    return ControlPolicy(PolicyKind::None);
}

ControlPolicy ControlPolicy::linear_distancing()
{
    return ControlPolicy(PolicyKind::LinearDistancing);
}

ControlPolicy ControlPolicy::custom_table(std::vector<GainTable> tables)
{
    if (tables.empty())
        throw Error(ErrorKind::ConfigParse, "custom policy needs at least one gain table");
    for (const auto& t : tables) {
        if (t.states.empty() || t.states.size() != t.gains.size())
            throw Error(ErrorKind::ConfigParse, "gain table needs matching, nonempty state and gain lists");
        for (std::size_t i = 1; i < t.states.size(); ++i)
            if (!(t.states[i] > t.states[i - 1]))
                throw Error(ErrorKind::ConfigParse, "gain table states must be strictly increasing");
        for (std::size_t i = 0; i < t.states.size(); ++i)
            if (!std::isfinite(t.states[i]) || !std::isfinite(t.gains[i]))
                throw Error(ErrorKind::ConfigParse, "gain table entries must be finite");
    }
    ControlPolicy p(PolicyKind::CustomTable);
    p.tables_ = std::move(tables);
    return p;
}

Vector ControlPolicy::gain(const Vector& x) const
{
    switch (kind_) {
    case PolicyKind::None:
        return Vector::Ones(x.size());
    case PolicyKind::LinearDistancing:
        return (1.0 - 2.0 * x.array()).max(0.0).min(1.0).matrix();
    case PolicyKind::CustomTable: {
        if (tables_.size() != 1 && static_cast<Eigen::Index>(tables_.size()) != x.size())
            throw Error(ErrorKind::DimensionMismatch,
                        "custom policy has " + std::to_string(tables_.size()) + " tables for " +
                            std::to_string(x.size()) + " agents");
        Vector b(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const auto& table = tables_.size() == 1 ? tables_.front() : tables_[static_cast<std::size_t>(i)];
            b(i) = std::clamp(table.evaluate(x(i)), 0.0, 1.0);
        }
        return b;
    }
    }
    return Vector::Ones(x.size());
}

Vector control_gain(const ControlPolicy& policy, const Vector& x)
{
    return policy.gain(x);
}

Vector step_basic(const Vector& x, const EpidemicNetwork& network, const EpidemicParams& params)
{
    require_same_size(network.size(), x.size(), "state");
    const Vector pressure = network.weights() * x;
    return (x.array() + params.dt * (params.beta * (1.0 - x.array()) * pressure.array() - params.gamma * x.array()))
        .matrix();
}

Vector step_controlled(const Vector& x, const EpidemicNetwork& network, const EpidemicParams& params,
                       const ControlPolicy& policy)
{
    require_same_size(network.size(), x.size(), "state");
    const Vector b = policy.gain(x);
    const Vector pressure = network.weights() * x;
    return (x.array() +
            params.dt * (b.array() * params.beta * (1.0 - x.array()) * pressure.array() - params.gamma * x.array()))
        .matrix();
}

Matrix system_matrix(const EpidemicNetwork& network, const EpidemicParams& params)
{
    Matrix m = params.dt * params.beta * network.weights();
    m.diagonal().array() += 1.0 - params.dt * params.gamma;
    return m;
}

SystemMatrices build_system_matrices(const EpidemicNetwork& network, const EpidemicParams& params, const Vector& x)
{
    require_same_size(network.size(), x.size(), "state");
    SystemMatrices out;
    out.m = system_matrix(network, params);
    const Vector b_diag = (params.dt * params.beta * x.array() * (3.0 - 2.0 * x.array())).matrix();
    out.b = b_diag.asDiagonal();
    out.m_hat = out.m - b_diag.asDiagonal() * network.weights();
    return out;
}

Trajectory::Trajectory(EpidemicNetwork network, EpidemicParams params, ControlPolicy policy)
    : network_(std::make_shared<const EpidemicNetwork>(std::move(network))),
      params_(params),
      policy_(std::move(policy))
{
}

Trajectory Trajectory::from_states(EpidemicNetwork network, EpidemicParams params, ControlPolicy policy,
                                   const std::vector<Vector>& states)
{
    Trajectory t(std::move(network), params, std::move(policy));
    t.reserve(states.size());
    for (const auto& s : states)
        t.push(s);
    return t;
}

void Trajectory::reserve(std::size_t states)
{
    data_.reserve(states * static_cast<std::size_t>(agents()));
}

void Trajectory::push(const Vector& state)
{
    require_same_size(agents(), state.size(), "trajectory state");
    if (!first_exit_ && ((state.array() < 0.0).any() || (state.array() > 1.0).any()))
        first_exit_ = length_;
    data_.insert(data_.end(), state.data(), state.data() + state.size());
    ++length_;
}

Eigen::Map<const Vector> Trajectory::state(std::size_t k) const
{
    if (k >= length_)
        throw Error(ErrorKind::DimensionMismatch,
                    "step " + std::to_string(k) + " outside trajectory of length " + std::to_string(length_));
    return Eigen::Map<const Vector>(data_.data() + k * static_cast<std::size_t>(agents()), agents());
}

Trajectory simulate(const Vector& x0, const EpidemicNetwork& network, const EpidemicParams& params,
                    const ControlPolicy& policy, const SimulationOptions& options)
{
    params.validate();
    const AssumptionReport report = validate_assumptions(network, params, x0);
    if (!report.a1_strongly_connected || !report.a3_dt_small) {
        std::string msg;
        for (const auto& m : report.messages)
            if (m.rfind("A1", 0) == 0 || m.rfind("A3:", 0) == 0)
                msg += (msg.empty() ? "" : "; ") + m;
        throw Error(ErrorKind::AssumptionViolation, msg);
    }

    Trajectory traj(network, params, policy);
    traj.reserve(std::min<std::size_t>(options.horizon, 4096) + 1);
    traj.push(x0);

    Vector x = x0;
    for (std::size_t k = 0; k < options.horizon; ++k) {
        Vector next = step_controlled(x, traj.network(), params, policy);
        const double change = (next - x).cwiseAbs().maxCoeff();
        traj.push(next);
        x.swap(next);
        if (change < options.stop_tol) {
            traj.set_stop_reason(StopReason::Converged);
            return traj;
        }
    }
    traj.set_stop_reason(StopReason::Horizon);
    return traj;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
    out << 'k';
    for (Eigen::Index i = 0; i < trajectory.agents(); ++i)
        out << ",x_" << (i + 1);
    out << '\n';
    for (std::size_t k = 0; k < trajectory.length(); ++k) {
        out << k;
        const auto s = trajectory.state(k);
        for (Eigen::Index i = 0; i < s.size(); ++i)
            out << ',' << format_g17(s(i));
        out << '\n';
    }
    if (!out)
        throw Error(ErrorKind::IoFailure, "write to '" + path.string() + "' failed");
}

}  // namespace sisctl
