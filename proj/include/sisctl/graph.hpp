#pragma once

#include "sisctl/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sisctl {

/// Weighted directed interaction network. Entry (i, j) is the strength with
/// which agent j infects agent i. Flags are derived from the weights at
/// construction and never change afterwards.
class EpidemicNetwork {
public:
    /// Validates and stores `weights` unmodified. Throws NonSquare,
    /// NegativeEntry or NonFiniteEntry.
    explicit EpidemicNetwork(Matrix weights);

    Eigen::Index size() const { return weights_.rows(); }
    const Matrix& weights() const { return weights_; }

    bool irreducible() const { return irreducible_; }
    bool row_stochastic() const { return row_stochastic_; }
    bool strong_diagonal() const { return strong_diagonal_; }
    /// Row-stochastic with every self-weight above one half.
    bool row_stochastic_strong_diagonal() const { return row_stochastic_ && strong_diagonal_; }

private:
    Matrix weights_;
    bool irreducible_ = false;
    bool row_stochastic_ = false;
    bool strong_diagonal_ = false;
};

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr int kGeometricRetryBudget = 64;
inline constexpr double kDiagonalWeightMin = 0.55;
inline constexpr double kDiagonalWeightMax = 0.95;
/// dt * (beta + gamma) above this value triggers an advisory, not a failure.
inline constexpr double kStepSizeAdvisory = 0.05;

EpidemicNetwork build_network(Matrix weights);

/// Random geometric network in a square of side `area_side`. Agents within
/// `radius` of each other are neighbors in both directions. Each row is
/// row-stochastic with a self-weight drawn in (0.55, 0.95). Placements are
/// redrawn until the graph is connected, up to kGeometricRetryBudget times.
EpidemicNetwork generate_geometric_network(int n, double radius, double area_side, std::uint64_t seed);

/// Reachability from node 0 in the graph of nonzero entries and in its
/// transpose.
bool is_strongly_connected(const Matrix& matrix);
bool is_strongly_connected(const EpidemicNetwork& network);

struct AssumptionReport {
    bool a1_strongly_connected = false;
    bool a2_initial_in_range = false;
    bool a3_dt_small = false;
    double a3_dt_gamma = 0.0;           ///< dt * gamma, must be < 1
    double a3_dt_beta_rho = 0.0;        ///< dt * beta * rho(A), must be < 1
    double a3_dt_rate_sum = 0.0;        ///< dt * (beta + gamma)
    bool a3_advisory = false;           ///< dt * (beta + gamma) > kStepSizeAdvisory
    bool a4_row_stochastic_diag = false;
    std::vector<std::string> messages;

    bool all() const { return a1_strongly_connected && a2_initial_in_range && a3_dt_small && a4_row_stochastic_diag; }
};

AssumptionReport validate_assumptions(const EpidemicNetwork& network, const EpidemicParams& params, const Vector& x0);

/// Comma-separated rows, no header. Flags are re-derived on read.
EpidemicNetwork read_network_csv(const std::filesystem::path& path);
EpidemicNetwork parse_network_csv(const std::string& text);
void write_network_csv(const EpidemicNetwork& network, const std::filesystem::path& path);

}  // namespace sisctl
