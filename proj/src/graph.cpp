#include "sisctl/graph.hpp"

#include "sisctl/io.hpp"
#include "sisctl/random.hpp"
#include "sisctl/spectral.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace sisctl {

namespace {

std::vector<bool> reachable_from_zero(const Matrix& m, bool transpose)
{
    const Eigen::Index n = m.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    if (n == 0)
        return seen;
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const Eigen::Index u = stack.back();
        stack.pop_back();
        for (Eigen::Index v = 0; v < n; ++v) {
            const double w = transpose ? m(v, u) : m(u, v);
            if (w != 0.0 && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

bool all_true(const std::vector<bool>& v)
{
    for (bool b : v)
        if (!b)
            return false;
    return true;
}

}  // namespace

EpidemicNetwork::EpidemicNetwork(Matrix weights) : weights_(std::move(weights))
{
    if (weights_.rows() != weights_.cols() || weights_.rows() == 0)
        throw Error(ErrorKind::NonSquare, "weight matrix is " + std::to_string(weights_.rows()) + "x" +
                                              std::to_string(weights_.cols()));
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
        for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
            const double a = weights_(i, j);
            if (!std::isfinite(a))
                throw Error(ErrorKind::NonFiniteEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
            if (a < 0.0)
                throw Error(ErrorKind::NegativeEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
        }
    }

    irreducible_ = is_strongly_connected(weights_);

    row_stochastic_ = true;
    strong_diagonal_ = true;
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
        if (std::abs(weights_.row(i).sum() - 1.0) > kRowSumTolerance)
            row_stochastic_ = false;
        if (!(weights_(i, i) > 0.5))
            strong_diagonal_ = false;
    }
}

EpidemicNetwork build_network(Matrix weights)
{
    return EpidemicNetwork(std::move(weights));
}

bool is_strongly_connected(const Matrix& matrix)
{
    if (matrix.rows() != matrix.cols())
        throw Error(ErrorKind::NonSquare, "connectivity needs a square matrix");
    return all_true(reachable_from_zero(matrix, false)) && all_true(reachable_from_zero(matrix, true));
}

bool is_strongly_connected(const EpidemicNetwork& network)
{
    return is_strongly_connected(network.weights());
}

EpidemicNetwork generate_geometric_network(int n, double radius, double area_side, std::uint64_t seed)
{
    if (n < 1)
        throw Error(ErrorKind::AssumptionViolation, "agent count must be >= 1");
    if (!(radius >= 0.0) || !std::isfinite(radius) || !(area_side > 0.0) || !std::isfinite(area_side))
        throw Error(ErrorKind::AssumptionViolation, "radius must be >= 0 and area side > 0");

    const auto count = static_cast<Eigen::Index>(n);
    Rng placement(seed, Stream::Placement);
    Rng weight_rng(seed, Stream::Weights);

    Matrix adjacency(count, count);
    bool connected = false;
    for (int attempt = 0; attempt < kGeometricRetryBudget && !connected; ++attempt) {
        std::vector<double> px(static_cast<std::size_t>(n));
        std::vector<double> py(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < px.size(); ++i) {
            px[i] = placement.uniform(0.0, area_side);
            py[i] = placement.uniform(0.0, area_side);
        }
        adjacency.setZero();
        for (Eigen::Index i = 0; i < count; ++i) {
            for (Eigen::Index j = i + 1; j < count; ++j) {
                const double dx = px[static_cast<std::size_t>(i)] - px[static_cast<std::size_t>(j)];
                const double dy = py[static_cast<std::size_t>(i)] - py[static_cast<std::size_t>(j)];
                if (std::hypot(dx, dy) <= radius) {
                    adjacency(i, j) = 1.0;
                    adjacency(j, i) = 1.0;
                }
            }
            adjacency(i, i) = 1.0;
        }
        connected = is_strongly_connected(adjacency);
    }
    if (!connected)
        throw Error(ErrorKind::ConnectivityFailure,
                    "no connected placement of " + std::to_string(n) + " agents with radius " +
                        std::to_string(radius) + " after " + std::to_string(kGeometricRetryBudget) + " attempts");

    Matrix weights = Matrix::Zero(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double self_weight = weight_rng.uniform(kDiagonalWeightMin, kDiagonalWeightMax);
        double raw_total = 0.0;
        for (Eigen::Index j = 0; j < count; ++j) {
            if (j != i && adjacency(i, j) != 0.0) {
                weights(i, j) = weight_rng.uniform01();
                raw_total += weights(i, j);
            }
        }
        double off_total = 0.0;
        if (raw_total > 0.0) {
            const double scale = (1.0 - self_weight) / raw_total;
            for (Eigen::Index j = 0; j < count; ++j) {
                if (j != i) {
                    weights(i, j) *= scale;
                    off_total += weights(i, j);
                }
            }
        }
        weights(i, i) = 1.0 - off_total;
    }
    return EpidemicNetwork(std::move(weights));
}

AssumptionReport validate_assumptions(const EpidemicNetwork& network, const EpidemicParams& params, const Vector& x0)
{
    require_same_size(network.size(), x0.size(), "initial state");

    AssumptionReport report;
    report.a1_strongly_connected = network.irreducible();
    if (!report.a1_strongly_connected)
        report.messages.emplace_back("A1: interaction graph is not strongly connected");

    report.a2_initial_in_range = true;
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
        if (!(x0(i) > 0.0 && x0(i) < 0.5)) {
            report.a2_initial_in_range = false;
            report.messages.emplace_back("A2: x0[" + std::to_string(i) + "] = " + format_g17(x0(i)) +
                                         " is outside (0, 1/2)");
            break;
        }
    }

    const double rho_a = spectral_radius(network.weights());
    report.a3_dt_gamma = params.dt * params.gamma;
    report.a3_dt_beta_rho = params.dt * params.beta * rho_a;
    report.a3_dt_rate_sum = params.dt * (params.beta + params.gamma);
    report.a3_dt_small = report.a3_dt_gamma < 1.0 && report.a3_dt_beta_rho < 1.0;
    report.a3_advisory = report.a3_dt_rate_sum > kStepSizeAdvisory;
    if (!(report.a3_dt_gamma < 1.0))
        report.messages.emplace_back("A3: dt*gamma = " + format_g17(report.a3_dt_gamma) + " is not < 1");
    if (!(report.a3_dt_beta_rho < 1.0))
        report.messages.emplace_back("A3: dt*beta*rho(A) = " + format_g17(report.a3_dt_beta_rho) + " is not < 1");
    if (report.a3_advisory)
        report.messages.emplace_back("A3 advisory: dt*(beta+gamma) = " + format_g17(report.a3_dt_rate_sum) +
                                     " exceeds " + format_g17(kStepSizeAdvisory));

    report.a4_row_stochastic_diag = network.row_stochastic_strong_diagonal();
    if (!network.row_stochastic())
        report.messages.emplace_back("A4: weights are not row-stochastic");
    if (!network.strong_diagonal())
        report.messages.emplace_back("A4: some self-weight a_ii is not > 1/2");
    return report;
}

EpidemicNetwork parse_network_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw Error(ErrorKind::ConfigParse,
                            "network CSV line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix weights(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != n)
            throw Error(ErrorKind::NonSquare, "network CSV row " + std::to_string(i + 1) + " has " +
                                                  std::to_string(row.size()) + " entries, expected " +
                                                  std::to_string(n));
        for (Eigen::Index j = 0; j < n; ++j)
            weights(i, j) = row[static_cast<std::size_t>(j)];
    }
    return EpidemicNetwork(std::move(weights));
}

EpidemicNetwork read_network_csv(const std::filesystem::path& path)
{
    return parse_network_csv(read_text_file(path));
}

void write_network_csv(const EpidemicNetwork& network, const std::filesystem::path& path)
{
    std::string out;
    const Matrix& a = network.weights();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j)
                out += ',';
            out += format_g17(a(i, j));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

}  // namespace sisctl
