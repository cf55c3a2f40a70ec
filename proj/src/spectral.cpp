#include "sisctl/spectral.hpp"

#include "sisctl/dynamics.hpp"
#include "sisctl/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace sisctl {

namespace {

void check_nonnegative(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error(ErrorKind::NonSquare, "spectral radius needs a square matrix");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j)))
                throw Error(ErrorKind::NonFiniteEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
            if (m(i, j) < 0.0)
                throw Error(ErrorKind::NegativeEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
        }
    }
}

// Kosaraju: components of the graph with an edge i -> j whenever m(i, j) != 0.
std::vector<std::vector<Eigen::Index>> strongly_connected_components(const Matrix& m)
{
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);

    for (Eigen::Index root = 0; root < n; ++root) {
        if (seen[static_cast<std::size_t>(root)])
            continue;
        std::vector<std::pair<Eigen::Index, Eigen::Index>> stack{{root, 0}};
        seen[static_cast<std::size_t>(root)] = true;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            bool descended = false;
            while (next < n) {
                const Eigen::Index v = next++;
                if (m(u, v) != 0.0 && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = true;
                    stack.emplace_back(v, 0);
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                order.push_back(stack.back().first);
                stack.pop_back();
            }
        }
    }

    std::vector<std::vector<Eigen::Index>> components;
    std::vector<bool> assigned(static_cast<std::size_t>(n), false);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (assigned[static_cast<std::size_t>(*it)])
            continue;
        std::vector<Eigen::Index> comp;
        std::vector<Eigen::Index> stack{*it};
        assigned[static_cast<std::size_t>(*it)] = true;
        while (!stack.empty()) {
            const Eigen::Index u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (Eigen::Index v = 0; v < n; ++v) {
                if (m(v, u) != 0.0 && !assigned[static_cast<std::size_t>(v)]) {
                    assigned[static_cast<std::size_t>(v)] = true;
                    stack.push_back(v);
                }
            }
        }
        components.push_back(std::move(comp));
    }
    return components;
}

// Requires an irreducible block.
double irreducible_radius(const Matrix& block, double tol, int max_iter)
{
    const Eigen::Index n = block.rows();
    Matrix shifted = 0.5 * block;
    shifted.diagonal().array() += 0.5;

    Vector x = Vector::Ones(n);
    Vector y(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        y.noalias() = shifted * x;
        const auto ratios = (y.array() / x.array()).eval();
        const double lo = ratios.minCoeff();
        const double hi = ratios.maxCoeff();
        if (2.0 * (hi - lo) <= tol * std::max(1.0, 2.0 * hi - 1.0))
            return std::max(0.0, 2.0 * (0.5 * (lo + hi)) - 1.0);
        x = y / y.maxCoeff();
    }
    throw Error(ErrorKind::NoConvergence,
                "power iteration did not converge within " + std::to_string(max_iter) + " iterations");
}

Vector bordered_null_vector(const Matrix& singular)
{
    const Eigen::Index n = singular.rows();
    Matrix system = singular;
    system.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(system);
    Vector v = lu.solve(rhs);
    // one step of iterative refinement
    const Vector residual = rhs - system * v;
    v += lu.solve(residual);
    return v;
}

}  // namespace

double spectral_radius(const Matrix& matrix, double tol, int max_iter)
{
    check_nonnegative(matrix);
    if (matrix.rows() == 0)
        return 0.0;

    double rho = 0.0;
    for (const auto& comp : strongly_connected_components(matrix)) {
        const auto k = static_cast<Eigen::Index>(comp.size());
        if (k == 1) {
            rho = std::max(rho, matrix(comp[0], comp[0]));
            continue;
        }
        Matrix block(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                block(i, j) = matrix(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
        rho = std::max(rho, irreducible_radius(block, tol, max_iter));
    }
    return rho;
}

PerronPair perron_vectors(const Matrix& matrix, double tol)
{
    check_nonnegative(matrix);
    if (matrix.rows() == 0 || !is_strongly_connected(matrix))
        throw Error(ErrorKind::Reducible, "Perron vectors need an irreducible matrix");

    PerronPair out;
    out.rho = spectral_radius(matrix, tol);
    const Eigen::Index n = matrix.rows();
    if (n == 1) {
        out.left = Vector::Ones(1);
        out.right = Vector::Ones(1);
        return out;
    }

    // one refinement pass: the two-sided quotient is second-order accurate in the vectors
    for (int pass = 0; pass < 2; ++pass) {
        Matrix singular = -matrix;
        singular.diagonal().array() += out.rho;
        out.right = bordered_null_vector(singular);
        out.left = bordered_null_vector(singular.transpose());
        if (pass == 0)
            out.rho = out.left.dot(matrix * out.right) / out.left.dot(out.right);
    }

    for (Vector* v : {&out.left, &out.right}) {
        if (!((v->array() > 0.0).all()))
            throw Error(ErrorKind::NoConvergence, "Perron vector is not strictly positive; matrix is ill-conditioned");
        *v /= v->sum();
    }
    return out;
}

double rho_M_closed_form(const EpidemicParams& params)
{
    return 1.0 + params.dt * (params.beta - params.gamma);
}

std::string_view to_string(Regime regime)
{
    return regime == Regime::Endemic ? "ENDEMIC" : "DFE";
}

RegimeReport classify_regime(const EpidemicNetwork& network, const EpidemicParams& params, double tie_tol)
{
    params.validate();
    if (!network.irreducible())
        throw Error(ErrorKind::Reducible, "regime classification needs a strongly connected network");

    RegimeReport report;
    report.rho_a = spectral_radius(network.weights());
    report.rho_m = spectral_radius(system_matrix(network, params));
    if (network.row_stochastic_strong_diagonal())
        report.rho_m_closed = rho_M_closed_form(params);
    report.r0 = params.r0();
    report.regime = report.rho_m > 1.0 + tie_tol ? Regime::Endemic : Regime::DiseaseFree;
    if (report.regime == Regime::DiseaseFree) {
        report.predicted_equilibrium = 0.0;
    } else if (report.r0 > 1.0) {
        report.predicted_equilibrium = endemic_closed_form(report.r0).value;
    }
    return report;
}

}  // namespace sisctl
