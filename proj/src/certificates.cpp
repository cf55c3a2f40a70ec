#include "sisctl/certificates.hpp"

#include "sisctl/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace sisctl {

double lambda_max_symmetric(const Matrix& symmetric)
{
    if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
        throw Error(ErrorKind::NonSquare, "lambda_max needs a nonempty square matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NoConvergence, "symmetric eigenvalue solver failed");
    return solver.eigenvalues().maxCoeff();
}

double lyapunov_margin(const Matrix& m, const Vector& p_diag)
{
    require_same_size(m.rows(), p_diag.size(), "Lyapunov diagonal");
    Matrix s = m.transpose() * p_diag.asDiagonal() * m;
    s.diagonal() -= p_diag;
    // symmetrize against roundoff in the triple product
    return lambda_max_symmetric(0.5 * (s + s.transpose()));
}

LyapunovCertificate find_diagonal_lyapunov(const Matrix& m, double tol)
{
    const PerronPair perron = perron_vectors(m);
    if (perron.rho > 1.0 + tol)
        throw Error(ErrorKind::SpectralRadiusExceedsOne,
                    "rho = " + format_g17(perron.rho) + " exceeds 1; no diagonal Lyapunov certificate exists");

    LyapunovCertificate cert;
    cert.rho = perron.rho;
    cert.strict = perron.rho < 1.0 - tol;
    auto satisfied = [&](double margin) { return cert.strict ? margin < 0.0 : margin <= kNonStrictSlack; };

    Vector log_p = (perron.left.array() / perron.right.array()).log().matrix();
    double best = lyapunov_margin(m, log_p.array().exp().matrix());
    int evaluations = 1;

    double step = 0.5;
    while (!satisfied(best)) {
        if (evaluations >= kLyapunovBudget || step < 1e-12)
            throw Error(ErrorKind::SearchExhausted,
                        "no diagonal certificate found after " + std::to_string(evaluations) +
                            " evaluations; best margin " + format_g17(best));
        bool improved = false;
        for (Eigen::Index i = 0; i < log_p.size() && evaluations < kLyapunovBudget; ++i) {
            for (double direction : {1.0, -1.0}) {
                log_p(i) += direction * step;
                const double trial = lyapunov_margin(m, log_p.array().exp().matrix());
                ++evaluations;
                if (trial < best) {
                    best = trial;
                    improved = true;
                    break;
                }
                log_p(i) -= direction * step;
            }
            if (satisfied(best))
                break;
        }
        if (!improved)
            step *= 0.5;
    }

    cert.p_diag = log_p.array().exp().matrix();
    cert.margin = best;
    cert.evaluations = evaluations;
    return cert;
}

DescentReport verify_dfe_descent(const Trajectory& trajectory, const Matrix& m, const LyapunovCertificate& certificate)
{
    require_same_size(trajectory.agents(), m.rows(), "system matrix");
    require_same_size(trajectory.agents(), certificate.p_diag.size(), "certificate");

    DescentReport report;
    report.values.reserve(trajectory.length());
    for (std::size_t k = 0; k < trajectory.length(); ++k) {
        const auto x = trajectory.state(k);
        report.values.push_back(x.dot(certificate.p_diag.cwiseProduct(x)));
    }
    for (std::size_t k = 0; k + 1 < trajectory.length(); ++k) {
        if ((trajectory.state(k).array() == 0.0).all())
            continue;
        ++report.steps_checked;
        const double decrement = report.values[k] - report.values[k + 1];
        report.min_decrement = report.min_decrement ? std::min(*report.min_decrement, decrement) : decrement;
        if (!(decrement > 0.0) && report.strictly_decreasing) {
            report.strictly_decreasing = false;
            report.first_failure = k;
        }
    }
    return report;
}

Vector bbar_diagonal(const Vector& x, const EpidemicParams& params)
{
    return (params.dt * params.beta * (-2.0 * x.array().square() + 3.0 * x.array() - 2.0)).matrix();
}

bool bbar_bound_check(const Vector& x, const EpidemicParams& params)
{
    const double bound = -(7.0 / 8.0) * params.dt * params.beta + kBbarSlack;
    return (bbar_diagonal(x, params).array() <= bound).all();
}

EndemicAudit build_endemic_audit(const Trajectory& trajectory, const EpidemicNetwork& network,
                                 const EpidemicParams& params, double x_bar)
{
    params.validate();
    require_same_size(network.size(), trajectory.agents(), "trajectory");
    if (!network.irreducible() || !network.row_stochastic_strong_diagonal())
        throw Error(ErrorKind::AssumptionViolation,
                    "endemic audit needs a strongly connected row-stochastic network with a_ii > 1/2");
    if (!(params.r0() > 1.0))
        throw Error(ErrorKind::AssumptionViolation, "endemic audit needs r0 > 1");
    if (!(x_bar > 0.0 && x_bar < 0.5))
        throw Error(ErrorKind::AssumptionViolation, "endemic level must lie in (0, 1/2)");

    const Matrix& a = network.weights();
    const Eigen::Index n = network.size();
    const double dtb = params.dt * params.beta;
    const double dtg = params.dt * params.gamma;
    const double c = 1.0 / ((1.0 - 2.0 * x_bar) * (1.0 - x_bar));

    EndemicAudit audit;
    audit.x_bar = x_bar;
    audit.d_matrix = dtb * a;
    audit.d_matrix.diagonal().array() += 1.0 - dtg * c;
    audit.d_row_sum_error = (audit.d_matrix.rowwise().sum().array() - 1.0).abs().maxCoeff();

    if ((audit.d_matrix.array() < 0.0).any()) {
        audit.warnings.emplace_back("D has negative entries; dt is too large for the comparison argument");
        audit.rho_d = std::numeric_limits<double>::quiet_NaN();
        audit.v_positive = false;
    } else {
        const PerronPair perron = perron_vectors(audit.d_matrix);
        audit.rho_d = perron.rho;
        audit.v = perron.left;
        audit.v_positive = (audit.v.array() > 0.0).all();
    }
    const Vector v = audit.v.size() == n ? audit.v : Vector::Ones(n) / static_cast<double>(n);

    const std::size_t length = trajectory.length();
    audit.phi_checks.reserve(length > 0 ? length - 1 : 0);
    audit.lyap_sequence.reserve(length);

    Vector z = (trajectory.state(0).array() - x_bar).abs().matrix();
    std::vector<bool> z_nonzero;
    z_nonzero.reserve(length);
    Matrix phi(n, n);
    for (std::size_t k = 0; k < length; ++k) {
        const auto x = trajectory.state(k);
        const Vector y = (x.array() - x_bar).matrix();
        if (audit.sandwich_ok &&
            ((y - z).maxCoeff() > kSandwichTolerance || (-y - z).maxCoeff() > kSandwichTolerance)) {
            audit.sandwich_ok = false;
            audit.first_sandwich_failure = k;
        }
        audit.lyap_sequence.push_back(v.dot(z));
        z_nonzero.push_back((z.array() != 0.0).any());
        if (k + 1 == length)
            break;

        const Vector row_scale = (dtb * (1.0 - 2.0 * x.array()) * (1.0 - x.array())).matrix();
        phi.noalias() = row_scale.asDiagonal() * a;
        phi.diagonal().array() += 1.0 - dtg * c + dtg * 2.0 * x_bar * c * x.array();

        PhiCheck check;
        check.k = k;
        check.min_phi_entry = phi.minCoeff();
        check.phi_nonnegative = check.min_phi_entry >= 0.0;
        check.max_checked_difference = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(x(i) > 0.0))
                continue;  // the row of Phi - D vanishes at x_i = 0
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j && a(i, j) == 0.0)
                    continue;
                const double diff = phi(i, j) - audit.d_matrix(i, j);
                check.max_checked_difference = std::max(check.max_checked_difference, diff);
                if (!(diff < 0.0)) {
                    if (i == j)
                        check.diag_negative_where_infected = false;
                    else
                        check.offdiag_negative_on_edges = false;
                }
            }
        }
        if (!check.phi_nonnegative && audit.phi_nonnegative) {
            audit.phi_nonnegative = false;
            audit.warnings.emplace_back("Phi(" + std::to_string(k) + ") has a negative entry " +
                                        format_g17(check.min_phi_entry));
        }
        if (!(check.offdiag_negative_on_edges && check.diag_negative_where_infected) && audit.phi_minus_d_signs_ok) {
            audit.phi_minus_d_signs_ok = false;
            audit.warnings.emplace_back("Phi(" + std::to_string(k) + ") - D has a nonnegative checked entry");
        }
        audit.phi_checks.push_back(check);

        z = phi * z;
    }

    for (std::size_t k = 0; k + 1 < audit.lyap_sequence.size(); ++k) {
        if (!z_nonzero[k])
            continue;
        const double margin = audit.lyap_sequence[k] - audit.lyap_sequence[k + 1];
        audit.min_descent_margin = audit.min_descent_margin ? std::min(*audit.min_descent_margin, margin) : margin;
        if (!(margin > 0.0) && audit.descent_ok) {
            audit.descent_ok = false;
            audit.first_descent_failure = k;
        }
    }
    return audit;
}

void write_audit_log_csv(const EndemicAudit& audit, const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoFailure, "cannot open '" + path.string() + "' for writing");
    out << "k,V,descent_margin,phi_nonneg\n";
    const auto& values = audit.lyap_sequence;
    for (std::size_t k = 0; k < values.size(); ++k) {
        out << k << ',' << format_g17(values[k]) << ',';
        if (k + 1 < values.size())
            out << format_g17(values[k] - values[k + 1]);
        out << ',';
        if (k < audit.phi_checks.size())
            out << (audit.phi_checks[k].phi_nonnegative ? 1 : 0);
        out << '\n';
    }
    if (!out)
        throw Error(ErrorKind::IoFailure, "write to '" + path.string() + "' failed");
}

BoundReport verify_half_bound(const Trajectory& trajectory, const EpidemicParams& params)
{
    BoundReport report;
    report.max_state = -std::numeric_limits<double>::infinity();
    const double r0 = params.r0();
    report.cap_checked = r0 > 1.0;
    report.cap_threshold = report.cap_checked ? 0.5 * (1.0 - 1.0 / r0) : 0.0;

    for (std::size_t k = 0; k < trajectory.length(); ++k) {
        const auto x = trajectory.state(k);
        Eigen::Index arg = 0;
        const double step_max = x.maxCoeff(&arg);
        if (step_max > report.max_state) {
            report.max_state = step_max;
            report.argmax = {k, arg};
        }
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x(i) < 0.5)) {
                ++report.violation_count;
                if (report.violations.size() < kMaxListedViolations)
                    report.violations.push_back({k, i});
            }
        }
        if (!report.cap_checked || k + 1 == trajectory.length())
            continue;
        const auto next = trajectory.state(k + 1);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x(i) > report.cap_threshold))
                continue;
            ++report.cap_checks;
            if (!(next(i) < step_max)) {
                ++report.cap_violation_count;
                if (report.cap_violations.size() < kMaxListedViolations)
                    report.cap_violations.push_back({k, i});
            }
        }
    }
    if (trajectory.length() == 0)
        report.max_state = 0.0;
    report.bound_holds = report.violation_count == 0;
    report.cap_holds = report.cap_violation_count == 0;
    return report;
}

}  // namespace sisctl
