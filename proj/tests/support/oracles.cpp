#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

using Poly = std::vector<double>;

void trim(Poly& p, double eps)
{
    while (p.size() > 1 && std::abs(p.front()) <= eps)
        p.erase(p.begin());
}

double max_abs(const Poly& p)
{
    double m = 0.0;
    for (double c : p)
        m = std::max(m, std::abs(c));
    return m;
}

Poly derivative(const Poly& p)
{
    const std::size_t deg = p.size() - 1;
    Poly d;
    for (std::size_t i = 0; i < deg; ++i)
        d.push_back(p[i] * static_cast<double>(deg - i));
    return d.empty() ? Poly{0.0} : d;
}

/// Remainder of a / b, both highest degree first.
Poly remainder(Poly a, const Poly& b)
{
    while (a.size() >= b.size()) {
        const double q = a.front() / b.front();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i] -= q * b[i];
        a.erase(a.begin());
    }
    return a.empty() ? Poly{0.0} : a;
}

std::vector<Poly> sturm_sequence(const Poly& p)
{
    const double scale = std::max(1.0, max_abs(p));
    std::vector<Poly> seq{p, derivative(p)};
    while (seq.back().size() > 1) {
        Poly r = remainder(seq[seq.size() - 2], seq.back());
        for (double& c : r)
            c = -c;
        trim(r, 1e-13 * scale);
        if (max_abs(r) <= 1e-13 * scale)
            break;
        seq.push_back(r);
    }
    return seq;
}

int sign_changes(const std::vector<Poly>& seq, double t)
{
    int changes = 0;
    double prev = 0.0;
    for (const auto& p : seq) {
        const double v = evaluate_polynomial(p, t);
        if (v == 0.0)
            continue;
        if (prev != 0.0 && (v > 0.0) != (prev > 0.0))
            ++changes;
        prev = v;
    }
    return changes;
}

double root_bound(const Poly& p)
{
    double bound = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i)
        bound = std::max(bound, std::abs(p[i] / p.front()));
    return 1.0 + bound;
}

}  // namespace

std::vector<double> characteristic_polynomial(const Matrix& a)
{
    const Eigen::Index n = a.rows();
    std::vector<double> coeffs{1.0};
    Matrix m = Matrix::Zero(n, n);
    double c = 1.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c * Matrix::Identity(n, n);
        c = -(a * m).trace() / static_cast<double>(k);
        coeffs.push_back(c);
    }
    return coeffs;
}

double evaluate_polynomial(const std::vector<double>& coeffs, double t)
{
    double v = 0.0;
    for (double c : coeffs)
        v = v * t + c;
    return v;
}

int sturm_root_count(const std::vector<double>& coeffs, double lo, double hi)
{
    const auto seq = sturm_sequence(coeffs);
    return sign_changes(seq, lo) - sign_changes(seq, hi);
}

double largest_real_root(const std::vector<double>& coeffs)
{
    const auto seq = sturm_sequence(coeffs);
    double hi = root_bound(coeffs);
    double lo = -hi;
    const int top = sign_changes(seq, hi);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        // Sturm counts need evaluation points that are not roots
        if (evaluate_polynomial(coeffs, mid) == 0.0)
            mid += 1e-3 * (hi - lo);
        if (sign_changes(seq, mid) - top >= 1)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double perron_root(const Matrix& a)
{
    return largest_real_root(characteristic_polynomial(a));
}

bool strongly_connected_by_closure(const Matrix& a)
{
    const Eigen::Index n = a.rows();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (Eigen::Index i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (Eigen::Index j = 0; j < n; ++j)
            if (a(i, j) != 0.0)
                reach[i][j] = true;
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j])
                    reach[i][j] = true;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!reach[i][j])
                return false;
    return true;
}

double lambda_max_by_cholesky(const Matrix& symmetric)
{
    const Eigen::Index n = symmetric.rows();
    const double r = symmetric.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    double lo = -r;
    double hi = r;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        Eigen::LLT<Matrix> llt(mid * Matrix::Identity(n, n) - symmetric);
        if (llt.info() == Eigen::Success)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

bool negative_definite(const Matrix& symmetric)
{
    Eigen::LLT<Matrix> llt(-symmetric);
    return llt.info() == Eigen::Success && (llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all();
}

double endemic_level_by_bisection(double r0)
{
    double lo = 0.0;
    double hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((1.0 - 2.0 * mid) * (1.0 - mid) > 1.0 / r0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Vector m_hat_step(const Matrix& a, double beta, double gamma, double dt, const Vector& x)
{
    const Eigen::Index n = a.rows();
    Matrix m_hat(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double m = (i == j ? 1.0 - dt * gamma : 0.0) + dt * beta * a(i, j);
            const double b = dt * beta * x(i) * (3.0 - 2.0 * x(i));
            m_hat(i, j) = m - b * a(i, j);
        }
    }
    return m_hat * x;
}

}  // namespace oracle
