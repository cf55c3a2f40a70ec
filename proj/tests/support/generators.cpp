#include "generators.hpp"

namespace gen {

Matrix assumption4_network(int n, Source& src, double chord_probability)
{
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double diag = src.uniform(0.55, 0.95);
        if (n == 1) {
            a(i, i) = 1.0;
            continue;
        }
        // i hears from its ring predecessor, so the ring is strongly connected
        a(i, (i + n - 1) % n) = src.uniform(0.1, 1.0);
        for (int j = 0; j < n; ++j)
            if (j != i && a(i, j) == 0.0 && src.coin(chord_probability))
                a(i, j) = src.uniform(0.1, 1.0);
        const double off = a.row(i).sum();
        a.row(i) *= (1.0 - diag) / off;
        a(i, i) = 1.0 - a.row(i).sum();
    }
    return a;
}

Matrix nonnegative_matrix(int n, Source& src, double zero_probability, double scale)
{
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = src.coin(zero_probability) ? 0.0 : scale * src.uniform(0.0, 1.0);
    return a;
}

Vector uniform_vector(int n, Source& src, double lo, double hi)
{
    Vector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = src.uniform(lo, hi);
    return v;
}

}  // namespace gen
