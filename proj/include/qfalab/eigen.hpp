#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qfalab/complex_matrix.hpp"

namespace qfalab {

struct EigenDecomposition {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column j pairs with values[j]
};

// Cyclic Jacobi for Hermitian matrices. The input is symmetrized first, so
// small anti-Hermitian noise from accumulated arithmetic cannot stall the
// sweep. Deterministic: fixed rotation order, no pivot search.
inline EigenDecomposition hermitian_eig(const ComplexMatrix& input) {
    const std::size_t d = input.dim();
    ComplexMatrix a(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(d);

    const double scale = std::max(1.0, a.max_abs());
    const double tol = 1e-14 * scale;

    auto off_max = [&]() {
        double m = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                m = std::max(m, std::abs(a(i, j)));
        return m;
    };

    for (int sweep = 0; sweep < 60 && off_max() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const cplx b = a(p, q);
                const double babs = std::abs(b);
                if (babs <= tol * 1e-2) continue;

                const cplx phase = b / babs;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (app - aqq) / (2.0 * babs);
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;
                const cplx spc = s * std::conj(phase);

                for (std::size_t r = 0; r < d; ++r) {
                    if (r == p || r == q) continue;
                    const cplx arp = a(r, p);
                    const cplx arq = a(r, q);
                    a(r, p) = c * arp + spc * arq;
                    a(r, q) = -sp * arp + c * arq;
                    a(p, r) = std::conj(a(r, p));
                    a(q, r) = std::conj(a(r, q));
                }
                a(p, p) = app + t * babs;
                a(q, q) = aqq - t * babs;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t r = 0; r < d; ++r) {
                    const cplx vrp = v(r, p);
                    const cplx vrq = v(r, q);
                    v(r, p) = c * vrp + spc * vrq;
                    v(r, q) = -sp * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(d);
    for (std::size_t i = 0; i < d; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigenDecomposition out;
    out.values.resize(d);
    out.vectors = ComplexMatrix(d);
    for (std::size_t j = 0; j < d; ++j) {
        out.values[j] = diag[order[j]];
        for (std::size_t i = 0; i < d; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

}  // namespace qfalab
