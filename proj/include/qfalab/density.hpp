#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qfalab/eigen.hpp"
#include "qfalab/errors.hpp"
#include "qfalab/rng.hpp"

namespace qfalab {

// Entropy in bits of a nonnegative weight list; 0 log 0 = 0. Entries in
// [-1e-12, 0) are treated as exact zeros. Not a validator: callers that need
// the distribution contract use shannon_entropy.
inline double entropy_bits(const std::vector<double>& w) {
    double s = 0.0;
    for (double p : w) {
        if (p <= 0.0) continue;
        s -= p * std::log2(p);
    }
    return s;
}

// Shannon entropy of a probability distribution, base 2.
inline double shannon_entropy(const std::vector<double>& dist) {
    double sum = 0.0;
    for (double p : dist) {
        if (p < -1e-12)
            throw NotADistribution("negative probability " + std::to_string(p));
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw NotADistribution("probabilities sum to " + std::to_string(sum));
    return entropy_bits(dist);
}

inline double binary_entropy(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw NotADistribution("binary probability " + std::to_string(p));
    p = std::min(1.0, std::max(0.0, p));
    return entropy_bits({p, 1.0 - p});
}

class DensityMatrix;
inline DensityMatrix validate_density(const ComplexMatrix& mat,
                                      double trace_tol, double psd_tol);

// Validated quantum state. Constructed only through validate_density; the
// original matrix is retained, the spectrum is clamped and renormalized.
class DensityMatrix {
  public:
    const ComplexMatrix& matrix() const { return mat_; }
    const std::vector<double>& spectrum() const { return spectrum_; }
    const ComplexMatrix& eigenvectors() const { return vectors_; }
    std::size_t dim() const { return mat_.dim(); }

  private:
    DensityMatrix(ComplexMatrix mat, std::vector<double> spectrum,
                  ComplexMatrix vectors)
        : mat_(std::move(mat)),
          spectrum_(std::move(spectrum)),
          vectors_(std::move(vectors)) {}

    friend DensityMatrix validate_density(const ComplexMatrix&, double, double);

    ComplexMatrix mat_;
    std::vector<double> spectrum_;
    ComplexMatrix vectors_;
};

inline DensityMatrix validate_density(const ComplexMatrix& mat,
                                      double trace_tol = 1e-8,
                                      double psd_tol = 1e-8) {
    const double herm = mat.hermiticity_defect();
    if (herm > psd_tol)
        throw NotHermitian("hermiticity defect " + std::to_string(herm));

    const double tr = mat.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw TraceNotOne("trace " + std::to_string(tr));

    EigenDecomposition eig = hermitian_eig(mat);
    double sum = 0.0;
    for (double& v : eig.values) {
        if (v < -psd_tol)
            throw NotPSD("eigenvalue " + std::to_string(v));
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (sum <= 0.0) throw NotPSD("spectrum sums to zero");
    for (double& v : eig.values) v /= sum;

    return DensityMatrix(mat, std::move(eig.values), std::move(eig.vectors));
}

// Von Neumann entropy in bits: Shannon entropy of the state's spectrum.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_bits(rho.spectrum());
}

// Haar-like random unitary: complex Gaussian matrix, QR via twice-applied
// modified Gram-Schmidt; R's diagonal is real positive by construction, which
// fixes the phase convention.
inline ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            g(i, j) = cplx(rng.gaussian(), rng.gaussian());

    ComplexMatrix q(dim);
    std::vector<cplx> col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < dim; ++i) col[i] = g(i, j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i)
                    proj += std::conj(q(i, k)) * col[i];
                for (std::size_t i = 0; i < dim; ++i) col[i] -= proj * q(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) norm += std::norm(col[i]);
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) = col[i] / norm;
    }
    return q;
}

// Random mixed state: normalized Gram matrix of a square complex Gaussian.
inline DensityMatrix random_density(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            g(i, j) = cplx(rng.gaussian(), rng.gaussian());

    ComplexMatrix gram = g * g.conj_transpose();
    double tr = gram.trace().real();
    ComplexMatrix rho(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            rho(i, j) = gram(i, j) / tr;
            if (i == j) rho(i, j) = cplx(rho(i, j).real(), 0.0);
        }
    return validate_density(rho);
}

// Random pure state vector, unit norm.
inline std::vector<cplx> random_pure_state(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> v(dim);
    double norm = 0.0;
    for (cplx& x : v) {
        x = cplx(rng.gaussian(), rng.gaussian());
        norm += std::norm(x);
    }
    norm = std::sqrt(norm);
    for (cplx& x : v) x /= norm;
    return v;
}

}  // namespace qfalab
