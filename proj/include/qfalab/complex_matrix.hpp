#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "qfalab/errors.hpp"

namespace qfalab {

using cplx = std::complex<double>;

// Global dimension cap; QFALAB_MAX_DIM overrides the default of 4096.
inline std::size_t max_dim() {
    static const std::size_t cap = [] {
        const char* env = std::getenv("QFALAB_MAX_DIM");
        if (env != nullptr) {
            long v = std::atol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(4096);
    }();
    return cap;
}

// Dense square complex matrix, row-major. Immutable use is the norm: the
// operations below return fresh values.
class ComplexMatrix {
  public:
    ComplexMatrix() : dim_(0) {}

    explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {
        if (dim == 0) throw BadConfig("matrix dimension must be positive");
        if (dim > max_dim())
            throw TooLarge("matrix dimension " + std::to_string(dim) +
                           " exceeds cap " + std::to_string(max_dim()));
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return a_[i * dim_ + j];
    }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix conj_transpose() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    // Largest |A[i][j] - conj(A[j][i])|; zero for exactly Hermitian input.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                m = std::max(m,
                             std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    ComplexMatrix& operator*=(double s) {
        for (cplx& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix l, const ComplexMatrix& r) {
        l += r;
        return l;
    }
    friend ComplexMatrix operator-(ComplexMatrix l, const ComplexMatrix& r) {
        l -= r;
        return l;
    }
    friend ComplexMatrix operator*(double s, ComplexMatrix m) {
        m *= s;
        return m;
    }
    friend ComplexMatrix operator*(ComplexMatrix m, double s) {
        m *= s;
        return m;
    }

    // ikj order with a skip on zero entries of the left factor; permutation
    // and projector factors then cost O(dim^2) instead of O(dim^3).
    friend ComplexMatrix operator*(const ComplexMatrix& l,
                                   const ComplexMatrix& r) {
        l.check_same_dim(r);
        const std::size_t d = l.dim_;
        ComplexMatrix out(d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                const cplx lik = l(i, k);
                if (lik == cplx(0.0, 0.0)) continue;
                const cplx* rrow = &r.a_[k * d];
                cplx* orow = &out.a_[i * d];
                for (std::size_t j = 0; j < d; ++j) orow[j] += lik * rrow[j];
            }
        }
        return out;
    }

    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_)
            throw DimensionMismatch("matrix dimensions differ: " +
                                    std::to_string(dim_) + " vs " +
                                    std::to_string(o.dim_));
    }

  private:
    std::size_t dim_;
    std::vector<cplx> a_;
};

// Re(Tr(A B)) without forming the product.
inline double trace_product_re(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_dim(b);
    const std::size_t d = a.dim();
    cplx t = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) t += a(i, j) * b(j, i);
    return t.real();
}

// U A U^dag computed as U (U A^dag)^dag; both products have the (possibly
// sparse) U on the left, so permutation conjugation costs O(dim^2).
inline ComplexMatrix conjugate_by(const ComplexMatrix& u,
                                  const ComplexMatrix& a) {
    ComplexMatrix t = u * a.conj_transpose();
    return u * t.conj_transpose();
}

// U v for a state vector.
inline std::vector<cplx> apply_to_vector(const ComplexMatrix& u,
                                         const std::vector<cplx>& v) {
    const std::size_t d = u.dim();
    if (v.size() != d) throw DimensionMismatch("vector length vs matrix dim");
    std::vector<cplx> out(d, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const cplx uik = u(i, k);
            if (uik == cplx(0.0, 0.0)) continue;
            acc += uik * v[k];
        }
        out[i] = acc;
    }
    return out;
}

inline ComplexMatrix outer_product(const std::vector<cplx>& v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = v[i] * std::conj(v[j]);
    return m;
}

}  // namespace qfalab
