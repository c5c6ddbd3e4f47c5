#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wvq/errors.hpp"

namespace wvq {

// Dense row-major matrix of doubles. Used for feature batches (N x d),
// codebooks (K x d) and small square matrices alike.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

using FeatureBatch = Matrix;
using Codebook = Matrix;

// Symmetric d x d matrix. Construction symmetrizes so that
// entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
  public:
    SymMatrix() = default;

    explicit SymMatrix(std::size_t dim) : dim_(dim), m_(dim, dim) {
        if (dim < 1) throw InvalidInput("SymMatrix: dim must be >= 1");
    }

    // Builds from an arbitrary square matrix by averaging with its transpose.
    static SymMatrix from_full(const Matrix& a) {
        if (a.rows != a.cols || a.rows < 1) throw InvalidInput("SymMatrix: input not square");
        SymMatrix s(a.rows);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double v = 0.5 * (a.at(i, j) + a.at(j, i));
                s.m_.at(i, j) = v;
                s.m_.at(j, i) = v;
            }
        return s;
    }

    static SymMatrix identity(std::size_t n) {
        SymMatrix s(n);
        for (std::size_t i = 0; i < n; ++i) s.m_.at(i, i) = 1.0;
        return s;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix s(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) s.m_.at(i, i) = d[i];
        return s;
    }

    std::size_t dim() const { return dim_; }
    double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }

    // Symmetric write: mirrors the entry.
    void set(std::size_t i, std::size_t j, double v) {
        m_.at(i, j) = v;
        m_.at(j, i) = v;
    }

    const Matrix& full() const { return m_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += m_.at(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : m_.data) s += v * v;
        return std::sqrt(s);
    }

    bool all_finite() const { return m_.all_finite(); }

  private:
    std::size_t dim_ = 0;
    Matrix m_;
};

// c = a * b for general matrices.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw InvalidInput("matmul: shape mismatch");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        double* cr = c.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            double av = ar[k];
            if (av == 0.0) continue;
            const double* br = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) cr[j] += av * br[j];
        }
    }
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

} // namespace wvq
