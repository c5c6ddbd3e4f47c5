#pragma once

#include <vector>

#include "wvq/matrix.hpp"

namespace wvq::linalg {

struct EigenPair {
    std::vector<double> values; // descending
    Matrix vectors;             // orthonormal columns, vectors.col(j) <-> values[j]
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Converges when
// every off-diagonal magnitude is <= 1e-12 * ||m||_F.
EigenPair eigh_sym(const SymMatrix& m);

// Symmetric PSD square root: R with R*R ~= m + jitter*I. Eigenvalues in
// [-1e-6*||m||_F, 0) are clamped to zero; anything lower raises NotPSD.
SymMatrix sqrtm_psd(const SymMatrix& m, double jitter);

// Symmetric inverse square root: R with R*(m + jitter*I)*R ~= I.
SymMatrix invsqrtm_psd(const SymMatrix& m, double jitter);

// V * diag(vals) * V^T for the eigenbasis of `ep`, with `f` applied to each
// eigenvalue. Shared by the square-root and inverse routines.
SymMatrix reconstruct(const EigenPair& ep, const std::vector<double>& vals);

} // namespace wvq::linalg
