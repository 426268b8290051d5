#pragma once

#include <optional>

#include "ridgecr/deriv_pack.hpp"
#include "ridgecr/index_maps.hpp"
#include "ridgecr/kernel_constants.hpp"

namespace ridgecr {

// Eigen-decomposition of a symmetric matrix with eigenvalues in descending order
// and a sign convention fixed against an optional reference frame.
struct EigenFrame {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, matching order
    bool degenerate = false;
    double min_gap = 0.0;

    Matrix V(int r) const { return vectors.rightCols(vectors.cols() - r); }
    double lambda(int i) const { return values(i); }
};

EigenFrame ordered_eigen(const Matrix& H, const std::optional<Matrix>& orientation_ref = {},
                         double tie_tol_rel = 1e-8);

enum class MMode { full, r1_simplified };

// Columns m_(r+1)..m_d mapping Hessian perturbations to projected-gradient
// perturbations; the (d(d+1)/2) x (d-r) matrix M(x).
Matrix m_vectors(const DerivPack& pack, const EigenFrame& frame, int r, const IndexMaps& maps,
                 MMode mode = MMode::full);

// Inverse SPD square root: returns T with T * S * T = I.
Matrix inv_sqrt_spd(const Matrix& S, double tol = 1e-12);

struct RidgeDiagnostics {
    Vector proj_grad;       // V^T grad, length d-r
    double lambda_rp1 = 0.0;
    Matrix M;               // d(d+1)/2 x (d-r)
    Matrix Sigma;           // (d-r) x (d-r)
    Matrix Qn;              // inverse sqrt of (fhat * Sigma)
    double Bn = 0.0;
    double eigengap = 0.0;  // lambda_r - lambda_(r+1)
    double density = 0.0;
    bool near_critical = false;  // fhat <= 0 or Sigma not PD; Qn/Bn use a flagged
                                 // regularized Sigma and must not drive regions
};

RidgeDiagnostics ridge_stats(const DerivPack& pack, int r, const KernelConstants& consts,
                             const IndexMaps& maps,
                             const std::optional<Matrix>& orientation_ref = {});

}  // namespace ridgecr
