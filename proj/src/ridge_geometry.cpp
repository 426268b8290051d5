#include "ridgecr/ridge_geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ridgecr/errors.hpp"

namespace ridgecr {

EigenFrame ordered_eigen(const Matrix& H, const std::optional<Matrix>& orientation_ref,
                         double tie_tol_rel) {
    const int d = static_cast<int>(H.rows());
    const double hnorm = H.cwiseAbs().maxCoeff();
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, hnorm))
        throw PreconditionError("ordered_eigen: input matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw NumericError("ordered_eigen: decomposition failed");

    EigenFrame f;
    f.values = es.eigenvalues().reverse();
    f.vectors = es.eigenvectors().rowwise().reverse();

    if (orientation_ref) {
        for (int i = 0; i < d; ++i)
            if (f.vectors.col(i).dot(orientation_ref->col(i)) < 0.0) f.vectors.col(i) *= -1.0;
    } else {
        // deterministic default: largest-magnitude entry positive
        for (int i = 0; i < d; ++i) {
            int arg = 0;
            f.vectors.col(i).cwiseAbs().maxCoeff(&arg);
            if (f.vectors(arg, i) < 0.0) f.vectors.col(i) *= -1.0;
        }
    }

    f.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < d; ++i) f.min_gap = std::min(f.min_gap, f.values(i) - f.values(i + 1));
    f.degenerate = f.min_gap < tie_tol_rel * std::max(hnorm, 1e-300);
    return f;
}

Matrix m_vectors(const DerivPack& pack, const EigenFrame& frame, int r, const IndexMaps& maps,
                 MMode mode) {
    const int d = pack.dim;
    if (r < 1 || r >= d) throw PreconditionError("m_vectors: 1 <= r < d required");
    if (mode == MMode::r1_simplified && r != 1)
        throw PreconditionError("m_vectors: r1_simplified mode requires r = 1");

    const double hnorm = std::max(frame.values.cwiseAbs().maxCoeff(), 1e-300);
    const double tol = 1e-8 * hnorm;
    for (int i = r; i < d; ++i)
        for (int j = 0; j < r; ++j)
            if (std::abs(frame.values(i) - frame.values(j)) <= tol)
                throw NumericError("m_vectors: degenerate eigen frame (F4 violated numerically)");

    Matrix M(maps.vech_size(), d - r);
    for (int i = r; i < d; ++i) {
        Vector mixed;
        if (mode == MMode::r1_simplified) {
            mixed = pack.grad.norm() / (frame.values(i) - frame.values(0)) * frame.vectors.col(0);
        } else {
            mixed = Vector::Zero(d);
            for (int j = 0; j < r; ++j) {
                const double coef =
                    frame.vectors.col(j).dot(pack.grad) / (frame.values(i) - frame.values(j));
                mixed += coef * frame.vectors.col(j);
            }
        }
        Vector kron(d * d);
        for (int a = 0; a < d; ++a) kron.segment(a * d, d) = frame.vectors(a, i) * mixed;
        M.col(i - r) = maps.dup.transpose() * kron;
    }
    return M;
}

Matrix inv_sqrt_spd(const Matrix& S, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) throw NumericError("inv_sqrt_spd: decomposition failed");
    const double lmax = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() <= tol * std::max(lmax, 1e-300))
        throw NumericError("inv_sqrt_spd: matrix is singular within tolerance");
    Vector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

RidgeDiagnostics ridge_stats(const DerivPack& pack, int r, const KernelConstants& consts,
                             const IndexMaps& maps, const std::optional<Matrix>& orientation_ref) {
    const int d = pack.dim;
    if (r < 1 || r >= d) throw PreconditionError("ridge_stats: 1 <= r < d required");

    RidgeDiagnostics out;
    EigenFrame frame = ordered_eigen(pack.hess_matrix(), orientation_ref);
    out.lambda_rp1 = frame.values(r);
    out.eigengap = frame.values(r - 1) - frame.values(r);
    out.density = pack.value;
    out.proj_grad = frame.V(r).transpose() * pack.grad;

    out.M = m_vectors(pack, frame, r, maps);
    out.Sigma = out.M.transpose() * consts.R * out.M;
    out.Sigma = ((out.Sigma + out.Sigma.transpose()) / 2.0).eval();

    Matrix scaled = pack.value * out.Sigma;
    Eigen::SelfAdjointEigenSolver<Matrix> es(scaled);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    out.near_critical = !(pack.value > 0.0) || lmin <= 1e-12 * std::max(lmax, 1e-300);
    if (out.near_critical) {
        // reporting-only regularization; regions route around these points instead
        const double eps = 1e-10 * std::max(out.Sigma.trace(), 0.0) + 1e-100;
        scaled = std::max(pack.value, 1e-100) * (out.Sigma + eps * Matrix::Identity(d - r, d - r));
    }
    out.Qn = inv_sqrt_spd(scaled, 1e-16);
    out.Bn = (out.Qn * out.proj_grad).norm();
    return out;
}

}  // namespace ridgecr
