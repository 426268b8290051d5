#pragma once

#include <Eigen/Dense>

#include "ridgecr/index_maps.hpp"
#include "ridgecr/kernel_constants.hpp"

namespace ridgecr {

// Omega(x, z) = integral of grad(d2K)^T A A^T grad(d2K) over the unit ball, for a
// vech-ordered coefficient vector A. Direct quadrature route (test oracle).
Matrix omega_quadrature(const KernelSpec& spec, const IndexMaps& maps, const Vector& A,
                        int quad_level = 2);

// Same matrix through the closed form Omega = rho2_sq * P(t), t = dvech reordering
// of A. Production route.
Matrix omega_closed_form(const KernelConstants& consts, const IndexMaps& maps, const Vector& A);

// P(t) with t in dvech coordinates (diagonal slots first).
Matrix closed_form_P(const KernelConstants& consts, const IndexMaps& maps, const Vector& t);

// d = 2 specialization written out as the explicit four-term polynomials.
Matrix closed_form_P_2d(const KernelConstants& consts, const Vector& t);

// d = 3 factor pair with P = L L^T + S, S diagonal.
struct PDecomposition {
    Matrix L;
    Matrix S;
};
PDecomposition p_decomposition_3d(const KernelConstants& consts, const Vector& t);

}  // namespace ridgecr
