#pragma once

#include "ycl/core.hpp"

namespace ycl {

/// Bubble U_{delta,y}: the explicit positive solution of the half-space limit
/// problem, concentrated at the boundary point (y, 0) with width delta.
struct Bubble {
    ProblemParams params;
    double delta = 1.0;
    Vec center;  // length n-1

    static Bubble standard(const ProblemParams& p);  // delta = 1, center = 0
};

double bubble_value(const Bubble& b, const HalfSpacePoint& x);

struct BubbleDerivatives {
    Vec gradient;      // length n (tangential components then x_n)
    double laplacian;  // trace of the Hessian
};
BubbleDerivatives bubble_derivatives(const Bubble& b, const HalfSpacePoint& x);

/// Hessian entry d^2 U / dx_i dx_j of the unit bubble (delta = 1, center = 0),
/// 0-based indices in 0..n-1 with index n-1 meaning x_n.
double bubble_hessian(const ProblemParams& p, const HalfSpacePoint& x, int i, int j);

/// -c_n Lap(U) - K U^{(n+2)/(n-2)}; identically zero for the exact bubble.
double interior_residual(const Bubble& b, const HalfSpacePoint& x);
/// Same residual with the interior exponent replaced (negative control).
double interior_residual_exponent(const Bubble& b, const HalfSpacePoint& x, double exponent);
/// (2/(n-2)) dU/dnu - H U^{n/(n-2)} at (x~, 0), outward normal nu = -e_n.
double boundary_residual(const Bubble& b, const Vec& x_tilde);

/// Elements z_1..z_n of the kernel of the linearized operator. i is 1-based;
/// i < n are the tangential translations dU/dx_i, i = n the dilation mode.
double kernel_value(const ProblemParams& p, int i, const HalfSpacePoint& x);
Vec kernel_gradient(const ProblemParams& p, int i, const HalfSpacePoint& x);
double kernel_laplacian(const ProblemParams& p, int i, const HalfSpacePoint& x);

struct LinearizedResiduals {
    double interior;  // -c_n Lap v - (n+2)/(n-2) K U^{4/(n-2)} v
    double boundary;  // (2/(n-2)) dv/dnu - (n/(n-2)) H U^{2/(n-2)} v
};
LinearizedResiduals linearized_residuals(const ProblemParams& p, int i, const HalfSpacePoint& x);
/// Interior linearized residual for an arbitrary field given by value/laplacian.
double linearized_interior_residual(const ProblemParams& p, double value, double laplacian,
                                    const HalfSpacePoint& x);

}  // namespace ycl
