#pragma once

#include "ycl/core.hpp"

namespace ycl {

/// Geodesic ball geometry attached to a supercritical parameter set:
/// Euclidean radius R in the unit-ball model and geodesic radius T.
struct BallGeometry {
    double R = 0.0;  // D - sqrt(D^2 - 1), in (0, 1)
    double T = 0.0;  // log((1+R)/(1-R))
};
BallGeometry ball_radius(const ProblemParams& p);

/// Regular solution of the separated radial problem for one harmonic index,
/// integrated from a series launch near t = 0 out to t = T.
struct RadialModeSolution {
    int harmonic_index = 0;
    double T = 0.0;
    std::vector<double> t;            // increasing grid of accepted steps
    std::vector<double> gamma;        // gamma(t_k)
    std::vector<double> gamma_prime;  // gamma'(t_k)

    double value_at(double s) const;  // cubic Hermite between nodes
    double gamma_T() const { return gamma.back(); }
    double gamma_prime_T() const { return gamma_prime.back(); }
};

/// Shooting solve of the mode-i radial equation
///   gamma'' + (n-1) coth(t) gamma' - (i(i+n-2)/sinh^2 t + n) gamma = 0
/// with the branch regular at t = 0. t0_factor controls the series launch
/// point t0 = t0_factor * T.
RadialModeSolution solve_radial_mode(int n, int i, double T, double t0_factor = 1e-4,
                                     double tol = 1e-12);

/// Robin ratio mu_i = gamma_i'(T) / gamma_i(T).
double robin_ratio(const RadialModeSolution& sol);

struct SteklovVerdict {
    double mu0 = 0.0;          // expected 2R/(1+R^2) = tanh T
    double mu1 = 0.0;          // expected (1+R^2)/(2R) = D
    long multiplicity_at_D = 0;  // harmonic-dimension-weighted count of mu_i = D
    std::vector<double> mu;    // mu_i for i = 0..imax
};
SteklovVerdict steklov_verdict(const ProblemParams& p, int imax = 8);

/// Conformal map from the closed half-space onto the ball B_R: inversion about
/// the shifted origin followed by the Moebius automorphism recentring the
/// image ball. Pulls the Poincare metric back to 4 |dx|^2 / denom(x)^2.
struct CayleyMap {
    ProblemParams params;
    double R = 0.0;

    explicit CayleyMap(const ProblemParams& p);

    Vec forward(const HalfSpacePoint& x) const;        // point of B_R
    HalfSpacePoint inverse(const Vec& z) const;
    std::vector<double> jacobian(const HalfSpacePoint& x) const;  // row-major n*n
};

/// Max relative deviation of the pulled-back hyperbolic metric from
/// (|K|/(n(n-1))) U^{4/(n-2)} times the identity, at one point.
double conformal_factor_check(const ProblemParams& p, const HalfSpacePoint& x);

/// First-eigenspace function on the ball attached to coordinate i (1-based);
/// the sinh-profile mode sinh(t) theta_i written in ball coordinates.
double ball_mode_one(const Vec& z, int i);

/// Proportionality test between the transported kernel element i and the
/// ball mode: max relative deviation of the pointwise ratio from its median
/// over a deterministic sample.
double kernel_transfer_check(const ProblemParams& p, int i, int samples = 1000,
                             std::uint64_t seed = 20240901);

}  // namespace ycl
