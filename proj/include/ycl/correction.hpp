#pragma once

#include "ycl/core.hpp"
#include "ycl/spectral.hpp"

namespace ycl {

/// Forcing term of the correction problem: (8(n-1)/(n-2)) h^{ij} d2U/dxi dxj x_n.
double forcing_Ep(const ProblemParams& p, const SecondFundamentalForm& h,
                  const HalfSpacePoint& x);

/// Value, gradient and Laplacian of a scalar field at one point; the input
/// format for the polynomial operator below.
struct FieldJet {
    double value = 0.0;
    Vec gradient;       // length n
    double laplacian = 0.0;
};

/// L(q) = -denom * Lap q + 2n grad q . (x + D e_n) - 2n q.
double L_operator(const ProblemParams& p, const FieldJet& q, const HalfSpacePoint& x);

/// Closed-form correction w_p for n >= 5 and its derivatives.
double wp_value(const ProblemParams& p, const SecondFundamentalForm& h, const HalfSpacePoint& x);
Vec wp_gradient(const ProblemParams& p, const SecondFundamentalForm& h, const HalfSpacePoint& x);
double wp_laplacian(const ProblemParams& p, const SecondFundamentalForm& h,
                    const HalfSpacePoint& x);
/// -c_n Lap w_p + c_n n(n+2)/denom^2 w_p - E_p; zero for the exact solution.
double wp_residual(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x);

/// Leading profile of the n = 4 correction and its derivatives.
double wbar0_value(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x);
Vec wbar0_gradient(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x);
double wbar0_laplacian(const ProblemParams& p, const SecondFundamentalForm& h,
                       const HalfSpacePoint& x);

/// Scalar with derivatives up to third order; enough for the radial profiles.
struct Jet3 {
    double f = 0, d1 = 0, d2 = 0, d3 = 0;
};
Jet3 jet_var(double r);
Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a, const Jet3& b);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator*(double c, const Jet3& a);
Jet3 operator/(const Jet3& a, const Jet3& b);
Jet3 jet_log(const Jet3& a);

/// Radial profiles of the auxiliary n = 4 problems, free constants set to 0:
///   phi0(r) = (3 r^4 - 2 (r^2-1)^2 log(r^2-1)) / (16 r^2)
///   phi1(r) = D log(r^2-1)/(4 r^2) - D log(r^2-1)/4
/// defined on (1, inf). Both are returned with derivatives through order 3.
Jet3 zp_profile_phi0(double r);
Jet3 zp_profile_phi1(double r, double D);
/// Residual of -f'' - (3/r) f' = rhs for the two profiles (rhs = log(r^2-1)
/// and D/(r^2-1) respectively).
double zp_profile0_ode_residual(double r);
double zp_profile1_ode_residual(double r, double D);

/// z_p built from the profiles; solves -Lap z_p = U x_4 for n = 4.
double zp_value(const ProblemParams& p4, const HalfSpacePoint& x);
double zp_laplacian(const ProblemParams& p4, const HalfSpacePoint& x);
/// -Lap z_p - U x_4, which the construction annihilates.
double zp_equation_residual(const ProblemParams& p4, const HalfSpacePoint& x);

/// Boundary-layer component psi_12 for n >= 5, reconstructed on the ball as a
/// ladder of odd-odd spherical-harmonic modes with Robin-coupled radial
/// profiles. The ladder starts at degree 2; solvability needs mu_l > D, which
/// holds for every l >= 2.
struct PsiSolution {
    ProblemParams params;
    double R = 0, T = 0;
    int lmax = 0;
    std::vector<double> amplitude;           // per degree l = 2..lmax
    std::vector<double> datum_coeff;         // projection of the Robin datum
    std::vector<RadialModeSolution> modes;   // radial solves per degree
    std::vector<std::vector<double>> ladder; // P_l(u) dense coefficients
    double mu2_margin = 0;                   // mu_2 - D > 0
    double tail_fraction = 0;                // share of datum mass at l = lmax

    /// psi_12 at an arbitrary half-space point.
    double value12(const HalfSpacePoint& x) const;
    /// Profile F(r, xn) with psi_12(x) = Ubar(x) zeta_1 zeta_2 F(|x~|, xn),
    /// zeta = x~/|x~|.
    double reduced_profile(double r, double xn) const;
};
PsiSolution psi_mode_solve(const ProblemParams& p, int lmax = 14);

/// Ladder harmonic z_1 z_2 P_l(z_n, |z|^2): dense coefficients of P_l as a
/// polynomial in u = z_n/|z| of degree l-2 (exposed for tests).
std::vector<double> ladder_polynomial(int n, int l);
double ladder_polynomial_eval(const std::vector<double>& c, double u);

struct FConstants {
    double f1 = 0;       // int_0^inf x (x - D) ((x+D)^2 - 1)^{-(n-1)/2} dx
    double f2 = 0;       // int x_1 x_2 denom_b^{-n/2} psi_12 dx~
    double f_n = 0;      // assembled constant, depends on (n, D) only
    double quad_value = 0;  // f_n * |pi|^2 for the supplied h
};
FConstants f_constants(const ProblemParams& p, const SecondFundamentalForm& h,
                       const PsiSolution& psi);
FConstants f_constants(const ProblemParams& p, const SecondFundamentalForm& h);

/// Quadratic-form oracle: int E_p (w_p + psi_p) by direct reduced quadrature.
double f_quadratic_form_oracle(const ProblemParams& p, const SecondFundamentalForm& h,
                               const PsiSolution& psi);

/// int w_p z_i over the half-space by symmetric tensor quadrature (i 1-based).
double orthogonality_check(const ProblemParams& p, const SecondFundamentalForm& h, int i);

/// Both sides of the delta-order balance: |K| int U^{(n+2)/(n-2)} w_p and
/// (n-1) H int_bdy U^{n/(n-2)} w_p, plus the scale of the absolute integrand.
struct DeltaOrderBalance {
    double interior = 0;
    double boundary = 0;
    double scale = 1;
};
DeltaOrderBalance delta_order_balance(const ProblemParams& p, const SecondFundamentalForm& h);

}  // namespace ycl
