#pragma once

#include "ycl/core.hpp"
#include "ycl/correction.hpp"

namespace ycl {

enum class Provenance { closed_form, quadrature };

/// The constant bundle of the reduced-energy expansion.
struct EnergyConstants {
    int n = 0;
    double K = 0, H = 0, Dn = 0;
    double a_n = 0;        // prefactor of the bubble energy
    double E = 0;          // bubble energy
    double b_n = 0;        // delta^2 coefficient (times |pi|^2)
    double c_n_const = 0;  // eps*delta coefficient
    double d_n = 0;        // interaction strength
    double h_n = 0;        // boundary route to the same interaction strength
    double f_n = 0;        // correction self-energy constant, NaN for n = 4
    Provenance f_prov = Provenance::quadrature;  // everything else closed_form
};

double const_a(const ProblemParams& p);
double const_E(const ProblemParams& p);
double const_E_oracle(const ProblemParams& p);

double const_c(const ProblemParams& p);
double const_c_oracle(const ProblemParams& p);

/// b_4 for n = 4 (f_n ignored); otherwise the n >= 5 assembly using f_n.
double const_b(const ProblemParams& p, double f_n);

struct DHPair {
    double d_n = 0;
    double h_n = 0;
};
DHPair const_d_h(const ProblemParams& p);

/// Net bubble-interaction coefficient d_n / |K|^{(n-2)/2}.
double interaction_coefficient(const ProblemParams& p);
/// The same value assembled from the two defining integrals by quadrature:
/// the interior route carries phi_{3/2} and the boundary route carries the
/// D/sqrt(D^2-1) weight; the D-dependence cancels in the difference.
double interaction_coefficient_oracle(const ProblemParams& p);

struct CancellationResiduals {
    double ric_residual = 0;          // relative
    double rbar_residual = 0;         // relative
    double delta_order_residual = 0;  // relative
};
CancellationResiduals cancellation_checks(const ProblemParams& p);

struct RateFit {
    double slope = 0;
    std::vector<double> values;  // integral per delta
};
/// Gradient energy of the n = 4 leading correction over growing half-cubes;
/// returns the fitted coefficient of |log delta|.
RateFit grad_w0_rate(const ProblemParams& p4, const SecondFundamentalForm& h,
                     const std::vector<double>& deltas);

/// Leading-order energy of one building block:
/// E - zeta_n(delta) b_n |pi|^2 + eps delta c_n.
double building_block_energy(const EnergyConstants& c, double pi_norm_sq, double delta,
                             double eps);

/// Assemble the full bundle; with_f controls the expensive f_n computation
/// (mode solves); when false, f_n is set for n >= 5 only if trivially needed.
EnergyConstants compute_constants(const ProblemParams& p, bool with_f = true);

}  // namespace ycl
