#pragma once

#include "ycl/core.hpp"
#include "ycl/energy.hpp"

namespace ycl {

/// Cluster of k boundary peaks: heights d_j >= 0 and locations tau_j in
/// R^{n-1}, pairwise distinct.
struct ClusterConfig {
    int k = 1;
    Vec d;                  // length k
    std::vector<Vec> tau;   // k points, each length n-1
    double eps = 0.0;
};

struct Schedule {
    double eta = 0.0;
    Vec delta;       // per peak
    double rho = 0.0;  // only meaningful for n = 4
};

/// d_0 = c_n / (2 b_n |pi|^2).
double d0(const EnergyConstants& c, double pi_norm_sq);

/// Inverse of l(s) = -s log s on the small branch; needs 0 < eps < e^{-1}/2.
double rho_inverse(double eps);

Schedule schedule(const ProblemParams& p, const ClusterConfig& cfg, double d0_value);

/// Reduced cluster energy F_n: confinement by the Hessian form, concave
/// heights, pairwise repulsion.
double F_n(const ClusterConfig& cfg, const HessianForm& Q, const EnergyConstants& c,
           double pi_norm_sq, const ProblemParams& p);

/// Gradient of F_n in the flattened variables (d_1..d_k, tau_1, ..., tau_k).
Vec F_n_gradient(const ClusterConfig& cfg, const HessianForm& Q, const EnergyConstants& c,
                 double pi_norm_sq, const ProblemParams& p);

struct OptimizeResult {
    ClusterConfig config;
    double value = 0.0;
    double grad_norm = 0.0;  // projected-gradient norm
    bool converged = false;
    int best_seed = -1;
};

/// Multi-start projected ascent of F_n over d >= 0 and pairwise-distinct tau.
OptimizeResult optimize_cluster(int k, const HessianForm& Q, const EnergyConstants& c,
                                double pi_norm_sq, const ProblemParams& p,
                                const std::vector<std::uint64_t>& seeds);

/// Leading reduced-energy value: k E + k theta (c d0 - b |pi|^2 d0^2) + Theta F_n.
double reduced_energy_expansion(const ClusterConfig& cfg, const ProblemParams& p,
                                const EnergyConstants& c, const HessianForm& Q,
                                double pi_norm_sq);

/// The cluster ansatz evaluated on the flat chart: sum of scaled bubbles plus
/// (optionally) the closed-form correction attached to h.
double approximate_solution_field(const ClusterConfig& cfg, const ProblemParams& p,
                                  const Schedule& s, const SecondFundamentalForm* h,
                                  const HalfSpacePoint& x);

/// Closed-form symmetric two-peak optimum scale for isotropic Q = q Id:
/// t* = [ (n-2) d_n d0^{n-2} / (b_n q |K|^{(n-2)/2} 2^n) ]^{1/n}.
double two_peak_scale(const EnergyConstants& c, double q, double d0_value,
                      const ProblemParams& p);

}  // namespace ycl
