#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ycl {

inline constexpr double pi = 3.14159265358979323846264338327950288;

using Vec = std::vector<double>;

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

/// Dimension of the space of degree-i spherical harmonics on S^{n-1}.
long harmonic_dim(int n, int i);

/// Problem data (n, K, H) with K < 0, H > 0 and all scalars derived from them.
struct ProblemParams {
    int n = 0;
    double K = 0.0;
    double H = 0.0;

    double Dn = 0.0;       // sqrt(n(n-1)) H / sqrt|K|; bubbling regime iff > 1
    double c_n = 0.0;      // 4(n-1)/(n-2)
    double alpha_n = 0.0;  // (4 n (n-1))^{(n-2)/4}
    double p_star = 0.0;   // 2n/(n-2), critical Sobolev exponent
    double p_sharp = 0.0;  // 2(n-1)/(n-2), critical trace exponent
    bool supercritical = false;  // Dn > 1

    /// Requires Dn > 1 (throws otherwise). Most half-space formulas need it.
    void require_supercritical() const;
};

ProblemParams make_params(int n, double K, double H);

/// Convenience: K = -1 and H chosen so that the scaling-invariant ratio is D.
ProblemParams params_for_ratio(int n, double D);

struct HalfSpacePoint {
    Vec tilde;      // (x_1, ..., x_{n-1})
    double xn = 0;  // >= 0
};

/// |x~|^2 + (x_n + D)^2 - 1. Strictly positive on the closed half-space when D > 1.
double denom(const ProblemParams& p, const HalfSpacePoint& x);
double denom(const ProblemParams& p, const Vec& tilde, double xn);

/// Trace-free symmetric (n-1)x(n-1) coefficient array h^{ij}.
struct SecondFundamentalForm {
    int dim = 0;            // n-1
    std::vector<double> h;  // row-major, dim*dim

    double at(int i, int j) const { return h[static_cast<size_t>(i) * dim + j]; }
    double& at(int i, int j) { return h[static_cast<size_t>(i) * dim + j]; }

    double trace() const;
    double norm_sq() const;  // sum_{ij} h_ij^2
    /// sum_{i<j} h_ij^2, the pairwise norm used by the dimension-4 rate formula.
    double pair_norm_sq() const;
    double quad(const Vec& tilde) const;  // sum_{ij} h_ij x_i x_j

    static SecondFundamentalForm zero(int n);
    /// Single off-diagonal pair h_ij = h_ji = value (0-based indices), rest zero.
    static SecondFundamentalForm single_pair(int n, int i, int j, double value);

    void validate() const;  // symmetric and trace-free, else throws
};

/// Positive-definite quadratic form on R^{n-1} (second derivative of |pi(.)|^2).
struct HessianForm {
    int dim = 0;
    std::vector<double> q;  // row-major, dim*dim, symmetric

    double at(int i, int j) const { return q[static_cast<size_t>(i) * dim + j]; }
    double operator()(const Vec& a, const Vec& b) const;

    static HessianForm isotropic(int n, double value);
    bool positive_definite() const;  // via Cholesky
};

/// Deterministic xorshift-free generator (splitmix64); identical on every platform.
struct SampleRng {
    std::uint64_t state;
    explicit SampleRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double a, double b);     // [a, b)
    HalfSpacePoint half_space_point(int n, double span, double depth);
};

}  // namespace ycl
