#include "ycl/energy.hpp"

#include <cmath>
#include <limits>

#include "ycl/bubbles.hpp"
#include "ycl/quadrature.hpp"

namespace ycl {

namespace {

double I_n1_n(const ProblemParams& p) { return i_integral(p.n - 1, p.n); }

double kpow(const ProblemParams& p, double e) { return std::pow(-p.K, e); }

}  // namespace

double const_a(const ProblemParams& p) {
    const int n = p.n;
    if (n < 4) throw std::invalid_argument("const_a: needs n >= 4");
    return std::pow(p.alpha_n, p.p_sharp) * sphere_area(n - 1) * I_n1_n(p) * (n - 3.0) /
           ((n - 1.0) * std::sqrt(static_cast<double>(n) * (n - 1)));
}

double const_E(const ProblemParams& p) {
    p.require_supercritical();
    const int n = p.n;
    if (n < 4) throw std::invalid_argument("const_E: needs n >= 4");
    const double D = p.Dn;
    const double bracket =
        -(n - 1.0) * phi(0.5 * (n + 1.0), D) + D * std::pow(D * D - 1.0, -0.5 * (n - 1.0));
    return const_a(p) / kpow(p, 0.5 * (n - 2.0)) * bracket;
}

double const_E_oracle(const ProblemParams& p) {
    // -(1/n)|K| int U^{2*} + H int_bdy U^{2#}
    const int n = p.n;
    const double A = p.alpha_n / kpow(p, 0.25 * (n - 2.0));
    const double interior = std::pow(A, p.p_star) * half_space_moment_oracle(p, 0.0, n);
    const double boundary =
        std::pow(A, p.p_sharp) * boundary_moment_oracle(p, 0.0, n - 1.0);
    return -(-p.K) / n * interior + p.H * boundary;
}

double const_c(const ProblemParams& p) {
    p.require_supercritical();
    const int n = p.n;
    if (n < 4) throw std::invalid_argument("const_c: needs n >= 4");
    return 2.0 * (n - 2.0) * sphere_area(n - 1) * p.alpha_n * p.alpha_n * I_n1_n(p) /
           (kpow(p, 0.5 * (n - 2.0)) * std::pow(p.Dn * p.Dn - 1.0, 0.5 * (n - 3.0)));
}

double const_c_oracle(const ProblemParams& p) {
    // (n-1) int_bdy U^2
    const double A = p.alpha_n / kpow(p, 0.25 * (p.n - 2.0));
    return (p.n - 1.0) * A * A * boundary_moment_oracle(p, 0.0, p.n - 2.0);
}

double const_b(const ProblemParams& p, double f_n) {
    p.require_supercritical();
    const int n = p.n;
    if (n < 4) throw std::invalid_argument("const_b: needs n >= 4");
    if (n == 4) {
        return 192.0 * pi * pi / (-p.K) +
               p.alpha_n * p.alpha_n * sphere_area(3) * i_integral(3, 4) / (-p.K);
    }
    const double D = p.Dn;
    const double second = (n - 2.0) / (n - 1.0) * p.alpha_n * p.alpha_n * sphere_area(n - 1) *
                          I_n1_n(p) / kpow(p, 0.5 * (n - 2.0)) *
                          (4.0 * (n - 3.0) * phi_hat(0.5 * (n - 1.0), D) + phi(0.5 * (n - 3.0), D));
    return 0.5 * f_n + second;
}

DHPair const_d_h(const ProblemParams& p) {
    const int n = p.n;
    if (n < 4) throw std::invalid_argument("const_d_h: needs n >= 4");
    DHPair out;
    out.d_n = std::pow(p.alpha_n, p.p_star) * sphere_area(n - 1) * i_integral(0.5 * (n + 2.0), n - 2.0);
    out.h_n = 2.0 * (n - 1.0) * std::pow(p.alpha_n, p.p_sharp) * sphere_area(n - 1) /
              std::sqrt(static_cast<double>(n) * (n - 1)) * i_integral(0.5 * n, n - 2.0);
    return out;
}

double interaction_coefficient(const ProblemParams& p) {
    return const_d_h(p).d_n / kpow(p, 0.5 * (p.n - 2.0));
}

double interaction_coefficient_oracle(const ProblemParams& p) {
    p.require_supercritical();
    const int n = p.n;
    const double A = p.alpha_n / kpow(p, 0.25 * (n - 2.0));
    // interior route: -K (alpha_n/|K|^{(n-2)/4}) int U^{2*-1}
    const double interior = (-p.K) * A * std::pow(A, p.p_star - 1.0) *
                            half_space_moment_oracle(p, 0.0, 0.5 * (n + 2.0));
    // boundary route: 2(n-1) H (alpha_n/|K|^{(n-2)/4}) int_bdy U^{2#-1}
    const double boundary = 2.0 * (n - 1.0) * p.H * A * std::pow(A, p.p_sharp - 1.0) *
                            boundary_moment_oracle(p, 0.0, 0.5 * n);
    return boundary - interior;
}

CancellationResiduals cancellation_checks(const ProblemParams& p) {
    p.require_supercritical();
    const int n = p.n;
    if (n < 5) throw std::invalid_argument("cancellation_checks: needs n >= 5");
    const double D = p.Dn;
    CancellationResiduals out;

    // Ricci-direction coefficient at order delta^2
    {
        const double a = 2.0 * phi(0.5 * (n - 3.0), D);
        const double bfull = (n - 3.0) * ((n - 1.0) * phi_hat(0.5 * (n + 1.0), D) +
                                          (n - 2.0) * phi_hat(0.5 * (n - 1.0), D));
        out.ric_residual = (a - bfull) / std::abs(a);
    }
    // tangential-Ricci coefficient; base D^2 - 1
    {
        const double lead = D * std::pow(D * D - 1.0, -0.5 * (n - 3.0));
        const double res = -(n - 4.0) * phi(0.5 * (n - 3.0), D) -
                           (n - 3.0) * phi(0.5 * (n - 1.0), D) + lead;
        out.rbar_residual = res / std::abs(lead);
    }
    // delta-order balance via the closed-form correction
    {
        const SecondFundamentalForm h =
            SecondFundamentalForm::single_pair(n, 0, 1, 1.0 / std::sqrt(2.0));
        const DeltaOrderBalance bal = delta_order_balance(p, h);
        out.delta_order_residual = (bal.interior - bal.boundary) / bal.scale;
    }
    return out;
}

namespace {

// Parity-resolved |grad wbar0|^2 integrated over the upper half-cube of
// half-side L. The pair fields g^{ij} = grad(x_4 x_i x_j / denom^2) carry a
// definite parity in each tangential coordinate, so cross terms that survive
// the full-cube integral are exactly the parity-even ones; everything reduces
// to one octant.
double gradient_energy_halfcube(const ProblemParams& p, const SecondFundamentalForm& h,
                                double L) {
    struct Pair {
        int i, j;
        double m;  // M_ij = 2 h_ij alpha_4 / |K|^{1/2}
    };
    std::vector<Pair> pairs;
    const double mscale = 2.0 * p.alpha_n / std::sqrt(-p.K);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (h.at(i, j) != 0.0) pairs.push_back({i, j, mscale * h.at(i, j)});

    // dyadic panels from the core out to L
    std::vector<double> breaks{0.0, 1.0};
    while (breaks.back() < L) breaks.push_back(std::min(2.0 * breaks.back(), L));
    static const double gl6_x[3] = {0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
    static const double gl6_w[3] = {0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    std::vector<double> nodes, weights;
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double c = 0.5 * (breaks[k] + breaks[k + 1]);
        const double hw = 0.5 * (breaks[k + 1] - breaks[k]);
        for (int s = 0; s < 3; ++s) {
            nodes.push_back(c - hw * gl6_x[s]);
            weights.push_back(hw * gl6_w[s]);
            nodes.push_back(c + hw * gl6_x[s]);
            weights.push_back(hw * gl6_w[s]);
        }
    }
    const size_t m = nodes.size();

    // parity vector (in x_1,x_2,x_3) of component k of g^{ij}
    auto parity = [](const Pair& pr, int k) {
        int mask = (1 << pr.i) ^ (1 << pr.j);
        if (k < 3) mask ^= (1 << k);
        return mask & 7;
    };

    double total = 0.0;
    std::vector<double> g(pairs.size() * 4);
    for (size_t i1 = 0; i1 < m; ++i1)
        for (size_t i2 = 0; i2 < m; ++i2)
            for (size_t i3 = 0; i3 < m; ++i3) {
                double slab = 0.0;
                for (size_t i4 = 0; i4 < m; ++i4) {
                    const double x1 = nodes[i1], x2 = nodes[i2], x3 = nodes[i3], x4 = nodes[i4];
                    const double y4 = x4 + p.Dn;
                    const double den = x1 * x1 + x2 * x2 + x3 * x3 + y4 * y4 - 1.0;
                    const double d2 = den * den;
                    const double d3 = d2 * den;
                    const double xt[3] = {x1, x2, x3};
                    for (size_t q = 0; q < pairs.size(); ++q) {
                        const Pair& pr = pairs[q];
                        const double mono = x4 * xt[pr.i] * xt[pr.j];
                        for (int k = 0; k < 3; ++k) {
                            double dpoly = 0.0;
                            if (k == pr.i) dpoly = x4 * xt[pr.j];
                            else if (k == pr.j) dpoly = x4 * xt[pr.i];
                            g[q * 4 + static_cast<size_t>(k)] =
                                dpoly / d2 - 4.0 * mono * xt[k] / d3;
                        }
                        g[q * 4 + 3] = xt[pr.i] * xt[pr.j] / d2 - 4.0 * mono * y4 / d3;
                    }
                    double val = 0.0;
                    for (size_t qa = 0; qa < pairs.size(); ++qa)
                        for (size_t qb = 0; qb < pairs.size(); ++qb)
                            for (int k = 0; k < 4; ++k) {
                                if (parity(pairs[qa], k) != parity(pairs[qb], k)) continue;
                                val += 4.0 * pairs[qa].m * pairs[qb].m * g[qa * 4 + k] *
                                       g[qb * 4 + k];
                            }
                    slab += weights[i4] * val;
                }
                total += weights[i1] * weights[i2] * weights[i3] * slab;
            }
    return 8.0 * total;  // octant to full tangential cube
}

}  // namespace

RateFit grad_w0_rate(const ProblemParams& p4, const SecondFundamentalForm& h,
                     const std::vector<double>& deltas) {
    if (p4.n != 4) throw std::invalid_argument("grad_w0_rate: only defined for n = 4");
    p4.require_supercritical();
    if (deltas.size() < 2) throw std::invalid_argument("grad_w0_rate: need at least two deltas");
    RateFit fit;
    for (double d : deltas) fit.values.push_back(gradient_energy_halfcube(p4, h, 0.5 / d));
    // least-squares slope of Q vs |log delta|
    const size_t m = deltas.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < m; ++k) {
        const double xk = std::abs(std::log(deltas[k]));
        sx += xk;
        sy += fit.values[k];
        sxx += xk * xk;
        sxy += xk * fit.values[k];
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

double building_block_energy(const EnergyConstants& c, double pi_norm_sq, double delta,
                             double eps) {
    const double zeta =
        c.n == 4 ? delta * delta * std::abs(std::log(delta)) : delta * delta;
    const double z = delta == 0.0 ? 0.0 : zeta;
    return c.E - z * c.b_n * pi_norm_sq + eps * delta * c.c_n_const;
}

EnergyConstants compute_constants(const ProblemParams& p, bool with_f) {
    p.require_supercritical();
    EnergyConstants c;
    c.n = p.n;
    c.K = p.K;
    c.H = p.H;
    c.Dn = p.Dn;
    c.a_n = const_a(p);
    c.E = const_E(p);
    c.c_n_const = const_c(p);
    const DHPair dh = const_d_h(p);
    c.d_n = dh.d_n;
    c.h_n = dh.h_n;
    if (p.n >= 5 && with_f) {
        const SecondFundamentalForm unit = SecondFundamentalForm::single_pair(p.n, 0, 1, 1.0);
        c.f_n = f_constants(p, unit).f_n;
    } else {
        c.f_n = std::numeric_limits<double>::quiet_NaN();
    }
    c.b_n = p.n == 4 ? const_b(p, 0.0) : const_b(p, c.f_n);
    return c;
}

}  // namespace ycl
