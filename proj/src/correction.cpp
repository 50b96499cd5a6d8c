#include "ycl/correction.hpp"

#include <algorithm>
#include <cmath>

#include "ycl/bubbles.hpp"
#include "ycl/quadrature.hpp"

namespace ycl {

namespace {

double amplitude(const ProblemParams& p) {
    return p.alpha_n * std::pow(-p.K, -0.25 * (p.n - 2));
}

// beta_n = 2 n (n-2) alpha_n / |K|^{(n-2)/4}
double beta_n(const ProblemParams& p) { return 2.0 * p.n * (p.n - 2) * amplitude(p); }

Vec shifted(const ProblemParams& p, const HalfSpacePoint& x) {
    Vec y(p.n);
    for (int k = 0; k < p.n - 1; ++k) y[k] = x.tilde[k];
    y[p.n - 1] = x.xn + p.Dn;
    return y;
}

double ubar(const ProblemParams& p, double den) {
    return p.alpha_n * std::pow(den, -0.5 * (p.n - 2));
}

}  // namespace

double forcing_Ep(const ProblemParams& p, const SecondFundamentalForm& h,
                  const HalfSpacePoint& x) {
    double s = 0.0;
    for (int i = 0; i < p.n - 1; ++i)
        for (int j = 0; j < p.n - 1; ++j)
            if (h.at(i, j) != 0.0) s += h.at(i, j) * bubble_hessian(p, x, i, j);
    return 8.0 * (p.n - 1) / (p.n - 2) * s * x.xn;
}

double L_operator(const ProblemParams& p, const FieldJet& q, const HalfSpacePoint& x) {
    const Vec y = shifted(p, x);
    double adv = 0.0;
    for (int k = 0; k < p.n; ++k) adv += q.gradient[k] * y[k];
    return -denom(p, x) * q.laplacian + 2.0 * p.n * adv - 2.0 * p.n * q.value;
}

namespace {

// Shared machinery for fields of the form  c * poly(x) / denom^{pw}  where
// poly = q(x~) * lin(x_n), q the quadratic form of h.
struct PolyOverDenom {
    const ProblemParams& p;
    const SecondFundamentalForm& h;
    double pw;       // exponent on denom
    double lin_shift;  // lin = x_n + lin_shift

    double poly(const HalfSpacePoint& x) const { return h.quad(x.tilde) * (x.xn + lin_shift); }

    Vec poly_grad(const HalfSpacePoint& x) const {
        Vec g(p.n, 0.0);
        const double lin = x.xn + lin_shift;
        for (int i = 0; i < p.n - 1; ++i) {
            double row = 0.0;
            for (int j = 0; j < p.n - 1; ++j) row += h.at(i, j) * x.tilde[j];
            g[i] = 2.0 * row * lin;
        }
        g[p.n - 1] = h.quad(x.tilde);
        return g;
    }

    double poly_lap(const HalfSpacePoint& x) const {
        return 2.0 * h.trace() * (x.xn + lin_shift);
    }

    double value(const HalfSpacePoint& x) const {
        return poly(x) * std::pow(denom(p, x), -pw);
    }

    Vec gradient(const HalfSpacePoint& x) const {
        const double d = denom(p, x);
        const Vec y = shifted(p, x);
        const double dpw = std::pow(d, -pw);
        const double dpw1 = std::pow(d, -pw - 1.0);
        const double v = poly(x);
        Vec g = poly_grad(x);
        for (int k = 0; k < p.n; ++k) g[k] = g[k] * dpw - 2.0 * pw * v * y[k] * dpw1;
        return g;
    }

    double laplacian(const HalfSpacePoint& x) const {
        const double d = denom(p, x);
        const Vec y = shifted(p, x);
        const Vec pg = poly_grad(x);
        double gy = 0.0;
        for (int k = 0; k < p.n; ++k) gy += pg[k] * y[k];
        const double v = poly(x);
        // Lap(d^{-pw}) = -2 pw n d^{-pw-1} + 4 pw (pw+1) |y|^2 d^{-pw-2}, |y|^2 = d + 1
        const double lap_pow = -2.0 * pw * p.n * std::pow(d, -pw - 1.0) +
                               4.0 * pw * (pw + 1.0) * (d + 1.0) * std::pow(d, -pw - 2.0);
        return poly_lap(x) * std::pow(d, -pw) - 4.0 * pw * gy * std::pow(d, -pw - 1.0) +
               v * lap_pow;
    }
};

}  // namespace

double wp_value(const ProblemParams& p, const SecondFundamentalForm& h, const HalfSpacePoint& x) {
    if (p.n < 5) throw std::invalid_argument("wp_value: needs n >= 5 (n = 4 has its own path)");
    p.require_supercritical();
    const PolyOverDenom f{p, h, 0.5 * p.n, -p.Dn};
    return beta_n(p) / (4.0 * p.n) * f.value(x);
}

Vec wp_gradient(const ProblemParams& p, const SecondFundamentalForm& h, const HalfSpacePoint& x) {
    const PolyOverDenom f{p, h, 0.5 * p.n, -p.Dn};
    Vec g = f.gradient(x);
    const double c = beta_n(p) / (4.0 * p.n);
    for (double& v : g) v *= c;
    return g;
}

double wp_laplacian(const ProblemParams& p, const SecondFundamentalForm& h,
                    const HalfSpacePoint& x) {
    const PolyOverDenom f{p, h, 0.5 * p.n, -p.Dn};
    return beta_n(p) / (4.0 * p.n) * f.laplacian(x);
}

double wp_residual(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x) {
    const double d = denom(p, x);
    return -p.c_n * wp_laplacian(p, h, x) +
           p.c_n * p.n * (p.n + 2.0) / (d * d) * wp_value(p, h, x) - forcing_Ep(p, h, x);
}

namespace {

// M_ij = 2 h^{ij} alpha_4 / |K|^{1/2}; wbar0 uses the same quadratic form
// scaled by 2 A, so reuse PolyOverDenom with a scaled copy of h.
SecondFundamentalForm scaled_form(const SecondFundamentalForm& h, double c) {
    SecondFundamentalForm m = h;
    for (double& v : m.h) v *= c;
    return m;
}

}  // namespace

double wbar0_value(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x) {
    if (p.n != 4) throw std::invalid_argument("wbar0_value: only defined for n = 4");
    p.require_supercritical();
    const SecondFundamentalForm m = scaled_form(h, 2.0 * amplitude(p));
    const PolyOverDenom f{p, m, 2.0, 0.0};  // x_4 * sum M_ij x_i x_j / denom^2
    return f.value(x);
}

Vec wbar0_gradient(const ProblemParams& p, const SecondFundamentalForm& h,
                   const HalfSpacePoint& x) {
    if (p.n != 4) throw std::invalid_argument("wbar0_gradient: only defined for n = 4");
    const SecondFundamentalForm m = scaled_form(h, 2.0 * amplitude(p));
    const PolyOverDenom f{p, m, 2.0, 0.0};
    return f.gradient(x);
}

double wbar0_laplacian(const ProblemParams& p, const SecondFundamentalForm& h,
                       const HalfSpacePoint& x) {
    if (p.n != 4) throw std::invalid_argument("wbar0_laplacian: only defined for n = 4");
    const SecondFundamentalForm m = scaled_form(h, 2.0 * amplitude(p));
    const PolyOverDenom f{p, m, 2.0, 0.0};
    return f.laplacian(x);
}

// ---------------------------------------------------------------------------
// Jet3 arithmetic

Jet3 jet_var(double r) { return {r, 1.0, 0.0, 0.0}; }

Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.f * b.f, a.d1 * b.f + a.f * b.d1, a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
            a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3};
}
Jet3 operator*(double c, const Jet3& a) { return {c * a.f, c * a.d1, c * a.d2, c * a.d3}; }

Jet3 operator/(const Jet3& a, const Jet3& b) {
    const double g = 1.0 / b.f;
    Jet3 inv;
    inv.f = g;
    inv.d1 = -b.d1 * g * g;
    inv.d2 = (2.0 * b.d1 * b.d1 - b.f * b.d2) * g * g * g;
    inv.d3 = (-6.0 * b.d1 * b.d1 * b.d1 + 6.0 * b.f * b.d1 * b.d2 - b.f * b.f * b.d3) * g * g * g * g;
    return a * inv;
}

Jet3 jet_log(const Jet3& a) {
    Jet3 out;
    out.f = std::log(a.f);
    out.d1 = a.d1 / a.f;
    out.d2 = (a.d2 * a.f - a.d1 * a.d1) / (a.f * a.f);
    out.d3 = a.d3 / a.f - 3.0 * a.d1 * a.d2 / (a.f * a.f) +
             2.0 * a.d1 * a.d1 * a.d1 / (a.f * a.f * a.f);
    return out;
}

// ---------------------------------------------------------------------------
// Radial profiles of the n = 4 auxiliary problems

Jet3 zp_profile_phi0(double r) {
    if (!(r > 1.0)) throw std::invalid_argument("zp_profile_phi0: needs r > 1");
    const Jet3 R = jet_var(r);
    const Jet3 r2 = R * R;
    const Jet3 r2m1 = r2 - Jet3{1.0, 0, 0, 0};
    const Jet3 L = jet_log(r2m1);
    const Jet3 num = 3.0 * (r2 * r2) - 2.0 * (r2m1 * r2m1 * L);
    return num / (16.0 * r2);
}

Jet3 zp_profile_phi1(double r, double D) {
    if (!(r > 1.0)) throw std::invalid_argument("zp_profile_phi1: needs r > 1");
    const Jet3 R = jet_var(r);
    const Jet3 r2 = R * R;
    const Jet3 L = jet_log(r2 - Jet3{1.0, 0, 0, 0});
    return (0.25 * D) * (L / r2) - (0.25 * D) * L;
}

double zp_profile0_ode_residual(double r) {
    const Jet3 f = zp_profile_phi0(r);
    return -f.d2 - 3.0 / r * f.d1 - std::log(r * r - 1.0);
}

double zp_profile1_ode_residual(double r, double D) {
    const Jet3 f = zp_profile_phi1(r, D);
    return -f.d2 - 3.0 / r * f.d1 - D / (r * r - 1.0);
}

double zp_value(const ProblemParams& p4, const HalfSpacePoint& x) {
    if (p4.n != 4) throw std::invalid_argument("zp_value: only defined for n = 4");
    const Vec y = shifted(p4, x);
    double rho2 = 0.0;
    for (double v : y) rho2 += v * v;
    const double rho = std::sqrt(rho2);
    const Jet3 f0 = zp_profile_phi0(rho);
    const Jet3 f1 = zp_profile_phi1(rho, p4.Dn);
    // z_p = (alpha_4/|K|^{1/2}) (1/2 dPhi0/dx_4 - Phi1) with Phi_i radial in |y|
    return amplitude(p4) * (0.5 * f0.d1 * y[3] / rho - f1.f);
}

double zp_laplacian(const ProblemParams& p4, const HalfSpacePoint& x) {
    if (p4.n != 4) throw std::invalid_argument("zp_laplacian: only defined for n = 4");
    const Vec y = shifted(p4, x);
    double rho2 = 0.0;
    for (double v : y) rho2 += v * v;
    const double rho = std::sqrt(rho2);
    const Jet3 f0 = zp_profile_phi0(rho);
    const Jet3 f1 = zp_profile_phi1(rho, p4.Dn);
    // Lap(G(rho) y_4) = y_4 (G'' + 5 G'/rho) in R^4, with G = Phi0'/rho
    const double G1 = (f0.d2 * rho - f0.d1) / rho2;
    const double G2 = f0.d3 / rho - 2.0 * f0.d2 / rho2 + 2.0 * f0.d1 / (rho2 * rho);
    const double lap_dPhi0 = y[3] * (G2 + 5.0 * G1 / rho);
    const double lap_Phi1 = f1.d2 + 3.0 * f1.d1 / rho;
    return amplitude(p4) * (0.5 * lap_dPhi0 - lap_Phi1);
}

double zp_equation_residual(const ProblemParams& p4, const HalfSpacePoint& x) {
    const Bubble b = Bubble::standard(p4);
    return -zp_laplacian(p4, x) - bubble_value(b, x) * x.xn;
}

// ---------------------------------------------------------------------------
// Odd-odd harmonic ladder and the psi mode solve

std::vector<double> ladder_polynomial(int n, int l) {
    if (l < 2) throw std::invalid_argument("ladder_polynomial: degree must be >= 2");
    // z_1 z_2 sum_m c_m z_n^{l-2-2m} |z|^{2m} is harmonic iff
    // c_{m+1} = -c_m (l-2-2m)(l-3-2m) / (2 (m+1) (2l - 2m + n - 4)).
    std::vector<double> c{1.0};
    int m = 0;
    while (l - 2 - 2 * m >= 2) {
        const double am = l - 2.0 - 2.0 * m;
        const double next = -c.back() * am * (am - 1.0) / (2.0 * (m + 1) * (2.0 * l - 2.0 * m + n - 4.0));
        c.push_back(next);
        ++m;
    }
    // dense coefficients of P_l(u) = sum_m c_m u^{l-2-2m}, degree l-2
    std::vector<double> dense(static_cast<size_t>(l - 1), 0.0);
    for (size_t k = 0; k < c.size(); ++k) dense[static_cast<size_t>(l) - 2 - 2 * k] = c[k];
    return dense;
}

double ladder_polynomial_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (size_t k = c.size(); k-- > 0;) v = v * u + c[k];
    return v;
}

namespace {

double eval_poly(const std::vector<double>& c, double u) { return ladder_polynomial_eval(c, u); }

}  // namespace

PsiSolution psi_mode_solve(const ProblemParams& p, int lmax) {
    if (p.n < 5) throw std::invalid_argument("psi_mode_solve: needs n >= 5");
    p.require_supercritical();

    PsiSolution psi;
    psi.params = p;
    const BallGeometry g = ball_radius(p);
    psi.R = g.R;
    psi.T = g.T;
    psi.lmax = lmax;

    const CayleyMap map(p);

    // Boundary datum profile: g_hat(R theta) = theta_1 theta_2 G(theta_n) with
    // G(u) = rho(u)^2 / (2 alpha_n (1 - u^2)), rho the boundary radius profile.
    auto profile_G = [&](double u) {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        Vec z(p.n, 0.0);
        z[0] = psi.R * s;
        z[p.n - 1] = psi.R * u;
        const HalfSpacePoint x = map.inverse(z);
        double rho2 = 0.0;
        for (double v : x.tilde) rho2 += v * v;
        return rho2 / (2.0 * p.alpha_n * (1.0 - u * u));
    };
    const double wexp = 0.5 * (p.n + 1.0);
    auto weight = [&](double u) { return std::pow(1.0 - u * u, wexp); };

    const double lo = -1.0 + 1e-12, hi = 1.0 - 1e-12;
    double max_mass = 0.0;
    for (int l = 2; l <= lmax; ++l) {
        psi.ladder.push_back(ladder_polynomial(p.n, l));
        const std::vector<double>& P = psi.ladder.back();
        auto fnum = [&](double u) { return profile_G(u) * eval_poly(P, u) * weight(u); };
        auto fden = [&](double u) {
            const double q = eval_poly(P, u);
            return q * q * weight(u);
        };
        const double num = adaptive_integrate(fnum, lo, hi, 1e-13).value;
        const double den = adaptive_integrate(fden, lo, hi, 1e-13).value;
        const double coeff = num / den;
        psi.datum_coeff.push_back(coeff);

        RadialModeSolution mode = solve_radial_mode(p.n, l, g.T);
        const double robin = mode.gamma_prime_T() - p.Dn * mode.gamma_T();
        if (std::abs(robin_ratio(mode) - p.Dn) < 1e-4)
            throw std::runtime_error("psi_mode_solve: near-resonant Robin mode");
        psi.amplitude.push_back(coeff / robin);
        psi.modes.push_back(std::move(mode));

        const double mass = std::abs(coeff) * std::sqrt(den);
        max_mass = std::max(max_mass, mass);
        if (l == lmax && max_mass > 0.0) psi.tail_fraction = mass / max_mass;
    }
    psi.mu2_margin = robin_ratio(psi.modes.front()) - p.Dn;
    return psi;
}

double PsiSolution::value12(const HalfSpacePoint& x) const {
    const CayleyMap map(params);
    const Vec z = map.forward(x);
    double zz = 0.0;
    for (double v : z) zz += v * v;
    const double r = std::sqrt(zz);
    if (r < 1e-14) return 0.0;
    const double t = std::log((1.0 + r) / (1.0 - r));
    const double u = z[static_cast<size_t>(params.n) - 1] / r;
    double hat = 0.0;
    for (size_t k = 0; k < modes.size(); ++k)
        hat += amplitude[k] * modes[k].value_at(t) * eval_poly(ladder[k], u);
    hat *= z[0] * z[1] / zz;
    return ubar(params, denom(params, x)) * hat;
}

double PsiSolution::reduced_profile(double r, double xn) const {
    HalfSpacePoint x;
    x.tilde.assign(params.n - 1, 0.0);
    x.tilde[0] = r;
    x.xn = xn;
    const CayleyMap map(params);
    const Vec z = map.forward(x);
    double zz = 0.0;
    for (double v : z) zz += v * v;
    const double rr = std::sqrt(zz);
    if (rr < 1e-14) return 0.0;
    const double t = std::log((1.0 + rr) / (1.0 - rr));
    const double u = z[static_cast<size_t>(params.n) - 1] / rr;
    double ztilde2 = zz - z[static_cast<size_t>(params.n) - 1] * z[static_cast<size_t>(params.n) - 1];
    double hat = 0.0;
    for (size_t k = 0; k < modes.size(); ++k)
        hat += amplitude[k] * modes[k].value_at(t) * eval_poly(ladder[k], u);
    return hat * ztilde2 / zz;
}

// ---------------------------------------------------------------------------
// The constant f_n

namespace {

// int_{S^{n-2}} zeta_1^2 zeta_2^2 dzeta = |S^{n-2}| / ((n-1)(n+1))
double s22(int n) { return sphere_area(n - 1) / ((n - 1.0) * (n + 1.0)); }

// Two-pass 2-D nested quadrature over (r, x_n) in [0,inf)^2.
template <class F>
double nested_quarter_plane(const F& f) {
    auto outer = [&](double tol_in, double tol_out) {
        auto g = [&](double xn) {
            auto fr = [&](double r) { return f(r, xn); };
            return integrate_to_infinity(fr, 0.0, tol_in).value;
        };
        return integrate_to_infinity(g, 0.0, tol_out).value;
    };
    const double pilot = outer(1e-5, 1e-3);
    const double scale = std::max(std::abs(pilot), 1e-30);
    return outer(1e-11 * scale, 1e-9 * scale);
}

}  // namespace

FConstants f_constants(const ProblemParams& p, const SecondFundamentalForm& h,
                       const PsiSolution& psi) {
    if (p.n < 5) throw std::invalid_argument("f_constants: needs n >= 5");
    p.require_supercritical();
    const int n = p.n;
    const double D = p.Dn;
    const double beta2 = beta_n(p) * beta_n(p);

    FConstants out;

    // f1 by direct quadrature
    auto f1_integrand = [&](double xv) {
        return xv * (xv - D) * std::pow((xv + D) * (xv + D) - 1.0, -0.5 * (n - 1.0));
    };
    {
        const double pilot = integrate_to_infinity(f1_integrand, 0.0, 1e-4).value;
        const double tol = 1e-12 * std::max(1.0, std::abs(pilot));
        out.f1 = integrate_to_infinity(f1_integrand, 0.0, tol).value;
    }

    // I_{w_p} reduction: 2D transverse slice then the paired-coordinate plane.
    const double Jcoef = sphere_area(n - 3) * pi * std::exp(std::lgamma(0.5 * (n - 3.0)) +
                                                            std::lgamma(0.5 * (n + 5.0)) -
                                                            std::lgamma(n + 1.0)) /
                         ((n - 1.0) * (n + 1.0) * (n + 3.0));
    const double Jb = sphere_area(n - 3) * pi *
                      std::exp(std::lgamma(0.5 * (n - 3.0)) + std::lgamma(0.5 * (n + 3.0)) -
                               std::lgamma(static_cast<double>(n))) /
                      ((n - 3.0) * (n - 1.0) * (n + 1.0)) *
                      std::pow(D * D - 1.0, 0.5 * (3.0 - n));

    // t2 = int x_1 x_2 denom_b^{-n/2} psi_12 on the boundary, reduced to 1-D
    auto t2_integrand = [&](double r) {
        const double db = r * r + D * D - 1.0;
        return std::pow(r, n) * ubar(p, db) * psi.reduced_profile(r, 0.0) *
               std::pow(db, -0.5 * n);
    };
    {
        const double pilot = integrate_to_infinity(t2_integrand, 0.0, 1e-4).value;
        const double tol = 1e-11 * std::max(1e-12, std::abs(pilot));
        out.f2 = s22(n) * integrate_to_infinity(t2_integrand, 0.0, tol).value;
    }

    out.f_n = p.c_n * beta2 *
              (Jcoef * out.f1 / (2.0 * n) - D * Jb / (8.0 * n * n) + out.f2 / (8.0 * n * n));
    out.quad_value = out.f_n * h.norm_sq();
    return out;
}

FConstants f_constants(const ProblemParams& p, const SecondFundamentalForm& h) {
    return f_constants(p, h, psi_mode_solve(p));
}

double f_quadratic_form_oracle(const ProblemParams& p, const SecondFundamentalForm& h,
                               const PsiSolution& psi) {
    if (p.n < 5) throw std::invalid_argument("f_quadratic_form_oracle: needs n >= 5");
    for (int i = 0; i < h.dim; ++i)
        if (h.at(i, i) != 0.0)
            throw std::invalid_argument("f_quadratic_form_oracle: zero-diagonal h required");
    const int n = p.n;
    const double D = p.Dn;
    const double beta2 = beta_n(p) * beta_n(p);
    const double common = p.c_n * beta2 * h.norm_sq() * s22(n) / (2.0 * n);

    // int E_p w_p
    auto wpart = [&](double r, double xn) {
        const double den = r * r + (xn + D) * (xn + D) - 1.0;
        return std::pow(r, n + 2) * xn * (xn - D) * std::pow(den, -(n + 1.0));
    };
    // int E_p psi_p
    auto ppart = [&](double r, double xn) {
        const double den = r * r + (xn + D) * (xn + D) - 1.0;
        return std::pow(r, n) * xn * ubar(p, den) * psi.reduced_profile(r, xn) *
               std::pow(den, -0.5 * (n + 2.0));
    };
    return common * (nested_quarter_plane(wpart) + nested_quarter_plane(ppart));
}

// ---------------------------------------------------------------------------
// Symmetric tensor-box quadratures (parity checks)

namespace {

// Composite Gauss-Legendre nodes on dyadic panels of [0, hi]; each tangential
// axis uses the mirrored set. Symmetry of the grid makes odd integrands cancel
// to roundoff.
void axis_nodes(double hi, std::vector<double>& nodes, std::vector<double>& weights,
                bool mirrored) {
    static const double gl4_x[2] = {0.3399810435848563, 0.8611363115940526};
    static const double gl4_w[2] = {0.6521451548625461, 0.3478548451374538};
    std::vector<double> breaks{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    for (double& b : breaks) b *= hi / 8.0;
    nodes.clear();
    weights.clear();
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double c = 0.5 * (breaks[k] + breaks[k + 1]);
        const double hw = 0.5 * (breaks[k + 1] - breaks[k]);
        for (int j = 0; j < 2; ++j) {
            nodes.push_back(c - hw * gl4_x[j]);
            weights.push_back(hw * gl4_w[j]);
            nodes.push_back(c + hw * gl4_x[j]);
            weights.push_back(hw * gl4_w[j]);
        }
    }
    if (mirrored) {
        const size_t m = nodes.size();
        for (size_t k = 0; k < m; ++k) {
            nodes.push_back(-nodes[k]);
            weights.push_back(weights[k]);
        }
    }
}

// Integrates f over [-hi,hi]^{n-1} x [0,hi]; also accumulates int |f|.
template <class F>
void box_integral(int n, double hi, const F& f, double& integral, double& abs_integral) {
    std::vector<double> tn, tw, nn, nw;
    axis_nodes(hi, tn, tw, true);
    axis_nodes(hi, nn, nw, false);
    const size_t tcount = tn.size();
    const size_t ncount = nn.size();
    size_t total = ncount;
    for (int a = 0; a < n - 1; ++a) total *= tcount;

    integral = 0.0;
    abs_integral = 0.0;
    HalfSpacePoint x;
    x.tilde.resize(n - 1);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rem = flat;
        double w = 1.0;
        for (int a = 0; a < n - 1; ++a) {
            const size_t idx = rem % tcount;
            rem /= tcount;
            x.tilde[a] = tn[idx];
            w *= tw[idx];
        }
        x.xn = nn[rem];
        w *= nw[rem];
        const double v = f(x);
        integral += w * v;
        abs_integral += w * std::abs(v);
    }
}

}  // namespace

double orthogonality_check(const ProblemParams& p, const SecondFundamentalForm& h, int i) {
    p.require_supercritical();
    if (p.n < 5) throw std::invalid_argument("orthogonality_check: needs n >= 5");
    double integral = 0.0, abs_integral = 0.0;
    box_integral(p.n, 8.0,
                 [&](const HalfSpacePoint& x) {
                     return wp_value(p, h, x) * kernel_value(p, i, x);
                 },
                 integral, abs_integral);
    (void)abs_integral;
    return integral;
}

DeltaOrderBalance delta_order_balance(const ProblemParams& p, const SecondFundamentalForm& h) {
    p.require_supercritical();
    if (p.n < 5) throw std::invalid_argument("delta_order_balance: needs n >= 5");
    const Bubble b = Bubble::standard(p);
    DeltaOrderBalance out;
    double abs_i = 0.0, abs_b = 0.0;
    box_integral(p.n, 8.0,
                 [&](const HalfSpacePoint& x) {
                     return -p.K * std::pow(bubble_value(b, x), (p.n + 2.0) / (p.n - 2.0)) *
                            wp_value(p, h, x);
                 },
                 out.interior, abs_i);

    // boundary integral over R^{n-1}
    {
        std::vector<double> tn, tw;
        axis_nodes(8.0, tn, tw, true);
        const size_t tcount = tn.size();
        size_t total = 1;
        for (int a = 0; a < p.n - 1; ++a) total *= tcount;
        HalfSpacePoint x;
        x.tilde.resize(p.n - 1);
        x.xn = 0.0;
        double acc = 0.0;
        for (size_t flat = 0; flat < total; ++flat) {
            size_t rem = flat;
            double w = 1.0;
            for (int a = 0; a < p.n - 1; ++a) {
                const size_t idx = rem % tcount;
                rem /= tcount;
                x.tilde[a] = tn[idx];
                w *= tw[idx];
            }
            const double v = (p.n - 1.0) * p.H *
                             std::pow(bubble_value(b, x), p.n / (p.n - 2.0)) * wp_value(p, h, x);
            acc += w * v;
            abs_b += w * std::abs(v);
        }
        out.boundary = acc;
    }
    out.scale = std::max({abs_i, abs_b, 1e-300});
    return out;
}

}  // namespace ycl
