#include "ycl/quadrature.hpp"

namespace ycl {

double i_integral(double m, double alpha) {
    if (!(alpha > -1.0)) throw std::invalid_argument("i_integral: alpha must exceed -1");
    if (!(alpha + 1.0 < 2.0 * m))
        throw std::invalid_argument("i_integral: divergent, needs alpha + 1 < 2m");
    // 1/2 * B((alpha+1)/2, (2m-alpha-1)/2), evaluated through log-Gamma
    const double a = 0.5 * (alpha + 1.0);
    const double b = 0.5 * (2.0 * m - alpha - 1.0);
    return 0.5 * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(m));
}

double i_integral_quadrature(double m, double alpha, double tol) {
    if (!(alpha + 1.0 < 2.0 * m))
        throw std::invalid_argument("i_integral_quadrature: divergent parameters");
    auto f = [&](double rho) { return std::pow(rho, alpha) * std::pow(1.0 + rho * rho, -m); };
    return integrate_to_infinity(f, 0.0, tol).value;
}

double phi(double m, double D, double tol) {
    if (!(D > 1.0)) throw std::invalid_argument("phi: requires D > 1");
    if (!(m > 0.5)) throw std::invalid_argument("phi: divergent, requires m > 1/2");
    auto f = [&](double t) { return std::pow(t * t - 1.0, -m); };
    return integrate_to_infinity(f, D, tol).value;
}

double phi_hat(double m, double D, double tol) {
    if (!(D > 1.0)) throw std::invalid_argument("phi_hat: requires D > 1");
    if (!(m > 1.5)) throw std::invalid_argument("phi_hat: divergent, requires m > 3/2");
    auto f = [&](double t) {
        const double d = t - D;
        return d * d * std::pow(t * t - 1.0, -m);
    };
    return integrate_to_infinity(f, D, tol).value;
}

double half_space_moment(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n + alpha < 2.0 * m))
        throw std::invalid_argument("half_space_moment: divergent, needs n + alpha < 2m");
    return sphere_area(p.n - 1) * i_integral(m, p.n - 2 + alpha) *
           phi(0.5 * (2.0 * m - p.n - alpha + 1.0), p.Dn);
}

double boundary_moment(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n - 1 + alpha < 2.0 * m))
        throw std::invalid_argument("boundary_moment: divergent, needs n - 1 + alpha < 2m");
    const double ex = 0.5 * (p.n + alpha - 1.0 - 2.0 * m);
    return sphere_area(p.n - 1) * std::pow(p.Dn * p.Dn - 1.0, ex) * i_integral(m, p.n - 2 + alpha);
}

double weighted_moment(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n + 2 + alpha < 2.0 * m))
        throw std::invalid_argument("weighted_moment: divergent, needs n + 2 + alpha < 2m");
    return sphere_area(p.n - 1) * i_integral(m, p.n - 2 + alpha) *
           phi_hat(0.5 * (2.0 * m - p.n - alpha + 1.0), p.Dn);
}

namespace {

// Nested slice quadrature: outer over x_n, inner over the radial |x~| variable.
// Two passes, the first one only to set the absolute tolerance scale.
double nested_half_space(const ProblemParams& p, double alpha, double m, double weight_xn2) {
    auto inner = [&](double xn, double tol) {
        const double shift = (xn + p.Dn) * (xn + p.Dn) - 1.0;
        auto f = [&](double r) {
            return std::pow(r, p.n - 2 + alpha) * std::pow(r * r + shift, -m);
        };
        return integrate_to_infinity(f, 0.0, tol).value;
    };
    auto outer = [&](double tol_inner, double tol_outer) {
        auto f = [&](double xn) {
            double w = weight_xn2 != 0.0 ? xn * xn : 1.0;
            return w * inner(xn, tol_inner);
        };
        return integrate_to_infinity(f, 0.0, tol_outer).value;
    };
    const double pilot = outer(1e-6, 1e-4);
    const double scale = std::max(std::abs(pilot), 1e-30);
    return sphere_area(p.n - 1) * outer(1e-12 * scale, 1e-10 * scale);
}

}  // namespace

double half_space_moment_oracle(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n + alpha < 2.0 * m))
        throw std::invalid_argument("half_space_moment_oracle: divergent parameters");
    return nested_half_space(p, alpha, m, 0.0);
}

double weighted_moment_oracle(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n + 2 + alpha < 2.0 * m))
        throw std::invalid_argument("weighted_moment_oracle: divergent parameters");
    return nested_half_space(p, alpha, m, 1.0);
}

double boundary_moment_oracle(const ProblemParams& p, double alpha, double m) {
    p.require_supercritical();
    if (!(p.n - 1 + alpha < 2.0 * m))
        throw std::invalid_argument("boundary_moment_oracle: divergent parameters");
    const double shift = p.Dn * p.Dn - 1.0;
    auto f = [&](double r) {
        return std::pow(r, p.n - 2 + alpha) * std::pow(r * r + shift, -m);
    };
    const double pilot = integrate_to_infinity(f, 0.0, 1e-4).value;
    const double tol = 1e-12 * std::max(std::abs(pilot), 1e-30);
    return sphere_area(p.n - 1) * integrate_to_infinity(f, 0.0, tol).value;
}

}  // namespace ycl
