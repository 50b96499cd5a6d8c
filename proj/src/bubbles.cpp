#include "ycl/bubbles.hpp"

#include <cmath>

namespace ycl {

namespace {

// prefactor alpha_n / |K|^{(n-2)/4}
double amplitude(const ProblemParams& p) {
    return p.alpha_n * std::pow(-p.K, -0.25 * (p.n - 2));
}

// Rescale x to the unit bubble's frame: (x - y)/delta.
HalfSpacePoint to_unit_frame(const Bubble& b, const HalfSpacePoint& x) {
    HalfSpacePoint u;
    u.tilde.resize(x.tilde.size());
    for (size_t i = 0; i < x.tilde.size(); ++i)
        u.tilde[i] = (x.tilde[i] - (i < b.center.size() ? b.center[i] : 0.0)) / b.delta;
    u.xn = x.xn / b.delta;
    return u;
}

double dot_self(const Vec& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return s;
}

}  // namespace

Bubble Bubble::standard(const ProblemParams& p) {
    Bubble b;
    b.params = p;
    b.delta = 1.0;
    b.center.assign(p.n - 1, 0.0);
    return b;
}

double bubble_value(const Bubble& b, const HalfSpacePoint& x) {
    const ProblemParams& p = b.params;
    p.require_supercritical();
    const HalfSpacePoint u = to_unit_frame(b, x);
    const double d = denom(p, u);
    return std::pow(b.delta, -0.5 * (p.n - 2)) * amplitude(p) * std::pow(d, -0.5 * (p.n - 2));
}

BubbleDerivatives bubble_derivatives(const Bubble& b, const HalfSpacePoint& x) {
    const ProblemParams& p = b.params;
    p.require_supercritical();
    const int n = p.n;
    const HalfSpacePoint u = to_unit_frame(b, x);
    const double d = denom(p, u);
    const double A = amplitude(p);
    const double scale = std::pow(b.delta, -0.5 * (n - 2));

    // grad U = -A (n-2) y / d^{n/2} with y = (x~, x_n + D), in the unit frame;
    // Lap U = A n (n-2) / d^{(n+2)/2} because |y|^2 - d = 1 exactly.
    BubbleDerivatives out;
    out.gradient.resize(n);
    const double g = -A * (n - 2) * std::pow(d, -0.5 * n);
    for (int i = 0; i < n - 1; ++i) out.gradient[i] = scale / b.delta * g * u.tilde[i];
    out.gradient[n - 1] = scale / b.delta * g * (u.xn + p.Dn);
    out.laplacian = scale / (b.delta * b.delta) * A * n * (n - 2) * std::pow(d, -0.5 * (n + 2));
    return out;
}

double bubble_hessian(const ProblemParams& p, const HalfSpacePoint& x, int i, int j) {
    p.require_supercritical();
    const int n = p.n;
    const double d = denom(p, x);
    const double A = amplitude(p);
    const double yi = (i == n - 1) ? x.xn + p.Dn : x.tilde[i];
    const double yj = (j == n - 1) ? x.xn + p.Dn : x.tilde[j];
    double v = A * n * (n - 2) * yi * yj * std::pow(d, -0.5 * (n + 2));
    if (i == j) v -= A * (n - 2) * std::pow(d, -0.5 * n);
    return v;
}

double interior_residual(const Bubble& b, const HalfSpacePoint& x) {
    const ProblemParams& p = b.params;
    return interior_residual_exponent(b, x, (p.n + 2.0) / (p.n - 2.0));
}

double interior_residual_exponent(const Bubble& b, const HalfSpacePoint& x, double exponent) {
    const ProblemParams& p = b.params;
    const double lap = bubble_derivatives(b, x).laplacian;
    const double u = bubble_value(b, x);
    return -p.c_n * lap - p.K * std::pow(u, exponent);
}

double boundary_residual(const Bubble& b, const Vec& x_tilde) {
    const ProblemParams& p = b.params;
    HalfSpacePoint x{x_tilde, 0.0};
    const BubbleDerivatives d = bubble_derivatives(b, x);
    const double u = bubble_value(b, x);
    const double dnu = -d.gradient[p.n - 1];  // nu = -e_n
    return 2.0 / (p.n - 2) * dnu - p.H * std::pow(u, p.n / (p.n - 2.0));
}

double kernel_value(const ProblemParams& p, int i, const HalfSpacePoint& x) {
    p.require_supercritical();
    const int n = p.n;
    if (i < 1 || i > n) throw std::invalid_argument("kernel_value: index out of range");
    const double A = amplitude(p);
    const double d = denom(p, x);
    if (i < n) return A * (2 - n) * x.tilde[i - 1] * std::pow(d, -0.5 * n);
    const double P = dot_self(x.tilde) + x.xn * x.xn + 1.0 - p.Dn * p.Dn;
    return A * 0.5 * (n - 2) * P * std::pow(d, -0.5 * n);
}

Vec kernel_gradient(const ProblemParams& p, int i, const HalfSpacePoint& x) {
    const int n = p.n;
    const double A = amplitude(p);
    const double d = denom(p, x);
    Vec y(n);
    for (int k = 0; k < n - 1; ++k) y[k] = x.tilde[k];
    y[n - 1] = x.xn + p.Dn;

    Vec g(n, 0.0);
    if (i < n) {
        // z_i = A(2-n) x_i d^{-n/2}
        const double c = A * (2 - n);
        for (int k = 0; k < n; ++k)
            g[k] = -c * n * x.tilde[i - 1] * y[k] * std::pow(d, -0.5 * (n + 2));
        g[i - 1] += c * std::pow(d, -0.5 * n);
    } else {
        // z_n = B P d^{-n/2}, P = |x|^2 + 1 - D^2
        const double B = A * 0.5 * (n - 2);
        const double P = dot_self(x.tilde) + x.xn * x.xn + 1.0 - p.Dn * p.Dn;
        for (int k = 0; k < n; ++k) {
            const double xk = (k == n - 1) ? x.xn : x.tilde[k];
            g[k] = B * (2.0 * xk * std::pow(d, -0.5 * n) -
                        n * P * y[k] * std::pow(d, -0.5 * (n + 2)));
        }
    }
    return g;
}

double kernel_laplacian(const ProblemParams& p, int i, const HalfSpacePoint& x) {
    const int n = p.n;
    const double A = amplitude(p);
    const double d = denom(p, x);
    if (i < n) {
        // Lap z_i = d/dx_i Lap U = -A n(n-2)(n+2) x_i d^{-(n+4)/2}
        return -A * n * (n - 2) * (n + 2) * x.tilde[i - 1] * std::pow(d, -0.5 * (n + 4));
    }
    const double P = dot_self(x.tilde) + x.xn * x.xn + 1.0 - p.Dn * p.Dn;
    return A * n * (n - 2) * (n + 2) * 0.5 * P * std::pow(d, -0.5 * (n + 4));
}

double linearized_interior_residual(const ProblemParams& p, double value, double laplacian,
                                    const HalfSpacePoint& x) {
    const Bubble b = Bubble::standard(p);
    const double u = bubble_value(b, x);
    return -p.c_n * laplacian -
           (p.n + 2.0) / (p.n - 2.0) * p.K * std::pow(u, 4.0 / (p.n - 2.0)) * value;
}

LinearizedResiduals linearized_residuals(const ProblemParams& p, int i, const HalfSpacePoint& x) {
    p.require_supercritical();
    LinearizedResiduals r{};
    r.interior = linearized_interior_residual(p, kernel_value(p, i, x),
                                              kernel_laplacian(p, i, x), x);

    HalfSpacePoint xb{x.tilde, 0.0};
    const Bubble b = Bubble::standard(p);
    const double v = kernel_value(p, i, xb);
    const double dnu = -kernel_gradient(p, i, xb)[p.n - 1];
    const double u = bubble_value(b, xb);
    r.boundary = 2.0 / (p.n - 2) * dnu -
                 static_cast<double>(p.n) / (p.n - 2) * p.H * std::pow(u, 2.0 / (p.n - 2.0)) * v;
    return r;
}

}  // namespace ycl
