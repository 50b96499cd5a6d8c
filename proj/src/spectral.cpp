#include "ycl/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ycl/bubbles.hpp"

namespace ycl {

BallGeometry ball_radius(const ProblemParams& p) {
    p.require_supercritical();
    BallGeometry g;
    const double D = p.Dn;
    g.R = D - std::sqrt(D * D - 1.0);
    g.T = std::log((1.0 + g.R) / (1.0 - g.R));
    return g;
}

namespace {

// coth(t) - 1/t, stable near zero
double coth_minus_inv(double t) {
    if (t < 0.05) {
        const double t2 = t * t;
        return t * (1.0 / 3.0 + t2 * (-1.0 / 45.0 + t2 * (2.0 / 945.0)));
    }
    return std::cosh(t) / std::sinh(t) - 1.0 / t;
}

// 1/sinh^2(t) - 1/t^2, stable near zero
double sinh2_minus_inv(double t) {
    if (t < 0.05) {
        const double t2 = t * t;
        return -1.0 / 3.0 + t2 * (1.0 / 15.0 - t2 * (2.0 / 189.0));
    }
    const double s = std::sinh(t);
    return 1.0 / (s * s) - 1.0 / (t * t);
}

// Substituted unknown u with gamma = t^i u removes the regular singular point:
//   u'' + [2i/t + (n-1) coth t] u' + q(t) u = 0,
//   q(t) = (n-1) i (coth t - 1/t)/t - i(i+n-2) (1/sinh^2 t - 1/t^2) - n.
struct ModeOde {
    int n, i;
    void rhs(double t, const double y[2], double dy[2]) const {
        const double cp = 2.0 * i / t + (n - 1) * (1.0 / t + coth_minus_inv(t));
        const double q = (n - 1) * i * coth_minus_inv(t) / t -
                         static_cast<double>(i) * (i + n - 2) * sinh2_minus_inv(t) -
                         static_cast<double>(n);
        dy[0] = y[1];
        dy[1] = -cp * y[1] - q * y[0];
    }
};

// Dormand-Prince 5(4) step; returns the embedded error estimate.
template <class Sys>
double dp45_step(const Sys& sys, double t, const double y[2], double h, double out[2]) {
    static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double e[7] = {35.0 / 384 - 5179.0 / 57600,
                                0.0,
                                500.0 / 1113 - 7571.0 / 16695,
                                125.0 / 192 - 393.0 / 640,
                                -2187.0 / 6784 + 92097.0 / 339200,
                                11.0 / 84 - 187.0 / 2100,
                                -1.0 / 40};
    double k[7][2];
    double work[2];
    sys.rhs(t, y, k[0]);
    for (int s = 1; s < 7; ++s) {
        for (int d = 0; d < 2; ++d) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) acc += a[s][j] * k[j][d];
            work[d] = y[d] + h * acc;
        }
        sys.rhs(t + c[s] * h, work, k[s]);
    }
    double err = 0.0;
    for (int d = 0; d < 2; ++d) {
        out[d] = y[d] + h * (a[6][0] * k[0][d] + a[6][2] * k[2][d] + a[6][3] * k[3][d] +
                             a[6][4] * k[4][d] + a[6][5] * k[5][d]);
        double ed = h * (e[0] * k[0][d] + e[2] * k[2][d] + e[3] * k[3][d] + e[4] * k[4][d] +
                         e[5] * k[5][d] + e[6] * k[6][d]);
        err = std::max(err, std::abs(ed));
    }
    return err;
}

}  // namespace

RadialModeSolution solve_radial_mode(int n, int i, double T, double t0_factor, double tol) {
    if (n < 3) throw std::invalid_argument("solve_radial_mode: n must be >= 3");
    if (i < 0) throw std::invalid_argument("solve_radial_mode: harmonic index must be >= 0");
    if (!(T > 0.0)) throw std::invalid_argument("solve_radial_mode: T must be positive");

    RadialModeSolution sol;
    sol.harmonic_index = i;
    sol.T = T;

    // Series launch gamma = t^i (1 + a2 t^2 + O(t^4)).
    const double a2 = (3.0 * n - i * (2.0 * n - 3.0 + i)) / (6.0 * (2.0 * i + n));
    const double t0 = t0_factor * T;
    double y[2] = {1.0 + a2 * t0 * t0, 2.0 * a2 * t0};  // u, u'
    double t = t0;

    const ModeOde sys{n, i};
    auto record = [&](double tt, const double yy[2]) {
        const double ti = std::pow(tt, i);
        sol.t.push_back(tt);
        sol.gamma.push_back(ti * yy[0]);
        sol.gamma_prime.push_back(ti * (yy[1] + i * yy[0] / tt));
    };
    record(t, y);

    double h = std::min(1e-3 * T, T - t);
    const int max_steps = 2000000;
    int steps = 0;
    while (t < T) {
        if (++steps > max_steps)
            throw std::runtime_error("solve_radial_mode: step budget exhausted");
        if (t + h > T) h = T - t;
        double ynew[2];
        const double err = dp45_step(sys, t, y, h, ynew);
        const double scale = tol * (1.0 + std::max(std::abs(y[0]), std::abs(y[1])));
        if (err <= scale) {
            t += h;
            y[0] = ynew[0];
            y[1] = ynew[1];
            record(t, y);
            if (t >= T) break;
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (!(h > 1e-15 * T)) throw std::runtime_error("solve_radial_mode: step underflow");
    }
    return sol;
}

double RadialModeSolution::value_at(double s) const {
    if (s <= t.front()) {
        // power-law continuation below the launch point
        const double r = s / t.front();
        return gamma.front() * std::pow(r, harmonic_index);
    }
    if (s >= t.back()) return gamma.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const size_t k = static_cast<size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double u = (s - t[k]) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * gamma[k] + h10 * h * gamma_prime[k] + h01 * gamma[k + 1] +
           h11 * h * gamma_prime[k + 1];
}

double robin_ratio(const RadialModeSolution& sol) {
    if (sol.gamma_T() == 0.0)
        throw std::runtime_error("robin_ratio: node at the endpoint, ratio undefined");
    return sol.gamma_prime_T() / sol.gamma_T();
}

SteklovVerdict steklov_verdict(const ProblemParams& p, int imax) {
    const BallGeometry g = ball_radius(p);
    SteklovVerdict v;
    for (int i = 0; i <= imax; ++i) {
        const RadialModeSolution sol = solve_radial_mode(p.n, i, g.T);
        v.mu.push_back(robin_ratio(sol));
    }
    v.mu0 = v.mu[0];
    v.mu1 = v.mu.size() > 1 ? v.mu[1] : 0.0;
    v.multiplicity_at_D = 0;
    for (int i = 0; i <= imax; ++i)
        if (std::abs(v.mu[static_cast<size_t>(i)] - p.Dn) < 1e-6)
            v.multiplicity_at_D += harmonic_dim(p.n, i);
    return v;
}

namespace {

// Moebius automorphism of the unit ball sending a to the origin.
Vec moebius_to_origin(const Vec& a, const Vec& w) {
    const int n = static_cast<int>(w.size());
    double aa = 0.0, ww = 0.0, wa = 0.0, wma2 = 0.0;
    for (int k = 0; k < n; ++k) {
        aa += a[k] * a[k];
        ww += w[k] * w[k];
        wa += w[k] * a[k];
        const double d = w[k] - a[k];
        wma2 += d * d;
    }
    const double den = 1.0 - 2.0 * wa + ww * aa;
    Vec out(n);
    for (int k = 0; k < n; ++k) out[k] = ((1.0 - aa) * (w[k] - a[k]) - wma2 * a[k]) / den;
    return out;
}

// Row-major Jacobian of moebius_to_origin in w.
std::vector<double> moebius_jacobian(const Vec& a, const Vec& w) {
    const int n = static_cast<int>(w.size());
    double aa = 0.0, ww = 0.0, wa = 0.0, wma2 = 0.0;
    for (int k = 0; k < n; ++k) {
        aa += a[k] * a[k];
        ww += w[k] * w[k];
        wa += w[k] * a[k];
        const double d = w[k] - a[k];
        wma2 += d * d;
    }
    const double den = 1.0 - 2.0 * wa + ww * aa;
    std::vector<double> J(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        const double Nr = (1.0 - aa) * (w[r] - a[r]) - wma2 * a[r];
        for (int c = 0; c < n; ++c) {
            const double dN = (1.0 - aa) * (r == c ? 1.0 : 0.0) - 2.0 * (w[c] - a[c]) * a[r];
            const double dD = 2.0 * (aa * w[c] - a[c]);
            J[static_cast<size_t>(r) * n + c] = (dN * den - Nr * dD) / (den * den);
        }
    }
    return J;
}

Vec shifted(const ProblemParams& p, const HalfSpacePoint& x) {
    Vec y(p.n);
    for (int k = 0; k < p.n - 1; ++k) y[k] = x.tilde[k];
    y[p.n - 1] = x.xn + p.Dn;
    return y;
}

}  // namespace

CayleyMap::CayleyMap(const ProblemParams& p) : params(p) { R = ball_radius(p).R; }

Vec CayleyMap::forward(const HalfSpacePoint& x) const {
    const int n = params.n;
    Vec y = shifted(params, x);
    double yy = 0.0;
    for (double v : y) yy += v * v;
    Vec w(n);
    for (int k = 0; k < n; ++k) w[k] = y[k] / yy;
    Vec a(n, 0.0);
    a[n - 1] = R;
    return moebius_to_origin(a, w);
}

HalfSpacePoint CayleyMap::inverse(const Vec& z) const {
    const int n = params.n;
    Vec a(n, 0.0);
    a[n - 1] = -R;
    Vec w = moebius_to_origin(a, z);
    double ww = 0.0;
    for (double v : w) ww += v * v;
    HalfSpacePoint x;
    x.tilde.resize(n - 1);
    for (int k = 0; k < n - 1; ++k) x.tilde[k] = w[k] / ww;
    x.xn = w[n - 1] / ww - params.Dn;
    return x;
}

std::vector<double> CayleyMap::jacobian(const HalfSpacePoint& x) const {
    const int n = params.n;
    Vec y = shifted(params, x);
    double yy = 0.0;
    for (double v : y) yy += v * v;
    Vec w(n);
    for (int k = 0; k < n; ++k) w[k] = y[k] / yy;

    // D(inversion) = (I - 2 yhat yhat^T)/|y|^2
    std::vector<double> Ji(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            Ji[static_cast<size_t>(r) * n + c] =
                ((r == c ? 1.0 : 0.0) - 2.0 * y[r] * y[c] / yy) / yy;

    Vec a(n, 0.0);
    a[n - 1] = R;
    std::vector<double> Jm = moebius_jacobian(a, w);

    std::vector<double> J(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += Jm[static_cast<size_t>(r) * n + k] * Ji[static_cast<size_t>(k) * n + c];
            J[static_cast<size_t>(r) * n + c] = s;
        }
    return J;
}

double conformal_factor_check(const ProblemParams& p, const HalfSpacePoint& x) {
    const int n = p.n;
    const CayleyMap map(p);
    const Vec z = map.forward(x);
    double zz = 0.0;
    for (double v : z) zz += v * v;
    const std::vector<double> J = map.jacobian(x);

    const double lam = 4.0 / ((1.0 - zz) * (1.0 - zz));
    const double d = denom(p, x);
    const double target = 4.0 / (d * d);

    double dev = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += J[static_cast<size_t>(k) * n + r] * J[static_cast<size_t>(k) * n + c];
            const double got = lam * s;
            const double want = (r == c) ? target : 0.0;
            dev = std::max(dev, std::abs(got - want) / target);
        }
    return dev;
}

double ball_mode_one(const Vec& z, int i) {
    double zz = 0.0;
    for (double v : z) zz += v * v;
    return z[static_cast<size_t>(i) - 1] / (1.0 - zz);
}

double kernel_transfer_check(const ProblemParams& p, int i, int samples, std::uint64_t seed) {
    p.require_supercritical();
    const CayleyMap map(p);
    const Bubble b = Bubble::standard(p);
    const double kpow = std::pow(-p.K, 0.25 * (p.n - 2));

    SampleRng rng(seed);
    std::vector<double> ratios;
    ratios.reserve(static_cast<size_t>(samples));
    while (static_cast<int>(ratios.size()) < samples) {
        const HalfSpacePoint x = rng.half_space_point(p.n, 3.0, 3.0);
        const Vec z = map.forward(x);
        const double phi1 = ball_mode_one(z, i);
        if (std::abs(phi1) < 1e-3) continue;  // away from the mode's zero set
        const double zhat = kernel_value(p, i, x) / (kpow * bubble_value(b, x));
        ratios.push_back(zhat / phi1);
    }
    std::vector<double> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + samples / 2, sorted.end());
    const double med = sorted[static_cast<size_t>(samples) / 2];
    double dev = 0.0;
    for (double r : ratios) dev = std::max(dev, std::abs(r - med) / std::abs(med));
    return dev;
}

}  // namespace ycl
