#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ycl/core.hpp"

namespace ycl {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
};

/// Thrown when the panel budget is exhausted; carries the best estimate so far.
struct QuadratureFailure : std::runtime_error {
    QuadratureResult best;
    explicit QuadratureFailure(const QuadratureResult& r)
        : std::runtime_error("adaptive quadrature did not converge"), best(r) {}
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (QUADPACK constants).
inline constexpr double gk_node[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = gk_wk[7] * fc;
    double g = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk_node[i];
        const double s = f(c + dx) + f(c - dx);
        k += gk_wk[i] * s;
        if (i % 2 == 1) g += gk_wg[i / 2] * s;
    }
    value = k * h;
    const double diff = std::abs(k - g) * std::abs(h);
    // QUADPACK-style sharpened estimate
    err = diff > 0.0 ? std::min(diff, std::pow(200.0 * diff, 1.5)) : 0.0;
}

}  // namespace detail

/// Deterministic adaptive Gauss-Kronrod integration of f over the finite
/// interval [a, b] to absolute tolerance tol. Panels are split worst-first;
/// accumulation uses compensated summation so results do not depend on
/// evaluation grouping.
template <class F>
QuadratureResult adaptive_integrate(const F& f, double a, double b, double tol,
                                    int max_panels = 20000,
                                    const std::vector<double>& seed_breaks = {}) {
    struct Panel {
        double a, b, value, err;
    };
    std::vector<Panel> panels;
    long evals = 0;
    auto push = [&](double pa, double pb) {
        Panel p{pa, pb, 0.0, 0.0};
        detail::gk15(f, pa, pb, p.value, p.err);
        evals += 15;
        panels.push_back(p);
    };
    if (seed_breaks.empty()) {
        push(a, b);
    } else {
        double prev = a;
        for (double s : seed_breaks) {
            if (s > prev && s < b) {
                push(prev, s);
                prev = s;
            }
        }
        push(prev, b);
    }

    auto total = [&] {
        QuadratureResult r;
        double cv = 0.0, ce = 0.0;  // Kahan compensations
        for (const Panel& p : panels) {
            double y = p.value - cv, t = r.value + y;
            cv = (t - r.value) - y;
            r.value = t;
            double ye = p.err - ce, te = r.abs_error + ye;
            ce = (te - r.abs_error) - ye;
            r.abs_error = te;
        }
        r.evaluations = evals;
        return r;
    };

    while (true) {
        QuadratureResult r = total();
        if (r.abs_error <= tol) return r;
        if (static_cast<int>(panels.size()) >= max_panels) throw QuadratureFailure(r);
        // split the worst panel; ties resolved by position for determinism
        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel p = panels[worst];
        panels.erase(panels.begin() + static_cast<long>(worst));
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            // interval at roundoff limit; accept its estimate as-is
            panels.push_back(p);
            QuadratureResult rr = total();
            if (rr.abs_error <= tol * 4.0) return rr;
            throw QuadratureFailure(rr);
        }
        push(p.a, mid);
        push(mid, p.b);
    }
}

/// Integral of f over [a, +inf) via the rational substitution t = a + s/(1-s).
template <class F>
QuadratureResult integrate_to_infinity(const F& f, double a, double tol,
                                       int max_panels = 20000) {
    auto g = [&](double s) {
        const double om = 1.0 - s;
        const double t = a + s / om;
        return f(t) / (om * om);
    };
    // graded seed panels: integrands here typically decay fast in t
    static const std::vector<double> breaks{1e-3, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999};
    return adaptive_integrate(g, 0.0, 1.0 - 1e-14, tol, max_panels, breaks);
}

/// I_m^alpha = int_0^inf rho^alpha / (1+rho^2)^m drho, Beta closed form.
double i_integral(double m, double alpha);
/// Same integral by the adaptive oracle (test cross-check).
double i_integral_quadrature(double m, double alpha, double tol = 1e-12);

/// phi_m(D) = int_D^inf (t^2-1)^{-m} dt; requires D > 1, m > 1/2.
double phi(double m, double D, double tol = 1e-12);
/// phi_hat_m(D) = int_D^inf (t-D)^2 (t^2-1)^{-m} dt; requires m > 3/2.
double phi_hat(double m, double D, double tol = 1e-12);

/// int_{R^n_+} |x~|^alpha / denom^m dx, closed form via I and phi.
double half_space_moment(const ProblemParams& p, double alpha, double m);
double half_space_moment_oracle(const ProblemParams& p, double alpha, double m);

/// int_{R^{n-1}} |x~|^alpha / (|x~|^2 + D^2 - 1)^m dx~.
double boundary_moment(const ProblemParams& p, double alpha, double m);
double boundary_moment_oracle(const ProblemParams& p, double alpha, double m);

/// int_{R^n_+} x_n^2 |x~|^alpha / denom^m dx, closed form via I and phi_hat.
double weighted_moment(const ProblemParams& p, double alpha, double m);
double weighted_moment_oracle(const ProblemParams& p, double alpha, double m);

}  // namespace ycl
