#include "ycl/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ycl/bubbles.hpp"
#include "ycl/correction.hpp"

namespace ycl {

double d0(const EnergyConstants& c, double pi_norm_sq) {
    if (!(pi_norm_sq > 1e-14))
        throw std::invalid_argument(
            "d0: |pi|^2 must be positive (the construction needs a non-umbilic point)");
    if (!(c.b_n > 0.0) || !(c.c_n_const > 0.0))
        throw std::invalid_argument("d0: requires positive b_n and c_n");
    return c.c_n_const / (2.0 * c.b_n * pi_norm_sq);
}

double rho_inverse(double eps) {
    const double upper = std::exp(-0.5);
    if (!(eps > 0.0) || !(eps < 0.5 * std::exp(-1.0)))
        throw std::invalid_argument("rho_inverse: eps must lie in (0, e^{-1}/2)");
    auto ell = [](double s) { return -s * std::log(s); };
    // unique root below 1/e; bisection bracket then Newton polish
    double lo = 1e-300, hi = std::exp(-1.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ell(mid) < eps)
            lo = mid;
        else
            hi = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const double f = ell(s) - eps;
        const double df = -std::log(s) - 1.0;
        const double step = f / df;
        double snew = s - step;
        if (!(snew > 0.0 && snew < upper)) break;
        s = snew;
        if (std::abs(f) < 1e-15 * eps) break;
    }
    if (std::abs(ell(s) - eps) > 1e-12)
        throw std::runtime_error("rho_inverse: root refinement failed");
    return s;
}

Schedule schedule(const ProblemParams& p, const ClusterConfig& cfg, double d0_value) {
    Schedule s;
    s.delta.resize(cfg.k);
    if (p.n >= 5) {
        s.eta = std::pow(cfg.eps, (p.n - 4.0) / p.n);
        for (int j = 0; j < cfg.k; ++j) s.delta[j] = cfg.eps * (d0_value + s.eta * cfg.d[j]);
        s.rho = 0.0;
    } else {
        s.rho = rho_inverse(cfg.eps);
        s.eta = std::pow(std::abs(std::log(s.rho)), -0.25);
        for (int j = 0; j < cfg.k; ++j) s.delta[j] = s.rho * (d0_value + s.eta * cfg.d[j]);
    }
    return s;
}

namespace {

double pair_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

void check_distinct(const ClusterConfig& cfg) {
    for (int i = 0; i < cfg.k; ++i)
        for (int j = i + 1; j < cfg.k; ++j)
            if (pair_dist(cfg.tau[static_cast<size_t>(i)], cfg.tau[static_cast<size_t>(j)]) < 1e-12)
                throw std::invalid_argument("F_n: coincident peak locations");
}

}  // namespace

double F_n(const ClusterConfig& cfg, const HessianForm& Q, const EnergyConstants& c,
           double pi_norm_sq, const ProblemParams& p) {
    check_distinct(cfg);
    const double d0v = d0(c, pi_norm_sq);
    const double inter = c.d_n / std::pow(-p.K, 0.5 * (p.n - 2.0)) * std::pow(d0v, p.n - 2.0);
    double val = 0.0;
    for (int i = 0; i < cfg.k; ++i) {
        val -= c.b_n * Q(cfg.tau[static_cast<size_t>(i)], cfg.tau[static_cast<size_t>(i)]);
        val -= c.b_n * pi_norm_sq * cfg.d[static_cast<size_t>(i)] * cfg.d[static_cast<size_t>(i)];
    }
    for (int i = 0; i < cfg.k; ++i)
        for (int j = i + 1; j < cfg.k; ++j)
            val -= inter / std::pow(pair_dist(cfg.tau[static_cast<size_t>(i)],
                                              cfg.tau[static_cast<size_t>(j)]),
                                    p.n - 2.0);
    return val;
}

Vec F_n_gradient(const ClusterConfig& cfg, const HessianForm& Q, const EnergyConstants& c,
                 double pi_norm_sq, const ProblemParams& p) {
    check_distinct(cfg);
    const int k = cfg.k;
    const int m = p.n - 1;
    const double d0v = d0(c, pi_norm_sq);
    const double inter = c.d_n / std::pow(-p.K, 0.5 * (p.n - 2.0)) * std::pow(d0v, p.n - 2.0);
    Vec g(static_cast<size_t>(k) + static_cast<size_t>(k) * m, 0.0);
    for (int i = 0; i < k; ++i)
        g[static_cast<size_t>(i)] = -2.0 * c.b_n * pi_norm_sq * cfg.d[static_cast<size_t>(i)];
    for (int i = 0; i < k; ++i) {
        for (int a = 0; a < m; ++a) {
            double s = 0.0;
            for (int bidx = 0; bidx < m; ++bidx)
                s += Q.at(a, bidx) * cfg.tau[static_cast<size_t>(i)][static_cast<size_t>(bidx)];
            g[static_cast<size_t>(k) + static_cast<size_t>(i) * m + a] = -2.0 * c.b_n * s;
        }
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            const double r =
                pair_dist(cfg.tau[static_cast<size_t>(i)], cfg.tau[static_cast<size_t>(j)]);
            const double w = inter * (p.n - 2.0) * std::pow(r, -p.n);
            for (int a = 0; a < m; ++a)
                g[static_cast<size_t>(k) + static_cast<size_t>(i) * m + a] +=
                    w * (cfg.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] -
                         cfg.tau[static_cast<size_t>(j)][static_cast<size_t>(a)]);
        }
    }
    return g;
}

double two_peak_scale(const EnergyConstants& c, double q, double d0_value,
                      const ProblemParams& p) {
    const int n = p.n;
    return std::pow((n - 2.0) * c.d_n * std::pow(d0_value, n - 2.0) /
                        (c.b_n * q * std::pow(-p.K, 0.5 * (n - 2.0)) * std::pow(2.0, n)),
                    1.0 / n);
}

namespace {

struct Flat {
    // packing: (d_1..d_k, tau coords)
    static ClusterConfig unpack(const Vec& v, int k, int m, double eps) {
        ClusterConfig cfg;
        cfg.k = k;
        cfg.eps = eps;
        cfg.d.assign(v.begin(), v.begin() + k);
        cfg.tau.resize(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i)
            cfg.tau[static_cast<size_t>(i)] =
                Vec(v.begin() + k + static_cast<long>(i) * m, v.begin() + k + static_cast<long>(i + 1) * m);
        return cfg;
    }
    static Vec pack(const ClusterConfig& cfg) {
        Vec v = cfg.d;
        for (const Vec& t : cfg.tau) v.insert(v.end(), t.begin(), t.end());
        return v;
    }
};

double min_pair_dist(const ClusterConfig& cfg) {
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.k; ++i)
        for (int j = i + 1; j < cfg.k; ++j)
            r = std::min(r, pair_dist(cfg.tau[static_cast<size_t>(i)],
                                      cfg.tau[static_cast<size_t>(j)]));
    return r;
}

// Solve H s = g by Gaussian elimination with partial pivoting.
bool solve_linear(std::vector<double> H, Vec g, Vec& s) {
    const int m = static_cast<int>(g.size());
    s.assign(static_cast<size_t>(m), 0.0);
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(H[static_cast<size_t>(r) * m + col]) >
                std::abs(H[static_cast<size_t>(piv) * m + col]))
                piv = r;
        if (std::abs(H[static_cast<size_t>(piv) * m + col]) < 1e-300) return false;
        if (piv != col) {
            for (int cc = 0; cc < m; ++cc)
                std::swap(H[static_cast<size_t>(piv) * m + cc], H[static_cast<size_t>(col) * m + cc]);
            std::swap(g[static_cast<size_t>(piv)], g[static_cast<size_t>(col)]);
        }
        for (int r = col + 1; r < m; ++r) {
            const double f = H[static_cast<size_t>(r) * m + col] / H[static_cast<size_t>(col) * m + col];
            for (int cc = col; cc < m; ++cc)
                H[static_cast<size_t>(r) * m + cc] -= f * H[static_cast<size_t>(col) * m + cc];
            g[static_cast<size_t>(r)] -= f * g[static_cast<size_t>(col)];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        double acc = g[static_cast<size_t>(r)];
        for (int cc = r + 1; cc < m; ++cc) acc -= H[static_cast<size_t>(r) * m + cc] * s[static_cast<size_t>(cc)];
        s[static_cast<size_t>(r)] = acc / H[static_cast<size_t>(r) * m + r];
    }
    return true;
}

}  // namespace

OptimizeResult optimize_cluster(int k, const HessianForm& Q, const EnergyConstants& c,
                                double pi_norm_sq, const ProblemParams& p,
                                const std::vector<std::uint64_t>& seeds) {
    if (!Q.positive_definite())
        throw std::invalid_argument("optimize_cluster: Q must be positive definite");
    const int m = p.n - 1;
    const int dim = k + k * m;
    const double d0v = d0(c, pi_norm_sq);

    double qbar = 0.0;
    for (int a = 0; a < m; ++a) qbar += Q.at(a, a);
    qbar /= m;
    const double r0 = k == 1 ? 0.0 : two_peak_scale(c, qbar, d0v, p);

    auto value_of = [&](const Vec& v) {
        return F_n(Flat::unpack(v, k, m, 0.0), Q, c, pi_norm_sq, p);
    };
    auto grad_of = [&](const Vec& v) {
        return F_n_gradient(Flat::unpack(v, k, m, 0.0), Q, c, pi_norm_sq, p);
    };
    auto project = [&](Vec& v) {
        for (int i = 0; i < k; ++i) v[static_cast<size_t>(i)] = std::max(0.0, v[static_cast<size_t>(i)]);
    };
    // projected gradient: zero out components pushing into the active d bound
    auto projected_grad = [&](const Vec& v, Vec g) {
        for (int i = 0; i < k; ++i)
            if (v[static_cast<size_t>(i)] <= 0.0 && g[static_cast<size_t>(i)] < 0.0)
                g[static_cast<size_t>(i)] = 0.0;
        return g;
    };
    auto norm = [](const Vec& v) {
        double s = 0.0;
        for (double t : v) s += t * t;
        return std::sqrt(s);
    };

    OptimizeResult best;
    best.value = -std::numeric_limits<double>::infinity();

    for (size_t sidx = 0; sidx < seeds.size(); ++sidx) {
        SampleRng rng(seeds[sidx]);
        // seed: k points on a circle of radius r0 in the first two coordinates
        Vec v(static_cast<size_t>(dim), 0.0);
        const double phase = 2.0 * pi * rng.uniform();
        for (int i = 0; i < k; ++i) {
            const double ang = phase + 2.0 * pi * i / std::max(1, k);
            if (k > 1) {
                v[static_cast<size_t>(k + i * m + 0)] = r0 * std::cos(ang) * (1.0 + 0.05 * rng.uniform());
                if (m >= 2) v[static_cast<size_t>(k + i * m + 1)] = r0 * std::sin(ang) * (1.0 + 0.05 * rng.uniform());
            }
        }

        bool ok = true;
        double fv = value_of(v);
        // ascent with backtracking on the projected direction
        double step = std::max(1e-3 * (r0 > 0 ? r0 : 1.0), 1e-6);
        for (int it = 0; it < 4000; ++it) {
            Vec g = projected_grad(v, grad_of(v));
            const double gn = norm(g);
            if (gn < 1e-12) break;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt) {
                Vec w = v;
                for (int d = 0; d < dim; ++d) w[static_cast<size_t>(d)] += step * g[static_cast<size_t>(d)];
                project(w);
                if (min_pair_dist(Flat::unpack(w, k, m, 0.0)) < 1e-8) {
                    step *= 0.5;
                    continue;
                }
                const double fw = value_of(w);
                if (fw > fv) {
                    v = w;
                    fv = fw;
                    step *= 1.6;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }

        // Newton polish on the free variables (active d stay at 0)
        for (int it = 0; it < 60; ++it) {
            Vec g = projected_grad(v, grad_of(v));
            std::vector<int> free;
            for (int d = 0; d < dim; ++d)
                if (!(d < k && v[static_cast<size_t>(d)] <= 0.0)) free.push_back(d);
            const int fm = static_cast<int>(free.size());
            Vec gf(static_cast<size_t>(fm));
            for (int a = 0; a < fm; ++a) gf[static_cast<size_t>(a)] = g[static_cast<size_t>(free[static_cast<size_t>(a)])];
            if (norm(gf) < 1e-13) break;
            // FD Hessian on the free block
            std::vector<double> Hm(static_cast<size_t>(fm) * fm, 0.0);
            const double hstep = 1e-6 * std::max(1.0, r0);
            for (int a = 0; a < fm; ++a) {
                Vec vp = v, vm = v;
                vp[static_cast<size_t>(free[static_cast<size_t>(a)])] += hstep;
                vm[static_cast<size_t>(free[static_cast<size_t>(a)])] -= hstep;
                const Vec gp = grad_of(vp);
                const Vec gm = grad_of(vm);
                for (int bidx = 0; bidx < fm; ++bidx)
                    Hm[static_cast<size_t>(a) * fm + bidx] =
                        (gp[static_cast<size_t>(free[static_cast<size_t>(bidx)])] -
                         gm[static_cast<size_t>(free[static_cast<size_t>(bidx)])]) /
                        (2.0 * hstep);
            }
            Vec s;
            if (!solve_linear(Hm, gf, s)) break;
            Vec w = v;
            for (int a = 0; a < fm; ++a) w[static_cast<size_t>(free[static_cast<size_t>(a)])] -= s[static_cast<size_t>(a)];
            project(w);
            if (min_pair_dist(Flat::unpack(w, k, m, 0.0)) < 1e-8) break;
            const double fw = value_of(w);
            if (!std::isfinite(fw)) break;
            v = w;
            fv = fw;
        }

        const double gn = norm(projected_grad(v, grad_of(v)));
        if (!ok) continue;
        if (fv > best.value + 1e-15 || (std::abs(fv - best.value) <= 1e-15 && best.best_seed < 0)) {
            best.value = fv;
            best.config = Flat::unpack(v, k, m, 0.0);
            best.grad_norm = gn;
            best.converged = gn <= 1e-10;
            best.best_seed = static_cast<int>(sidx);
        }
    }
    if (best.best_seed < 0) throw std::runtime_error("optimize_cluster: all starts failed");
    return best;
}

double reduced_energy_expansion(const ClusterConfig& cfg, const ProblemParams& p,
                                const EnergyConstants& c, const HessianForm& Q,
                                double pi_norm_sq) {
    const double d0v = d0(c, pi_norm_sq);
    double theta, Theta;
    if (p.n >= 5) {
        theta = cfg.eps * cfg.eps;
        Theta = std::pow(cfg.eps, 4.0 * (p.n - 2.0) / p.n);
    } else {
        const double rho = rho_inverse(cfg.eps);
        theta = Theta = rho * rho * std::abs(std::log(rho));
    }
    return cfg.k * c.E +
           cfg.k * theta * (c.c_n_const * d0v - c.b_n * pi_norm_sq * d0v * d0v) +
           Theta * F_n(cfg, Q, c, pi_norm_sq, p);
}

double approximate_solution_field(const ClusterConfig& cfg, const ProblemParams& p,
                                  const Schedule& s, const SecondFundamentalForm* h,
                                  const HalfSpacePoint& x) {
    double val = 0.0;
    for (int j = 0; j < cfg.k; ++j) {
        const double dj = s.delta[static_cast<size_t>(j)];
        HalfSpacePoint local;
        local.tilde.resize(x.tilde.size());
        for (size_t a = 0; a < x.tilde.size(); ++a)
            local.tilde[a] = (x.tilde[a] - s.eta * cfg.tau[static_cast<size_t>(j)][a]) / dj;
        local.xn = x.xn / dj;
        Bubble b = Bubble::standard(p);
        const double scale = std::pow(dj, -0.5 * (p.n - 2.0));
        double block = scale * bubble_value(b, local);
        if (h != nullptr) {
            const double corr =
                p.n >= 5 ? wp_value(p, *h, local) : wbar0_value(p, *h, local);
            block += dj * scale * corr;
        }
        val += block;
    }
    return val;
}

}  // namespace ycl
