#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ycl/reduction.hpp"

using namespace ycl;

namespace {

EnergyConstants toy_constants(const ProblemParams& p, double b, double c, double d) {
    EnergyConstants out;
    out.n = p.n;
    out.K = p.K;
    out.H = p.H;
    out.Dn = p.Dn;
    out.b_n = b;
    out.c_n_const = c;
    out.d_n = d;
    out.E = 1.0;
    return out;
}

}  // namespace

TEST_CASE("d0 quotient") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    EnergyConstants c = toy_constants(p, 1.0, 1.0, 1.0);
    CHECK(d0(c, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(d0(c, 0.0), std::invalid_argument);

    // d0 maximises eps*delta*c - delta^2 b |pi|^2 at eps = 1
    const double pi2 = 2.0;
    const double dv = d0(c, pi2);
    auto f = [&](double del) { return del * c.c_n_const - del * del * c.b_n * pi2; };
    CHECK(f(dv) > f(dv + 1e-4));
    CHECK(f(dv) > f(dv - 1e-4));
}

TEST_CASE("rho inversion") {
    const double r = rho_inverse(0.1);
    CHECK(r == doctest::Approx(0.02804).epsilon(1e-3));
    for (double eps : {0.17, 0.1, 0.03, 1e-3, 1e-6}) {
        const double s = rho_inverse(eps);
        CHECK(-s * std::log(s) == doctest::Approx(eps).epsilon(1e-12));
        CHECK(s < eps);  // -log s > 1 on the small branch
    }
    CHECK_THROWS_AS(rho_inverse(0.0), std::invalid_argument);
    CHECK_THROWS_AS(rho_inverse(0.2), std::invalid_argument);
}

TEST_CASE("schedules") {
    const ProblemParams p5 = params_for_ratio(5, 2.0);
    ClusterConfig cfg;
    cfg.k = 2;
    cfg.d = {0.0, 1.0};
    cfg.tau = {{1.0, 0, 0, 0}, {-1.0, 0, 0, 0}};
    cfg.eps = 1e-4;
    const Schedule s5 = schedule(p5, cfg, 0.7);
    CHECK(s5.eta == doctest::Approx(std::pow(1e-4, 0.2)).epsilon(1e-12));
    CHECK(s5.delta[0] == doctest::Approx(1e-4 * 0.7).epsilon(1e-12));
    CHECK(s5.delta[1] == doctest::Approx(1e-4 * (0.7 + s5.eta)).epsilon(1e-12));

    const ProblemParams p4 = params_for_ratio(4, 2.0);
    cfg.eps = 0.1;
    const Schedule s4 = schedule(p4, cfg, 0.7);
    CHECK(s4.rho == doctest::Approx(rho_inverse(0.1)).epsilon(1e-13));
    CHECK(s4.eta == doctest::Approx(std::pow(std::abs(std::log(s4.rho)), -0.25)).epsilon(1e-13));

    // delta_j / eps -> d0 as eps -> 0 (Richardson trend)
    double prev_gap = 1e9;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        cfg.eps = eps;
        const Schedule s = schedule(p5, cfg, 0.7);
        const double gap = std::abs(s.delta[1] / eps - 0.7);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("reduced energy value and gradient") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const EnergyConstants c = toy_constants(p, 2.0, 3.0, 1.5);
    const HessianForm Q = HessianForm::isotropic(5, 1.0);
    const double pi2 = 1.0;

    // k = 1: no interaction term
    ClusterConfig one;
    one.k = 1;
    one.d = {0.5};
    one.tau = {{0.3, -0.2, 0.1, 0.0}};
    const double want = -c.b_n * Q(one.tau[0], one.tau[0]) - c.b_n * pi2 * 0.25;
    CHECK(F_n(one, Q, c, pi2, p) == doctest::Approx(want).epsilon(1e-13));

    // value decreases as two points approach
    ClusterConfig two;
    two.k = 2;
    two.d = {0.0, 0.0};
    two.tau = {{0.4, 0, 0, 0}, {-0.4, 0, 0, 0}};
    const double far = F_n(two, Q, c, pi2, p);
    two.tau[1][0] = 0.38;
    CHECK(F_n(two, Q, c, pi2, p) < far);
    two.tau[1][0] = 0.4;
    CHECK_THROWS_AS(F_n(two, Q, c, pi2, p), std::invalid_argument);

    // gradient against central differences at random admissible configurations
    SampleRng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        ClusterConfig cfg;
        cfg.k = 3;
        cfg.d = {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
        cfg.tau.resize(3);
        for (auto& t : cfg.tau) {
            t.resize(4);
            for (double& v : t) v = rng.uniform(-1.0, 1.0);
        }
        // keep the points separated
        cfg.tau[1][0] += 2.0;
        cfg.tau[2][1] += 2.0;
        const Vec g = F_n_gradient(cfg, Q, c, pi2, p);
        const double h = 1e-6;
        int idx = 0;
        for (int i = 0; i < 3; ++i, ++idx) {
            ClusterConfig up = cfg, dn = cfg;
            up.d[static_cast<size_t>(i)] += h;
            dn.d[static_cast<size_t>(i)] -= h;
            const double fd = (F_n(up, Q, c, pi2, p) - F_n(dn, Q, c, pi2, p)) / (2 * h);
            CHECK(g[static_cast<size_t>(idx)] == doctest::Approx(fd).epsilon(1e-6));
        }
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 4; ++a, ++idx) {
                ClusterConfig up = cfg, dn = cfg;
                up.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] += h;
                dn.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] -= h;
                const double fd = (F_n(up, Q, c, pi2, p) - F_n(dn, Q, c, pi2, p)) / (2 * h);
                CHECK(g[static_cast<size_t>(idx)] == doctest::Approx(fd).epsilon(1e-6));
            }
    }

    // symmetric two-point configuration has gradient along the axis
    ClusterConfig sym;
    sym.k = 2;
    sym.d = {0.0, 0.0};
    sym.tau = {{0.4, 0, 0, 0}, {-0.4, 0, 0, 0}};
    const Vec g = F_n_gradient(sym, Q, c, pi2, p);
    for (int i = 0; i < 2; ++i)
        for (int a = 1; a < 4; ++a)
            CHECK(std::abs(g[static_cast<size_t>(2 + i * 4 + a)]) < 1e-14);
}

TEST_CASE("optimizer closed-form checks") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    EnergyConstants c = toy_constants(p, 2.0, 3.0, 1.5);
    const double q = 1.3;
    const HessianForm Q = HessianForm::isotropic(5, q);
    const double pi2 = 0.8;
    const double dv = d0(c, pi2);

    // k = 1 collapses to the origin
    const OptimizeResult r1 = optimize_cluster(1, Q, c, pi2, p, {1, 2});
    CHECK(r1.converged);
    CHECK(std::abs(r1.config.d[0]) < 1e-12);
    for (double v : r1.config.tau[0]) CHECK(std::abs(v) < 1e-10);

    // k = 2 antipodal pair at the closed-form radius
    const OptimizeResult r2 = optimize_cluster(2, Q, c, pi2, p, {1, 2, 3});
    CHECK(r2.converged);
    const double tstar = two_peak_scale(c, q, dv, p);
    double n0 = 0.0, n1 = 0.0, dot = 0.0;
    for (int a = 0; a < 4; ++a) {
        n0 += r2.config.tau[0][static_cast<size_t>(a)] * r2.config.tau[0][static_cast<size_t>(a)];
        n1 += r2.config.tau[1][static_cast<size_t>(a)] * r2.config.tau[1][static_cast<size_t>(a)];
        dot += r2.config.tau[0][static_cast<size_t>(a)] * r2.config.tau[1][static_cast<size_t>(a)];
    }
    CHECK(std::sqrt(n0) == doctest::Approx(tstar).epsilon(1e-6));
    CHECK(std::sqrt(n1) == doctest::Approx(tstar).epsilon(1e-6));
    CHECK(dot / (std::sqrt(n0) * std::sqrt(n1)) == doctest::Approx(-1.0).epsilon(1e-6));

    // k = 3 equilateral triangle
    const OptimizeResult r3 = optimize_cluster(3, Q, c, pi2, p, {1, 2, 3, 4});
    CHECK(r3.converged);
    std::vector<double> dists;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double s = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double dd = r3.config.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] -
                                  r3.config.tau[static_cast<size_t>(j)][static_cast<size_t>(a)];
                s += dd * dd;
            }
            dists.push_back(std::sqrt(s));
        }
    CHECK(dists[1] == doctest::Approx(dists[0]).epsilon(1e-6));
    CHECK(dists[2] == doctest::Approx(dists[0]).epsilon(1e-6));

    // rotation equivariance of the value for isotropic Q
    ClusterConfig rot = r3.config;
    const double ang = 0.7;
    for (auto& t : rot.tau) {
        const double a0 = t[0], a1 = t[1];
        t[0] = std::cos(ang) * a0 - std::sin(ang) * a1;
        t[1] = std::sin(ang) * a0 + std::cos(ang) * a1;
    }
    CHECK(F_n(rot, Q, c, pi2, p) == doctest::Approx(r3.value).epsilon(1e-12));

    // projected Hessian at the k = 2 optimum is negative semidefinite along
    // random directions (active d components excluded)
    SampleRng rng(99);
    auto value_at = [&](const ClusterConfig& cfg) { return F_n(cfg, Q, c, pi2, p); };
    for (int trial = 0; trial < 10; ++trial) {
        ClusterConfig up = r2.config, dn = r2.config;
        std::vector<double> dir(8);
        for (double& v : dir) v = rng.uniform(-1.0, 1.0);
        const double h = 1e-4;
        for (int i = 0; i < 2; ++i)
            for (int a = 0; a < 4; ++a) {
                up.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] += h * dir[static_cast<size_t>(i * 4 + a)];
                dn.tau[static_cast<size_t>(i)][static_cast<size_t>(a)] -= h * dir[static_cast<size_t>(i * 4 + a)];
            }
        const double second = value_at(up) - 2.0 * r2.value + value_at(dn);
        CHECK(second <= 1e-8);
    }
}

TEST_CASE("reduced energy expansion") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    EnergyConstants c = toy_constants(p, 2.0, 3.0, 1.5);
    const HessianForm Q = HessianForm::isotropic(5, 1.0);
    const double pi2 = 0.8;
    ClusterConfig cfg;
    cfg.k = 2;
    cfg.d = {0.0, 0.0};
    cfg.tau = {{0.5, 0, 0, 0}, {-0.5, 0, 0, 0}};

    // eps -> 0 limit is k E
    cfg.eps = 1e-9;
    CHECK(reduced_energy_expansion(cfg, p, c, Q, pi2) == doctest::Approx(2.0 * c.E).epsilon(1e-5));

    // the theta coefficient equals the vertex value c^2/(4 b |pi|^2)
    cfg.eps = 1e-3;
    const double dv = d0(c, pi2);
    const double vertex = c.c_n_const * c.c_n_const / (4.0 * c.b_n * pi2);
    const double theta = cfg.eps * cfg.eps;
    const double Theta = std::pow(cfg.eps, 4.0 * 3.0 / 5.0);
    const double expect = 2.0 * c.E + 2.0 * theta * vertex + Theta * F_n(cfg, Q, c, pi2, p);
    CHECK(reduced_energy_expansion(cfg, p, c, Q, pi2) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(c.c_n_const * dv - c.b_n * pi2 * dv * dv == doctest::Approx(vertex).epsilon(1e-13));

    // Theta_5 = eps^{12/5}
    CHECK(Theta == doctest::Approx(std::pow(cfg.eps, 2.4)).epsilon(1e-13));
}

TEST_CASE("ansatz field") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    ClusterConfig cfg;
    cfg.k = 1;
    cfg.d = {0.0};
    cfg.tau = {{0.0, 0.0, 0.0, 0.0}};
    cfg.eps = 1e-3;
    const Schedule s = schedule(p, cfg, 0.7);

    // single block: the peak sits at the origin and scales like delta^{-3/2}
    HalfSpacePoint origin{{0, 0, 0, 0}, 0.0};
    const double peak = approximate_solution_field(cfg, p, s, nullptr, origin);
    HalfSpacePoint off{{0.05, 0, 0, 0}, 0.0};
    CHECK(peak > approximate_solution_field(cfg, p, s, nullptr, off));

    ClusterConfig cfg2 = cfg;
    cfg2.eps = 2e-3;
    const Schedule s2 = schedule(p, cfg2, 0.7);
    const double peak2 = approximate_solution_field(cfg2, p, s2, nullptr, origin);
    const double want = std::pow(s2.delta[0] / s.delta[0], -1.5);
    CHECK(peak2 / peak == doctest::Approx(want).epsilon(1e-10));

    // two separated peaks appear at eta tau_j
    ClusterConfig two;
    two.k = 2;
    two.d = {0.0, 0.0};
    two.tau = {{1.0, 0, 0, 0}, {-1.0, 0, 0, 0}};
    two.eps = 1e-3;
    const Schedule st = schedule(p, two, 0.7);
    HalfSpacePoint at_peak{{st.eta, 0, 0, 0}, 0.0};
    HalfSpacePoint between{{0, 0, 0, 0}, 0.0};
    CHECK(approximate_solution_field(two, p, st, nullptr, at_peak) >
          approximate_solution_field(two, p, st, nullptr, between));
}
