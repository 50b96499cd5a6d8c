#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ycl/bubbles.hpp"
#include "ycl/correction.hpp"

using namespace ycl;

namespace {

FieldJet monomial_xixj(const HalfSpacePoint& x, int i, int j, int n) {
    FieldJet q;
    q.value = x.tilde[static_cast<size_t>(i)] * x.tilde[static_cast<size_t>(j)];
    q.gradient.assign(static_cast<size_t>(n), 0.0);
    q.gradient[static_cast<size_t>(i)] += x.tilde[static_cast<size_t>(j)];
    q.gradient[static_cast<size_t>(j)] += x.tilde[static_cast<size_t>(i)];
    q.laplacian = (i == j) ? 2.0 : 0.0;
    return q;
}

FieldJet monomial_xixjxn(const HalfSpacePoint& x, int i, int j, int n) {
    FieldJet q;
    const double xi = x.tilde[static_cast<size_t>(i)];
    const double xj = x.tilde[static_cast<size_t>(j)];
    q.value = xi * xj * x.xn;
    q.gradient.assign(static_cast<size_t>(n), 0.0);
    q.gradient[static_cast<size_t>(i)] += xj * x.xn;
    q.gradient[static_cast<size_t>(j)] += xi * x.xn;
    q.gradient[static_cast<size_t>(n) - 1] = xi * xj;
    q.laplacian = 0.0;
    return q;
}

}  // namespace

TEST_CASE("forcing term basics") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const auto h = SecondFundamentalForm::single_pair(5, 0, 1, 0.7);
    // vanishes on the boundary and for h = 0
    HalfSpacePoint xb{{1.0, 2.0, 0.5, -0.3}, 0.0};
    CHECK(forcing_Ep(p, h, xb) == 0.0);
    const auto h0 = SecondFundamentalForm::zero(5);
    HalfSpacePoint x{{1.0, 2.0, 0.5, -0.3}, 0.8};
    CHECK(forcing_Ep(p, h0, x) == 0.0);
    // odd under x_i -> -x_i when only the (i,j) pair is active
    HalfSpacePoint xm = x;
    xm.tilde[0] = -xm.tilde[0];
    CHECK(forcing_Ep(p, h, xm) == doctest::Approx(-forcing_Ep(p, h, x)).epsilon(1e-13));
}

TEST_CASE("polynomial operator identities") {
    SampleRng rng(3);
    for (int n : {5, 6, 7}) {
        const ProblemParams p = params_for_ratio(n, 2.0);
        for (int t = 0; t < 30; ++t) {
            const HalfSpacePoint x = rng.half_space_point(n, 2.0, 2.0);
            const FieldJet q1 = monomial_xixj(x, 0, 1, n);
            CHECK(L_operator(p, q1, x) ==
                  doctest::Approx(2.0 * n * q1.value).epsilon(1e-13));
            const FieldJet q2 = monomial_xixjxn(x, 0, 1, n);
            const double want = 4.0 * n * q2.value +
                                2.0 * n * x.tilde[0] * x.tilde[1] * p.Dn;
            CHECK(L_operator(p, q2, x) == doctest::Approx(want).epsilon(1e-13));
            // L((1/4n) x_i x_j (x_n - D)) = x_i x_j x_n at machine precision
            FieldJet q3;
            const double xi = x.tilde[0], xj = x.tilde[1];
            q3.value = xi * xj * (x.xn - p.Dn) / (4.0 * n);
            q3.gradient.assign(static_cast<size_t>(n), 0.0);
            q3.gradient[0] = xj * (x.xn - p.Dn) / (4.0 * n);
            q3.gradient[1] = xi * (x.xn - p.Dn) / (4.0 * n);
            q3.gradient[static_cast<size_t>(n) - 1] = xi * xj / (4.0 * n);
            q3.laplacian = 0.0;
            CHECK(L_operator(p, q3, x) == doctest::Approx(xi * xj * x.xn).epsilon(1e-13));
        }
    }
}

TEST_CASE("w_p solves its equation") {
    SampleRng rng(9);
    for (int n : {5, 6, 7, 8}) {
        const ProblemParams p = params_for_ratio(n, 2.0);
        const auto h = SecondFundamentalForm::single_pair(n, 0, 1, 1.0 / std::sqrt(2.0));
        for (int t = 0; t < 100; ++t) {
            const HalfSpacePoint x = rng.half_space_point(n, 3.0, 3.0);
            const double scale = std::abs(forcing_Ep(p, h, x)) +
                                 p.c_n * std::abs(wp_laplacian(p, h, x)) + 1e-300;
            CHECK(std::abs(wp_residual(p, h, x)) <= 1e-8 * scale);
        }
    }
    // trace-free h with diagonal entries also solves it
    const ProblemParams p6 = params_for_ratio(6, 1.5);
    SecondFundamentalForm hd = SecondFundamentalForm::zero(6);
    hd.at(0, 0) = 1.0;
    hd.at(1, 1) = -0.4;
    hd.at(2, 2) = -0.6;
    hd.at(0, 2) = hd.at(2, 0) = 0.3;
    hd.validate();
    SampleRng rng2(10);
    for (int t = 0; t < 50; ++t) {
        const HalfSpacePoint x = rng2.half_space_point(6, 2.0, 2.0);
        const double scale = std::abs(forcing_Ep(p6, hd, x)) +
                             p6.c_n * std::abs(wp_laplacian(p6, hd, x)) + 1e-300;
        CHECK(std::abs(wp_residual(p6, hd, x)) <= 1e-8 * scale);
    }
    CHECK(wp_value(p6, SecondFundamentalForm::zero(6), {{1, 1, 1, 1, 1}, 1.0}) == 0.0);
    CHECK_THROWS_AS(wp_value(params_for_ratio(4, 2.0), SecondFundamentalForm::zero(4),
                             HalfSpacePoint{{0, 0, 0}, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("w_p decay exponents") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const auto h = SecondFundamentalForm::single_pair(5, 0, 1, 1.0);
    // along a generic ray the value decays like |x|^{3-n}, the gradient one
    // order faster
    Vec dir{0.5, 0.6, 0.4, 0.2};
    double norm = 0.0;
    for (double v : dir) norm += v * v;
    norm = std::sqrt(norm + 0.25);
    auto at = [&](double r) {
        HalfSpacePoint x;
        x.tilde.resize(4);
        for (int a = 0; a < 4; ++a) x.tilde[static_cast<size_t>(a)] = dir[static_cast<size_t>(a)] * r / norm;
        x.xn = 0.5 * r / norm;
        return x;
    };
    const double r1 = 200.0, r2 = 2000.0;
    const double slope_v = std::log(std::abs(wp_value(p, h, at(r2))) /
                                    std::abs(wp_value(p, h, at(r1)))) /
                           std::log(r2 / r1);
    CHECK(slope_v == doctest::Approx(3.0 - p.n).epsilon(0.02));
    auto gnorm = [&](double r) {
        const Vec g = wp_gradient(p, h, at(r));
        double s = 0.0;
        for (double v : g) s += v * v;
        return std::sqrt(s);
    };
    const double slope_g = std::log(gnorm(r2) / gnorm(r1)) / std::log(r2 / r1);
    CHECK(slope_g == doctest::Approx(2.0 - p.n).epsilon(0.02));
}

TEST_CASE("w_p derivatives match finite differences") {
    const ProblemParams p = params_for_ratio(6, 2.0);
    const auto h = SecondFundamentalForm::single_pair(6, 1, 3, 0.8);
    HalfSpacePoint x{{0.3, -0.2, 0.7, 0.1, -0.5}, 0.9};
    const double hs = 1e-5;
    const Vec g = wp_gradient(p, h, x);
    double lap_fd = 0.0;
    const double f0 = wp_value(p, h, x);
    for (int k = 0; k < 6; ++k) {
        HalfSpacePoint xp = x, xm = x;
        if (k < 5) {
            xp.tilde[static_cast<size_t>(k)] += hs;
            xm.tilde[static_cast<size_t>(k)] -= hs;
        } else {
            xp.xn += hs;
            xm.xn -= hs;
        }
        const double fd = (wp_value(p, h, xp) - wp_value(p, h, xm)) / (2.0 * hs);
        CHECK(g[static_cast<size_t>(k)] == doctest::Approx(fd).epsilon(1e-6));
        lap_fd += (wp_value(p, h, xp) - 2.0 * f0 + wp_value(p, h, xm)) / (hs * hs);
    }
    CHECK(wp_laplacian(p, h, x) == doctest::Approx(lap_fd).epsilon(1e-4));
}

TEST_CASE("n=4 leading profile") {
    const ProblemParams p = params_for_ratio(4, 2.0);
    const auto h = SecondFundamentalForm::single_pair(4, 0, 1, 1.0 / std::sqrt(2.0));
    HalfSpacePoint xb{{1.0, -0.5, 0.3}, 0.0};
    CHECK(wbar0_value(p, h, xb) == 0.0);

    // value agrees with the displayed double-sum formula
    HalfSpacePoint x{{0.7, 0.4, -0.2}, 0.6};
    const double M = 2.0 * h.at(0, 1) * p.alpha_n / std::sqrt(-p.K);
    const double d = denom(p, x);
    const double expect = 2.0 * M * x.xn * x.tilde[0] * x.tilde[1] / (d * d);
    CHECK(wbar0_value(p, h, x) == doctest::Approx(expect).epsilon(1e-13));

    // remainder of the asymptotic equation stays bounded against (1+|x|)^2
    double bound_small = 0.0;
    for (double r : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
        HalfSpacePoint xr{{0.5 * r, 0.6 * r, 0.3 * r}, 0.4 * r};
        const double res = -6.0 * wbar0_laplacian(p, h, xr) - forcing_Ep(p, h, xr);
        const double weighted = std::abs(res) * (1.0 + r) * (1.0 + r);
        if (r == 10.0) bound_small = weighted;
        CHECK(weighted <= 10.0 * bound_small + 1e-12);
    }
    CHECK_THROWS_AS(wbar0_value(params_for_ratio(5, 2.0), SecondFundamentalForm::zero(5),
                                HalfSpacePoint{{0, 0, 0, 0}, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("jet arithmetic against finite differences") {
    auto fd3 = [](auto f, double r) {
        const double h = 1e-3;
        Jet3 out;
        out.f = f(r);
        out.d1 = (f(r + h) - f(r - h)) / (2 * h);
        out.d2 = (f(r + h) - 2 * f(r) + f(r - h)) / (h * h);
        out.d3 = (f(r + 2 * h) - 2 * f(r + h) + 2 * f(r - h) - f(r - 2 * h)) / (2 * h * h * h);
        return out;
    };
    auto probe = [](double r) {
        const Jet3 R = jet_var(r);
        const Jet3 val = (R * R - Jet3{1, 0, 0, 0}) * jet_log(R * R) / (3.0 * R);
        return val;
    };
    const Jet3 j = probe(1.7);
    const Jet3 ref = fd3([&](double r) { return probe(r).f; }, 1.7);
    CHECK(j.d1 == doctest::Approx(ref.d1).epsilon(1e-8));
    CHECK(j.d2 == doctest::Approx(ref.d2).epsilon(1e-6));
    CHECK(j.d3 == doctest::Approx(ref.d3).epsilon(1e-4));
}

TEST_CASE("radial profiles solve their equations") {
    for (double r : {1.5, 2.0, 5.0, 20.0}) {
        CHECK(std::abs(zp_profile0_ode_residual(r)) <= 1e-10 * (1.0 + std::abs(std::log(r * r - 1.0))));
        CHECK(std::abs(zp_profile1_ode_residual(r, 2.0)) <= 1e-10);
        CHECK(std::abs(zp_profile1_ode_residual(r, 1.3)) <= 1e-10);
    }
    CHECK_THROWS_AS(zp_profile_phi0(0.5), std::invalid_argument);
}

TEST_CASE("z_p solves the auxiliary Poisson problem") {
    const ProblemParams p = params_for_ratio(4, 2.0);
    const Bubble b = Bubble::standard(p);
    SampleRng rng(77);
    for (int t = 0; t < 60; ++t) {
        const HalfSpacePoint x = rng.half_space_point(4, 2.5, 2.5);
        const double scale = std::abs(bubble_value(b, x) * x.xn) + 1e-300;
        CHECK(std::abs(zp_equation_residual(p, x)) <= 1e-8 * scale);
    }
    // finite-difference cross-check of the closed-form Laplacian
    HalfSpacePoint x{{0.4, -0.3, 0.6}, 0.8};
    const double h = 1e-3;
    double lap_fd = 0.0;
    const double f0 = zp_value(p, x);
    for (int k = 0; k < 4; ++k) {
        HalfSpacePoint xp = x, xm = x;
        if (k < 3) {
            xp.tilde[static_cast<size_t>(k)] += h;
            xm.tilde[static_cast<size_t>(k)] -= h;
        } else {
            xp.xn += h;
            xm.xn -= h;
        }
        lap_fd += (zp_value(p, xp) - 2.0 * f0 + zp_value(p, xm)) / (h * h);
    }
    CHECK(zp_laplacian(p, x) == doctest::Approx(lap_fd).epsilon(1e-5));
}

TEST_CASE("ladder polynomials are harmonic") {
    // Apply the Euclidean Laplacian to z_1 z_2 sum c_m z_n^{l-2-2m} |z|^{2m}
    // by finite differences at a random point.
    SampleRng rng(13);
    for (int n : {5, 6, 7}) {
        for (int l : {2, 3, 4, 5, 6, 7}) {
            const std::vector<double> P = ladder_polynomial(n, l);
            auto H = [&](const Vec& z) {
                double zz = 0.0;
                for (double v : z) zz += v * v;
                const double r = std::sqrt(zz);
                return z[0] * z[1] * ladder_polynomial_eval(P, z[static_cast<size_t>(n) - 1] / r) *
                       std::pow(r, l - 2);
            };
            Vec z(static_cast<size_t>(n));
            for (double& v : z) v = rng.uniform(0.2, 0.9);
            const double h = 1e-3;
            double lap = 0.0;
            for (int k = 0; k < n; ++k) {
                Vec zp = z, zm = z;
                zp[static_cast<size_t>(k)] += h;
                zm[static_cast<size_t>(k)] -= h;
                lap += (H(zp) - 2.0 * H(z) + H(zm)) / (h * h);
            }
            CHECK(std::abs(lap) <= 1e-5 * (1.0 + std::abs(H(z))));
        }
    }
}

TEST_CASE("psi mode solve") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const PsiSolution psi = psi_mode_solve(p, 12);
    CHECK(psi.mu2_margin > 0.0);
    CHECK(psi.tail_fraction < 1e-3);

    // oddness in the paired coordinates
    HalfSpacePoint x{{0.6, 0.4, 0.2, -0.3}, 0.5};
    HalfSpacePoint xm = x;
    xm.tilde[0] = -xm.tilde[0];
    CHECK(psi.value12(x) == doctest::Approx(-psi.value12(xm)).epsilon(1e-10));
    HalfSpacePoint xz = x;
    xz.tilde[0] = 0.0;
    CHECK(psi.value12(xz) == doctest::Approx(0.0).epsilon(1e-14));

    // interior equation: -Lap psi + n(n+2)/denom^2 psi = 0 (finite differences)
    SampleRng rng(19);
    for (int t = 0; t < 10; ++t) {
        HalfSpacePoint y = rng.half_space_point(5, 1.5, 1.5);
        y.xn += 0.3;
        const double h = 1e-3;
        double lap = 0.0;
        const double f0 = psi.value12(y);
        for (int k = 0; k < 5; ++k) {
            HalfSpacePoint yp = y, ym = y;
            if (k < 4) {
                yp.tilde[static_cast<size_t>(k)] += h;
                ym.tilde[static_cast<size_t>(k)] -= h;
            } else {
                yp.xn += h;
                ym.xn -= h;
            }
            lap += (psi.value12(yp) - 2.0 * f0 + psi.value12(ym)) / (h * h);
        }
        const double d = denom(p, y);
        const double res = -lap + p.n * (p.n + 2.0) / (d * d) * f0;
        const double scale = std::abs(lap) + std::abs(p.n * (p.n + 2.0) / (d * d) * f0) + 1e-12;
        CHECK(std::abs(res) <= 2e-4 * scale);
    }

    // boundary condition: -d_n psi - n D psi / denom_b = x_1 x_2 denom_b^{-n/2}
    for (int t = 0; t < 10; ++t) {
        HalfSpacePoint y = rng.half_space_point(5, 1.5, 0.0);
        y.xn = 0.0;
        const double h = 1e-4;
        HalfSpacePoint y1 = y, y2 = y;
        y1.xn = h;
        y2.xn = 2.0 * h;
        const double f0 = psi.value12(y);
        const double dn = (-3.0 * f0 + 4.0 * psi.value12(y1) - psi.value12(y2)) / (2.0 * h);
        const double db = denom(p, y);
        const double lhs = -dn - p.n * p.Dn / db * f0;
        const double rhs = y.tilde[0] * y.tilde[1] * std::pow(db, -0.5 * p.n);
        CHECK(lhs == doctest::Approx(rhs).epsilon(2e-4));
    }
}

TEST_CASE("f constants") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const PsiSolution psi = psi_mode_solve(p, 12);
    const auto h = SecondFundamentalForm::single_pair(5, 0, 1, 0.9);
    const FConstants f = f_constants(p, h, psi);
    CHECK(f.quad_value == doctest::Approx(f.f_n * 2.0 * 0.81).epsilon(1e-12));
    CHECK(f.f_n >= -1e-10);

    // nonnegativity across dimensions and ratios
    for (int n : {5, 6, 7}) {
        for (double D : {1.5, 2.0}) {
            const ProblemParams q = params_for_ratio(n, D);
            const auto hh = SecondFundamentalForm::single_pair(n, 0, 1, 1.0);
            CHECK(f_constants(q, hh).f_n >= -1e-10);
        }
    }

    // direct quadratic-form oracle at n = 5 within 1%
    const double oracle = f_quadratic_form_oracle(p, h, psi);
    CHECK(f.quad_value == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("orthogonality of the correction against the kernel") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const auto h = SecondFundamentalForm::single_pair(5, 0, 1, 1.0);
    for (int i = 1; i <= 5; ++i) {
        CHECK(std::abs(orthogonality_check(p, h, i)) <= 1e-8);
    }
    CHECK(std::abs(orthogonality_check(p, SecondFundamentalForm::zero(5), 5)) == 0.0);
}

TEST_CASE("delta order balance") {
    const ProblemParams p = params_for_ratio(5, 2.0);
    const auto h = SecondFundamentalForm::single_pair(5, 0, 1, 1.0 / std::sqrt(2.0));
    const DeltaOrderBalance bal = delta_order_balance(p, h);
    CHECK(std::abs(bal.interior - bal.boundary) <= 1e-6 * bal.scale);
}
