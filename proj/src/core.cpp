#include "ycl/core.hpp"

#include <algorithm>

namespace ycl {

double sphere_area(int d) {
    if (d < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
    // log form keeps this exact enough through d ~ 20
    return 2.0 * std::exp(0.5 * d * std::log(pi) - std::lgamma(0.5 * d));
}

namespace {
double binom(long a, long b) {
    if (b < 0 || b > a) return 0.0;
    return std::round(std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0)));
}
}  // namespace

long harmonic_dim(int n, int i) {
    if (i < 0) throw std::invalid_argument("harmonic_dim: negative degree");
    if (i == 0) return 1;
    return static_cast<long>(binom(n + i - 1, i) - binom(n + i - 3, i - 2));
}

void ProblemParams::require_supercritical() const {
    if (!supercritical)
        throw std::domain_error("ProblemParams: requires D > 1 (got D = " + std::to_string(Dn) + ")");
}

ProblemParams make_params(int n, double K, double H) {
    if (n < 3) throw std::invalid_argument("make_params: n must be >= 3");
    if (!(K < 0.0)) throw std::invalid_argument("make_params: K must be negative");
    if (!(H > 0.0)) throw std::invalid_argument("make_params: H must be positive");
    ProblemParams p;
    p.n = n;
    p.K = K;
    p.H = H;
    p.Dn = std::sqrt(static_cast<double>(n) * (n - 1)) * H / std::sqrt(-K);
    p.c_n = 4.0 * (n - 1) / (n - 2);
    p.alpha_n = std::pow(4.0 * n * (n - 1), 0.25 * (n - 2));
    p.p_star = 2.0 * n / (n - 2);
    p.p_sharp = 2.0 * (n - 1) / (n - 2);
    p.supercritical = p.Dn > 1.0;
    return p;
}

ProblemParams params_for_ratio(int n, double D) {
    if (!(D > 0.0)) throw std::invalid_argument("params_for_ratio: D must be positive");
    return make_params(n, -1.0, D / std::sqrt(static_cast<double>(n) * (n - 1)));
}

double denom(const ProblemParams& p, const Vec& tilde, double xn) {
    double s = 0.0;
    for (double t : tilde) s += t * t;
    double a = xn + p.Dn;
    return s + a * a - 1.0;
}

double denom(const ProblemParams& p, const HalfSpacePoint& x) {
    return denom(p, x.tilde, x.xn);
}

double SecondFundamentalForm::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim; ++i) t += at(i, i);
    return t;
}

double SecondFundamentalForm::norm_sq() const {
    double s = 0.0;
    for (double v : h) s += v * v;
    return s;
}

double SecondFundamentalForm::pair_norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) s += at(i, j) * at(i, j);
    return s;
}

double SecondFundamentalForm::quad(const Vec& tilde) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += at(i, j) * tilde[i] * tilde[j];
    return s;
}

SecondFundamentalForm SecondFundamentalForm::zero(int n) {
    SecondFundamentalForm f;
    f.dim = n - 1;
    f.h.assign(static_cast<size_t>(f.dim) * f.dim, 0.0);
    return f;
}

SecondFundamentalForm SecondFundamentalForm::single_pair(int n, int i, int j, double value) {
    if (i == j) throw std::invalid_argument("single_pair: indices must differ");
    SecondFundamentalForm f = zero(n);
    f.at(i, j) = value;
    f.at(j, i) = value;
    return f;
}

void SecondFundamentalForm::validate() const {
    double scale = std::max(1.0, std::sqrt(norm_sq()));
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(at(i, j) - at(j, i)) > 1e-12 * scale)
                throw std::invalid_argument("SecondFundamentalForm: not symmetric");
    if (std::abs(trace()) > 1e-12 * scale)
        throw std::invalid_argument("SecondFundamentalForm: not trace-free");
}

double HessianForm::operator()(const Vec& a, const Vec& b) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += at(i, j) * a[i] * b[j];
    return s;
}

HessianForm HessianForm::isotropic(int n, double value) {
    HessianForm f;
    f.dim = n - 1;
    f.q.assign(static_cast<size_t>(f.dim) * f.dim, 0.0);
    for (int i = 0; i < f.dim; ++i) f.q[static_cast<size_t>(i) * f.dim + i] = value;
    return f;
}

bool HessianForm::positive_definite() const {
    // Cholesky without pivoting; fails iff the form is not positive definite.
    std::vector<double> a = q;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[static_cast<size_t>(i) * dim + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<size_t>(i) * dim + k] * a[static_cast<size_t>(j) * dim + k];
            if (i == j) {
                if (s <= 0.0) return false;
                a[static_cast<size_t>(i) * dim + j] = std::sqrt(s);
            } else {
                a[static_cast<size_t>(i) * dim + j] = s / a[static_cast<size_t>(j) * dim + j];
            }
        }
    }
    return true;
}

std::uint64_t SampleRng::next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SampleRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1p-53;
}

double SampleRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

HalfSpacePoint SampleRng::half_space_point(int n, double span, double depth) {
    HalfSpacePoint x;
    x.tilde.resize(n - 1);
    for (double& t : x.tilde) t = uniform(-span, span);
    x.xn = uniform(0.0, depth);
    return x;
}

}  // namespace ycl
