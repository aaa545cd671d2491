#include "qneuron/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qneuron/errors.hpp"

namespace qneuron {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

rng::rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

rng::result_type rng::operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double rng::uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double rng::normal() { return normal_(*this); }

int rng::index(int n) {
    if (n <= 0) throw config_error("rng::index needs n > 0");
    return static_cast<int>(uniform() * n) % n;
}

tabulated_inverse_cdf::tabulated_inverse_cdf(std::vector<double> t, std::vector<double> u)
    : t_(std::move(t)), u_(std::move(u)) {
    if (t_.size() != u_.size() || t_.size() < 2) throw config_error("inverse cdf table malformed");
    for (size_t i = 1; i < t_.size(); ++i) {
        if (!(t_[i] > t_[i - 1]) || !(u_[i] >= u_[i - 1])) throw config_error("inverse cdf table not monotone");
    }
}

double tabulated_inverse_cdf::half_quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return t_.back();
    size_t i = static_cast<size_t>(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin());
    i = std::clamp<size_t>(i, 1, u_.size() - 1);
    double du = u_[i] - u_[i - 1];
    double w = du > 0.0 ? (u - u_[i - 1]) / du : 0.0;
    return t_[i - 1] + w * (t_[i] - t_[i - 1]);
}

double tabulated_inverse_cdf::cdf(double x) const {
    double a = std::abs(x);
    double half;
    if (a >= t_.back()) {
        half = 1.0;
    } else {
        size_t i = static_cast<size_t>(std::upper_bound(t_.begin(), t_.end(), a) - t_.begin());
        double w = (a - t_[i - 1]) / (t_[i] - t_[i - 1]);
        half = u_[i - 1] + w * (u_[i] - u_[i - 1]);
    }
    return x >= 0 ? 0.5 + 0.5 * half : 0.5 - 0.5 * half;
}

double tabulated_inverse_cdf::sample(rng& r) const {
    double t = half_quantile(r.uniform());
    return r.coin() ? t : -t;
}

double mu_pdf(double t) {
    double a = std::abs(t);
    if (a < 1e-8) return 1.0 / std::numbers::pi;
    double e = std::exp(-std::numbers::pi * a);
    return a * std::exp(-0.5 * std::numbers::pi * a) / (1.0 - e);
}

double gamma_pdf(double t) {
    double a = std::abs(t);
    if (a == 0.0) return INFINITY;
    double e = std::exp(-std::numbers::pi * a);
    return 2.0 / std::numbers::pi * (std::log1p(e) - std::log1p(-e));
}

double xi_pdf(double t) { return 0.5 * (mu_pdf(t) + gamma_pdf(t)); }

double gaussian_pdf(double x, double sigma) {
    double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

namespace {

// Five-point Gauss-Legendre on [a,b].
template <class F>
double gl5(F&& f, double a, double b) {
    static const double x[5] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                -0.9061798459386640};
    static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                0.2369268850562069, 0.2369268850562069};
    double m = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(m + h * x[i]);
    return s * h;
}

template <class F>
tabulated_inverse_cdf build_table(const std::vector<double>& t, F&& pdf, double first_cell_mass) {
    std::vector<double> u(t.size(), 0.0);
    u[1] = first_cell_mass;
    for (size_t i = 2; i < t.size(); ++i) u[i] = u[i - 1] + gl5(pdf, t[i - 1], t[i]);
    double total = u.back();
    for (double& x : u) x /= total;
    return tabulated_inverse_cdf(t, u);
}

constexpr size_t table_knots = 1u << 16;

}  // namespace

const tabulated_inverse_cdf& mu_table() {
    static const tabulated_inverse_cdf table = [] {
        const double bound = 60.0;
        std::vector<double> t(table_knots);
        for (size_t i = 0; i < table_knots; ++i) t[i] = bound * static_cast<double>(i) / (table_knots - 1);
        auto half = [](double x) { return 2.0 * mu_pdf(x); };
        return build_table(t, half, gl5(half, t[0], t[1]));
    }();
    return table;
}

const tabulated_inverse_cdf& gamma_table() {
    static const tabulated_inverse_cdf table = [] {
        const double bound = 40.0, split = 1e-2, shoulder = 1.0, tiny = 1e-12;
        const size_t log_knots = 8192;
        std::vector<double> t;
        t.reserve(table_knots);
        t.push_back(0.0);
        for (size_t i = 0; i < log_knots; ++i) {
            double f = static_cast<double>(i) / (log_knots - 1);
            t.push_back(tiny * std::pow(split / tiny, f));
        }
        for (size_t i = 1; i <= log_knots; ++i) {
            double f = static_cast<double>(i) / log_knots;
            t.push_back(split * std::pow(shoulder / split, f));
        }
        const size_t lin_knots = table_knots - t.size();
        for (size_t i = 1; i <= lin_knots; ++i) {
            t.push_back(shoulder + (bound - shoulder) * static_cast<double>(i) / lin_knots);
        }
        auto half = [](double x) { return 2.0 * gamma_pdf(x); };
        // ln coth(pi x/2) ~ -ln(pi x/2) near 0, so the first cell integrates in closed form.
        double first = 2.0 * 2.0 / std::numbers::pi * tiny * (1.0 - std::log(std::numbers::pi * tiny / 2.0));
        return build_table(t, half, first);
    }();
    return table;
}

double sample_uniform(rng& r) { return r.uniform(); }

double sample_mu(rng& r) { return mu_table().sample(r); }

double sample_gamma(rng& r) { return gamma_table().sample(r); }

xi_draw sample_xi_branch(rng& r) {
    bool g = r.coin();
    return {g ? sample_gamma(r) : sample_mu(r), g};
}

double sample_xi(rng& r) { return sample_xi_branch(r).t; }

double sample_logistic(rng& r, double T) {
    double u = r.uniform();
    return T * std::log(u / (1.0 - u));
}

double sample_gaussian(rng& r, double sigma) { return sigma * r.normal(); }

double sample_kappa(rng& r) { return r.coin() ? 1.0 : r.uniform(); }

}  // namespace qneuron
