#include "qneuron/activations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qneuron/errors.hpp"

namespace qneuron {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

double sech2(double u) {
    double c = std::cosh(u);
    return 1.0 / (c * c);
}

double fermi(double x, double T) {
    double u = x / T;
    if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
    double e = std::exp(u);
    return e / (1.0 + e);
}

double softplus(double x, double T) {
    double u = x / T;
    return T * (std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * inv_sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double logistic_pdf(double x, double T) {
    double e = std::exp(-std::abs(x) / T);
    return e / (T * (1.0 + e) * (1.0 + e));
}

activation::activation(activation_kind k, double temperature) : kind(k), T(temperature) {
    if (!(T > 0.0) || !std::isfinite(T)) throw config_error("activation temperature must be positive");
}

double activation::value(double x) const {
    switch (kind) {
        case activation_kind::tanh: return std::tanh(x / T);
        case activation_kind::fermi: return fermi(x, T);
        case activation_kind::softplus: return softplus(x, T);
        case activation_kind::silu: return x * fermi(x, T);
        case activation_kind::erf: return std::erf(std::numbers::sqrt2 * x / T);
        case activation_kind::grelu: return x * normal_cdf(x / T) + T * normal_pdf(x / T);
        case activation_kind::gelu: return x * normal_cdf(x / T);
        case activation_kind::logloss: return softplus(-x, T);
        case activation_kind::linear: return x;
    }
    return 0.0;
}

double activation::derivative(double x) const {
    switch (kind) {
        case activation_kind::tanh: return sech2(x / T) / T;
        case activation_kind::fermi: return logistic_pdf(x, T);
        case activation_kind::softplus: return fermi(x, T);
        case activation_kind::silu: return fermi(x, T) + x * logistic_pdf(x, T);
        case activation_kind::erf:
            return 2.0 * std::numbers::sqrt2 / (T * std::sqrt(std::numbers::pi)) *
                   std::exp(-2.0 * x * x / (T * T));
        case activation_kind::grelu: return normal_cdf(x / T);
        case activation_kind::gelu: return normal_cdf(x / T) + (x / T) * normal_pdf(x / T);
        case activation_kind::logloss: return -fermi(-x, T);
        case activation_kind::linear: return 1.0;
    }
    return 0.0;
}

double activation::divided_difference(double x, double y) const {
    double tau = 1e-7 * std::max({1.0, std::abs(x), std::abs(y)});
    if (std::abs(x - y) <= tau) return derivative(0.5 * (x + y));
    return (value(x) - value(y)) / (x - y);
}

activation_kind parse_activation_kind(const std::string& name) {
    if (name == "tanh") return activation_kind::tanh;
    if (name == "fermi") return activation_kind::fermi;
    if (name == "softplus" || name == "relu") return activation_kind::softplus;
    if (name == "silu") return activation_kind::silu;
    if (name == "erf") return activation_kind::erf;
    if (name == "grelu") return activation_kind::grelu;
    if (name == "gelu") return activation_kind::gelu;
    if (name == "logloss") return activation_kind::logloss;
    if (name == "linear") return activation_kind::linear;
    throw config_error("unknown activation kind '" + name + "'");
}

std::string to_string(activation_kind kind) {
    switch (kind) {
        case activation_kind::tanh: return "tanh";
        case activation_kind::fermi: return "fermi";
        case activation_kind::softplus: return "softplus";
        case activation_kind::silu: return "silu";
        case activation_kind::erf: return "erf";
        case activation_kind::grelu: return "grelu";
        case activation_kind::gelu: return "gelu";
        case activation_kind::logloss: return "logloss";
        case activation_kind::linear: return "linear";
    }
    return "?";
}

}  // namespace qneuron
