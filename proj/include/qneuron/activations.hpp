#pragma once

#include <string>

namespace qneuron {

enum class activation_kind { tanh, fermi, softplus, silu, erf, grelu, gelu, logloss, linear };

struct activation {
    activation_kind kind = activation_kind::tanh;
    double T = 1.0;

    activation() = default;
    activation(activation_kind k, double temperature);

    double value(double x) const;
    double derivative(double x) const;
    double divided_difference(double x, double y) const;
    // Activation evaluated at 0.
    double at_zero() const { return value(0.0); }
};

activation_kind parse_activation_kind(const std::string& name);
std::string to_string(activation_kind kind);

// Standard normal cdf and pdf.
double normal_cdf(double x);
double normal_pdf(double x);

// Logistic density sech^2(x/2T)/(4T).
double logistic_pdf(double x, double T);

}  // namespace qneuron
