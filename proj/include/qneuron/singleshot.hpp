#pragma once

#include <string>
#include <utility>

#include "qneuron/activations.hpp"
#include "qneuron/densities.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/parallel.hpp"
#include "qneuron/qlinalg.hpp"

namespace qneuron {

enum class kernel_kind { logistic, gaussian, vacuum };

struct convolution_kernel {
    kernel_kind kind = kernel_kind::logistic;
    double T = 1.0;  // logistic temperature or gaussian standard deviation; unused for vacuum

    double pdf(double p) const;
    double sample(rng& r) const;
};

enum class readout_kind { sign, indicator_nonneg, relu_scaled, linear };

struct readout_map {
    readout_kind kind = readout_kind::sign;
    double scale = 1.0;  // T2 for relu_scaled

    double operator()(double p) const;
};

// Eigenvalues a_i of A with the Born weights <i|rho|i> in its eigenbasis.
struct spectral_weights {
    rvec values;
    rvec probs;
};

spectral_weights spectral_weights_of(const cmat& A, const cmat& rho);

double convolution_sample(rng& r, const convolution_kernel& q, const spectral_weights& sw, const readout_map& out);
double convolution_sample(rng& r, const convolution_kernel& q, const cmat& A, const cmat& rho,
                          const readout_map& out);

double conv_mult_sample(rng& r, const std::pair<convolution_kernel, convolution_kernel>& kernels,
                        const spectral_weights& sw, const std::pair<double, double>& times,
                        const std::pair<readout_map, readout_map>& outs);

enum class neuron_kind { fd, relu, silu, erf, grelu, gelu };

neuron_kind parse_neuron_kind(const std::string& name);
std::string to_string(neuron_kind kind);

// Activation whose expectation a neuron reproduces, with its effective temperature.
activation neuron_activation(neuron_kind kind, double T1, double T2);

// Prepared firing of one neuron on one input state.
class neuron {
public:
    neuron(neuron_kind kind, const param_hamiltonian& ph, const rvec& params, double T1, double T2,
           const cmat& rho);

    double fire(rng& r) const;
    double exact() const { return exact_; }
    neuron_kind kind() const { return kind_; }

private:
    neuron_kind kind_;
    double T1_, T2_;
    spectral_weights sw_;
    spectral_weights scaled_;  // spectrum of H/T2
    double exact_;
};

double fd_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho);
double relu_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho);
double silu_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho);
double gaussian_variant_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2,
                             const cmat& rho, neuron_kind kind);

// Mean of repeated shots, one rng stream per shot.
sample_summary fire_many(const neuron& nrn, long shots, const sampling_options& opt);

}  // namespace qneuron
