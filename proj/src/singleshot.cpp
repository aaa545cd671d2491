#include "qneuron/singleshot.hpp"

#include <cmath>
#include <numbers>

#include "qneuron/errors.hpp"
#include "qneuron/observables.hpp"

namespace qneuron {

double convolution_kernel::pdf(double p) const {
    switch (kind) {
        case kernel_kind::logistic: return logistic_pdf(p, T);
        case kernel_kind::gaussian: return gaussian_pdf(p, T);
        case kernel_kind::vacuum: return std::exp(-p * p) / std::sqrt(std::numbers::pi);
    }
    return 0.0;
}

double convolution_kernel::sample(rng& r) const {
    switch (kind) {
        case kernel_kind::logistic: return sample_logistic(r, T);
        case kernel_kind::gaussian: return sample_gaussian(r, T);
        case kernel_kind::vacuum: return sample_gaussian(r, std::numbers::sqrt2 / 2.0);
    }
    return 0.0;
}

double readout_map::operator()(double p) const {
    switch (kind) {
        case readout_kind::sign: return p >= 0.0 ? 1.0 : -1.0;
        case readout_kind::indicator_nonneg: return p >= 0.0 ? 1.0 : 0.0;
        case readout_kind::relu_scaled: return scale * std::max(p, 0.0);
        case readout_kind::linear: return p;
    }
    return 0.0;
}

spectral_weights spectral_weights_of(const cmat& A, const cmat& rho) {
    if (A.rows() != rho.rows()) throw config_error("operator and state dimensions differ");
    require_density(rho);
    eigensystem es = eigh(A);
    return {es.values, born_probabilities(es, rho)};
}

namespace {

int sample_eigen_index(rng& r, const spectral_weights& sw) {
    double u = r.uniform() * sw.probs.sum();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < sw.probs.size(); ++i) {
        if (sw.probs(i) <= 0.0) continue;
        acc += sw.probs(i);
        last = i;
        if (u < acc) return i;
    }
    return last;
}

void require_temperatures(double T1, double T2) {
    if (!(T1 > 0.0) || !(T2 > 0.0)) throw config_error("T1 and T2 must be positive");
}

}  // namespace

double convolution_sample(rng& r, const convolution_kernel& q, const spectral_weights& sw, const readout_map& out) {
    int i = sample_eigen_index(r, sw);
    return out(sw.values(i) + q.sample(r));
}

double convolution_sample(rng& r, const convolution_kernel& q, const cmat& A, const cmat& rho,
                          const readout_map& out) {
    return convolution_sample(r, q, spectral_weights_of(A, rho), out);
}

double conv_mult_sample(rng& r, const std::pair<convolution_kernel, convolution_kernel>& kernels,
                        const spectral_weights& sw, const std::pair<double, double>& times,
                        const std::pair<readout_map, readout_map>& outs) {
    int i = sample_eigen_index(r, sw);
    double a = sw.values(i);
    double p1 = a * times.first + kernels.first.sample(r);
    double p2 = a * times.second + kernels.second.sample(r);
    return outs.first(p1) * outs.second(p2);
}

neuron_kind parse_neuron_kind(const std::string& name) {
    if (name == "fd") return neuron_kind::fd;
    if (name == "relu") return neuron_kind::relu;
    if (name == "silu") return neuron_kind::silu;
    if (name == "erf") return neuron_kind::erf;
    if (name == "grelu") return neuron_kind::grelu;
    if (name == "gelu") return neuron_kind::gelu;
    throw config_error("unknown neuron '" + name + "'");
}

std::string to_string(neuron_kind kind) {
    switch (kind) {
        case neuron_kind::fd: return "fd";
        case neuron_kind::relu: return "relu";
        case neuron_kind::silu: return "silu";
        case neuron_kind::erf: return "erf";
        case neuron_kind::grelu: return "grelu";
        case neuron_kind::gelu: return "gelu";
    }
    return "?";
}

activation neuron_activation(neuron_kind kind, double T1, double T2) {
    require_temperatures(T1, T2);
    switch (kind) {
        case neuron_kind::fd: return {activation_kind::tanh, 2.0 * T1 * T2};
        case neuron_kind::relu: return {activation_kind::softplus, T1 * T2};
        case neuron_kind::silu: return {activation_kind::silu, T1 * T2};
        case neuron_kind::erf: return {activation_kind::erf, 2.0 * T1 * T2};
        case neuron_kind::grelu: return {activation_kind::grelu, T1 * T2};
        case neuron_kind::gelu: return {activation_kind::gelu, T1 * T2};
    }
    throw config_error("unknown neuron");
}

neuron::neuron(neuron_kind kind, const param_hamiltonian& ph, const rvec& params, double T1, double T2,
               const cmat& rho)
    : kind_(kind), T1_(T1), T2_(T2) {
    require_temperatures(T1, T2);
    sw_ = spectral_weights_of(assemble(ph, params), rho);
    scaled_ = {sw_.values / T2, sw_.probs};
    exact_ = objective_value(ph, params, neuron_activation(kind, T1, T2), rho);
}

double neuron::fire(rng& r) const {
    const convolution_kernel logistic{kernel_kind::logistic, T1_};
    const convolution_kernel gaussian{kernel_kind::gaussian, T1_};
    const convolution_kernel vacuum{kernel_kind::vacuum, 1.0};
    const double inv = 1.0 / T2_;
    switch (kind_) {
        case neuron_kind::fd: return convolution_sample(r, logistic, scaled_, {readout_kind::sign});
        case neuron_kind::erf: return convolution_sample(r, gaussian, scaled_, {readout_kind::sign});
        case neuron_kind::relu:
            return convolution_sample(r, logistic, scaled_, {readout_kind::relu_scaled, T2_});
        case neuron_kind::grelu:
            return convolution_sample(r, gaussian, scaled_, {readout_kind::relu_scaled, T2_});
        case neuron_kind::silu:
            return conv_mult_sample(r, {vacuum, logistic}, sw_, {1.0, inv},
                                    {{readout_kind::linear}, {readout_kind::indicator_nonneg}});
        case neuron_kind::gelu:
            return conv_mult_sample(r, {vacuum, gaussian}, sw_, {1.0, inv},
                                    {{readout_kind::linear}, {readout_kind::indicator_nonneg}});
    }
    return 0.0;
}

double fd_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho) {
    return neuron(neuron_kind::fd, ph, params, T1, T2, rho).fire(r);
}

double relu_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho) {
    return neuron(neuron_kind::relu, ph, params, T1, T2, rho).fire(r);
}

double silu_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2, const cmat& rho) {
    return neuron(neuron_kind::silu, ph, params, T1, T2, rho).fire(r);
}

double gaussian_variant_fire(rng& r, const param_hamiltonian& ph, const rvec& params, double T1, double T2,
                             const cmat& rho, neuron_kind kind) {
    if (kind != neuron_kind::erf && kind != neuron_kind::grelu && kind != neuron_kind::gelu) {
        throw config_error("gaussian variant must be erf, grelu or gelu");
    }
    return neuron(kind, ph, params, T1, T2, rho).fire(r);
}

sample_summary fire_many(const neuron& nrn, long shots, const sampling_options& opt) {
    return run_trials(shots, opt, [&](rng& r, long) { return nrn.fire(r); });
}

}  // namespace qneuron
