#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qneuron/activations.hpp"
#include "qneuron/qlinalg.hpp"

namespace qneuron {

struct network_layer {
    Eigen::MatrixXd weights;  // J_l x J_{l-1}
    activation act;
};

struct observable_network {
    int n = 0;
    std::vector<cmat> base;  // layer-0 observables
    std::vector<std::string> base_names;
    std::vector<network_layer> layers;

    int depth() const { return static_cast<int>(layers.size()); }
    int outputs() const;
    // Throws config_error on shape or Hermiticity violations.
    void validate() const;
};

constexpr int max_network_depth = 3;

// Pre-activations B and activations A for every layer; A[0] holds the base terms.
struct network_cache {
    std::vector<std::vector<cmat>> A;
    std::vector<std::vector<eigensystem>> B;
};

network_cache forward_cached(const observable_network& net);
rvec outputs_from_cache(const network_cache& cache, const cmat& rho);
// Evaluates every layer from scratch with matrix_function.
rvec forward(const observable_network& net, const cmat& rho);

// Derivatives of output k with respect to each layer's weights.
std::vector<Eigen::MatrixXd> network_gradient(const observable_network& net, const cmat& rho, int k);
std::vector<Eigen::MatrixXd> network_fd_gradient(const observable_network& net, const cmat& rho, int k, double h);

// {n, base: [pauli strings], layers: [{weights: [[...]], activation, T}]}
observable_network network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const observable_network& net);

}  // namespace qneuron
