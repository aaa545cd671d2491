#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qneuron/activations.hpp"
#include "qneuron/dataset.hpp"
#include "qneuron/densities.hpp"
#include "qneuron/hamiltonians.hpp"

namespace qneuron {

std::vector<cmat> computational_basis_states(int n);
std::vector<cmat> hadamard_basis_states(int n);
std::vector<cmat> y_basis_states(int n);
// Four Bell states on qubits 1 and 2, remaining qubits in |0>.
std::vector<cmat> bell_states(int n);
cmat ghz_state(int n);
// sqrt(p)|0...0> + sqrt(1-p)|1...1>
cmat sqrt_p_state(int n, double p);
cmat haar_state(rng& r, int n);

// Names: computational, hadamard, y, bell, ghz, mixed, sqrtp:<p>.
std::vector<cmat> build_roster(int n, const std::vector<std::string>& names);
std::vector<std::string> regression_roster();
std::vector<std::string> classification_roster();

labeled_dataset generate_dataset(const param_hamiltonian& target, const activation& act,
                                 const std::vector<cmat>& states, task_kind task);

enum class loss_kind { squared, logistic };
loss_kind parse_loss_kind(const std::string& name);

double squared_loss(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                    const activation& act);
// Same loss as Tr[Delta rho_bar] with Delta = sum_m |m><m| (x) (phi(H) - y_m I)^{(x)2}.
double squared_loss_observable_form(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                                    const activation& act);
double logistic_loss(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, double T);
// Classical re-expression through the eigen-decomposition of H(params).
double logistic_loss_spectral(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                              double T);

struct train_config {
    double eta = 0.1;
    double T = 2.0;
    int max_iterations = 500;
    double threshold = 1e-8;
    double init_range = 1.0;
    std::uint64_t seed = 1;
    int threads = 1;
};

// act is used by the squared loss; the logistic loss uses config temperature.
double loss_value(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, loss_kind loss,
                  const activation& act, int threads = 1);
rvec loss_gradient(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, loss_kind loss,
                   const activation& act, int threads = 1);

struct train_trace {
    std::vector<double> losses;  // one entry per iteration; the last belongs to theta
    rvec theta;
    bool converged = false;
};

rvec random_init(rng& r, int J, double range);

train_trace train(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& init,
                  const train_config& cfg, loss_kind loss, const activation& act);

// Agreement of sign(Tr[tanh(H/T) rho]) between model and target over Haar states.
double validate_accuracy(const param_hamiltonian& model, const rvec& params, const param_hamiltonian& target,
                         double T, int n_states, std::uint64_t seed, int threads = 1);

struct experiment_result {
    rvec zeta;
    train_trace quantum;
    train_trace classical;
    double quantum_accuracy = -1.0;
    double classical_accuracy = -1.0;
};

// Heisenberg versus fully connected Ising, logistic loss, Haar validation.
experiment_result classification_experiment(int n, const train_config& cfg, int n_validation = 500);
// Transverse-field Ising versus Ising, squared loss on the mixed roster.
experiment_result regression_experiment(int n, activation_kind act, const train_config& cfg);

}  // namespace qneuron
