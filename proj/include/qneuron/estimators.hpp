#pragma once

#include "qneuron/activations.hpp"
#include "qneuron/dataset.hpp"
#include "qneuron/densities.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/parallel.hpp"
#include "qneuron/qlinalg.hpp"

namespace qneuron {

struct estimator_plan {
    double epsilon = 0.0;
    double delta = 0.0;
    long K = 0;
    double M = 0.0;
};

// K = ceil(2 M^2 / eps^2 * ln(2/delta)), at least 1.
estimator_plan plan_trials(double epsilon, double delta, double M);

struct hadamard_outcome {
    int z;     // ancilla outcome, +1 or -1
    double x;  // eigenvalue of the measured observable
};

// One shot of the Hadamard test with controlled U on sigma followed by a
// measurement of meas on the system. E[z x] = Re Tr[meas U sigma].
hadamard_outcome hadamard_joint_sample(rng& r, const cmat& U, const eigensystem& meas, const cmat& sigma);

// Exact law P(z,k) as a 2 x d table, row 0 for z=+1 and row 1 for z=-1.
Eigen::MatrixXd hadamard_joint_law(const cmat& U, const eigensystem& meas, const cmat& sigma);

// Derivative of Tr[tanh(H/T) rho] in direction j.
double tanh_gradient_bound(const param_hamiltonian& ph, int j, double T);
sample_summary estimate_tanh_gradient(const param_hamiltonian& ph, const rvec& params, int j, double T,
                                      const cmat& rho, const estimator_plan& plan,
                                      const sampling_options& opt);

// Derivative of Tr[erf(sqrt2 H/T) rho] in direction j.
double erf_gradient_bound(const param_hamiltonian& ph, int j, double T);
sample_summary estimate_erf_gradient(const param_hamiltonian& ph, const rvec& params, int j, double T,
                                     const cmat& rho, const estimator_plan& plan,
                                     const sampling_options& opt);

double tanh_objective_bound(const param_hamiltonian& ph, const rvec& params, double T);
sample_summary estimate_tanh_objective(const param_hamiltonian& ph, const rvec& params, double T,
                                       const cmat& rho, const estimator_plan& plan,
                                       const sampling_options& opt);

double linear_term_bound(const param_hamiltonian& ph, const rvec& params, double scale);
sample_summary estimate_linear_term(const param_hamiltonian& ph, const rvec& params, const cmat& rho,
                                    double scale, const estimator_plan& plan, const sampling_options& opt);

// The gradient of Tr[phi(H) rho] for phi in {softplus, logloss, silu, grelu, gelu}
// splits as c Tr[H_j rho] + zeta_j; logloss uses phi(y H) with label y.
double gradient_first_term_coefficient(activation_kind kind, int y_label);
double zeta_bound(const param_hamiltonian& ph, const rvec& params, const activation& act);
double zeta_exact(const param_hamiltonian& ph, const rvec& params, int j, const activation& act,
                  const cmat& rho, int y_label);
sample_summary estimate_zeta_j(const param_hamiltonian& ph, const rvec& params, int j, const activation& act,
                               const cmat& rho, int y_label, const estimator_plan& plan,
                               const sampling_options& opt);

// Exact gradient of Tr[phi(H) rho], with logloss evaluated at y H.
rvec family_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act, const cmat& rho,
                     int y_label);
double family_objective(const param_hamiltonian& ph, const rvec& params, const activation& act, const cmat& rho,
                        int y_label);

// Objective for phi in {softplus, logloss, silu} by integrating along masked parameter paths.
double telescoped_bound(const param_hamiltonian& ph, const rvec& params, const activation& act);
sample_summary estimate_objective_telescoped(const param_hamiltonian& ph, const rvec& params,
                                             const activation& act, const cmat& rho, int y_label,
                                             const estimator_plan& plan, const sampling_options& opt);

// Derivative of the squared loss of Tr[tanh(H/T) rho_m] against labels y_m.
double sqloss_gradient_bound(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, double T);
double sqloss_gradient_exact(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, double T,
                             int j);
sample_summary estimate_sqloss_gradient(const labeled_dataset& ds, const param_hamiltonian& ph,
                                        const rvec& params, double T, int j, const estimator_plan& plan,
                                        const sampling_options& opt);

}  // namespace qneuron
