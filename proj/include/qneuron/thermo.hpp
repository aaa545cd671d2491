#pragma once

#include "qneuron/estimators.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/parallel.hpp"
#include "qneuron/qlinalg.hpp"

namespace qneuron {

// rho = e^{-H}/Z for H = H(params).
struct thermal_state {
    eigensystem es;
    cmat rho;
    double logZ = 0.0;
};

thermal_state make_thermal_state(const param_hamiltonian& ph, const rvec& params);
thermal_state make_thermal_state(const cmat& h);

double von_neumann_entropy(const cmat& rho);

struct cross_entropy_forms {
    double log_form;     // -Tr[eta ln rho]
    double energy_form;  // <H>_eta + ln Z
};

cross_entropy_forms cross_entropy_exact(const cmat& eta, const param_hamiltonian& ph, const rvec& params);

double log_partition_bound(const param_hamiltonian& ph, const rvec& params);
double cross_entropy_bound(const param_hamiltonian& ph, const rvec& params);

// Mean of ln d - |theta|_1 sign(theta_j) x with x a measurement of H_j on the
// thermal state of the masked parameters.
sample_summary log_partition_estimate(const param_hamiltonian& ph, const rvec& params, const estimator_plan& plan,
                                      const sampling_options& opt);

// Mean of ln d + |theta|_1 sign(theta_j) (x_eta - x_rho).
sample_summary cross_entropy_estimate(const cmat& eta, const param_hamiltonian& ph, const rvec& params,
                                      const estimator_plan& plan, const sampling_options& opt);

}  // namespace qneuron
