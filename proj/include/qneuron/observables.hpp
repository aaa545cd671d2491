#pragma once

#include <vector>

#include "qneuron/activations.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/qlinalg.hpp"

namespace qneuron {

struct objective {
    const param_hamiltonian* hamiltonian = nullptr;
    rvec params;
    activation act;
    cmat rho;
};

// Objective and gradient for many states sharing one Hamiltonian and activation.
class spectral_objective {
public:
    spectral_objective(const param_hamiltonian& ph, const rvec& params, const activation& act);

    double value(const cmat& rho) const;
    rvec gradient(const cmat& rho) const;
    const eigensystem& spectrum() const { return es_; }

private:
    const param_hamiltonian* ph_;
    activation act_;
    eigensystem es_;
    rvec f_;
    Eigen::MatrixXd g_;
    std::vector<cmat> terms_e_;
};

cmat activation_observable(const param_hamiltonian& ph, const rvec& params, const activation& act);

double objective_value(const param_hamiltonian& ph, const rvec& params, const activation& act,
                       const cmat& rho);
double objective_value(const objective& obj);

rvec exact_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act,
                    const cmat& rho);
rvec exact_gradient(const objective& obj);

rvec finite_diff_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act,
                          const cmat& rho, double h);
rvec finite_diff_gradient(const objective& obj, double h);

// Daleckii-Krein derivative of act at H in direction X.
cmat frechet_apply(const cmat& H, const activation& act, const cmat& X);
cmat frechet_apply(const eigensystem& es, const activation& act, const cmat& X);

}  // namespace qneuron
