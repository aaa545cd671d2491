#include "qneuron/observables.hpp"

#include "qneuron/errors.hpp"

namespace qneuron {

namespace {

const param_hamiltonian& ham(const objective& obj) {
    if (obj.hamiltonian == nullptr) throw config_error("objective has no Hamiltonian");
    return *obj.hamiltonian;
}

void require_dims(const param_hamiltonian& ph, const cmat& rho) {
    if (rho.rows() != ph.dim() || rho.cols() != ph.dim()) {
        throw config_error("state dimension does not match the Hamiltonian");
    }
}

Eigen::MatrixXd divided_difference_table(const eigensystem& es, const activation& act) {
    const int d = es.dim();
    Eigen::MatrixXd g(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) g(k, l) = g(l, k) = act.divided_difference(es.values(k), es.values(l));
    return g;
}

}  // namespace

spectral_objective::spectral_objective(const param_hamiltonian& ph, const rvec& params, const activation& act)
    : ph_(&ph), act_(act), es_(eigh(assemble(ph, params))) {
    f_.resize(es_.dim());
    for (int k = 0; k < es_.dim(); ++k) f_(k) = act.value(es_.values(k));
    g_ = divided_difference_table(es_, act);
    for (int j = 0; j < ph.size(); ++j) terms_e_.push_back(es_.vectors.adjoint() * ph.term(j) * es_.vectors);
}

double spectral_objective::value(const cmat& rho) const {
    require_dims(*ph_, rho);
    return born_probabilities(es_, rho).dot(f_);
}

rvec spectral_objective::gradient(const cmat& rho) const {
    require_dims(*ph_, rho);
    cmat r = es_.vectors.adjoint() * rho * es_.vectors;
    cmat w = g_.cast<cplx>().cwiseProduct(r.transpose());
    rvec grad(ph_->size());
    for (int j = 0; j < ph_->size(); ++j) grad(j) = w.cwiseProduct(terms_e_[j]).sum().real();
    return grad;
}

cmat activation_observable(const param_hamiltonian& ph, const rvec& params, const activation& act) {
    return matrix_function(eigh(assemble(ph, params)), [&](double x) { return act.value(x); });
}

double objective_value(const param_hamiltonian& ph, const rvec& params, const activation& act,
                       const cmat& rho) {
    require_dims(ph, rho);
    return spectral_objective(ph, params, act).value(rho);
}

double objective_value(const objective& obj) {
    return objective_value(ham(obj), obj.params, obj.act, obj.rho);
}

rvec exact_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act,
                    const cmat& rho) {
    require_dims(ph, rho);
    return spectral_objective(ph, params, act).gradient(rho);
}

rvec exact_gradient(const objective& obj) {
    return exact_gradient(ham(obj), obj.params, obj.act, obj.rho);
}

rvec finite_diff_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act,
                          const cmat& rho, double h) {
    if (!(h > 0.0)) throw config_error("finite difference step must be positive");
    rvec grad(ph.size());
    for (int j = 0; j < ph.size(); ++j) {
        rvec plus = params, minus = params;
        plus(j) += h;
        minus(j) -= h;
        grad(j) = (objective_value(ph, plus, act, rho) - objective_value(ph, minus, act, rho)) / (2.0 * h);
    }
    return grad;
}

rvec finite_diff_gradient(const objective& obj, double h) {
    return finite_diff_gradient(ham(obj), obj.params, obj.act, obj.rho, h);
}

cmat frechet_apply(const eigensystem& es, const activation& act, const cmat& X) {
    if (X.rows() != es.dim() || X.cols() != es.dim()) throw config_error("frechet_apply: dimension mismatch");
    Eigen::MatrixXd g = divided_difference_table(es, act);
    cmat xe = es.vectors.adjoint() * X * es.vectors;
    return es.vectors * g.cast<cplx>().cwiseProduct(xe) * es.vectors.adjoint();
}

cmat frechet_apply(const cmat& H, const activation& act, const cmat& X) {
    return frechet_apply(eigh(H), act, X);
}

}  // namespace qneuron
