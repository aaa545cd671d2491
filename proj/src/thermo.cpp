#include "qneuron/thermo.hpp"

#include <cmath>

#include "qneuron/errors.hpp"

namespace qneuron {

namespace {

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

int draw(rng& r, const rvec& p) {
    double u = r.uniform() * p.sum();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) <= 0.0) continue;
        acc += p(i);
        last = i;
        if (u < acc) return i;
    }
    return last;
}

double measure_on(rng& r, const eigensystem& meas, const cmat& rho) {
    return meas.values(draw(r, born_probabilities(meas, rho)));
}

sample_summary constant(double v) {
    sample_summary s;
    s.mean = v;
    return s;
}

}  // namespace

thermal_state make_thermal_state(const cmat& h) {
    thermal_state ts;
    ts.es = eigh(h);
    const rvec& lam = ts.es.values;
    const double top = (-lam).maxCoeff();
    rvec w = (-lam.array() - top).exp().matrix();
    const double sum = w.sum();
    ts.logZ = top + std::log(sum);
    w /= sum;
    ts.rho = ts.es.vectors * w.cast<cplx>().asDiagonal() * ts.es.vectors.adjoint();
    return ts;
}

thermal_state make_thermal_state(const param_hamiltonian& ph, const rvec& params) {
    return make_thermal_state(assemble(ph, params));
}

double von_neumann_entropy(const cmat& rho) {
    require_density(rho);
    rvec p = eigh(rho).values;
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) s -= p(i) * std::log(p(i));
    return s;
}

cross_entropy_forms cross_entropy_exact(const cmat& eta, const param_hamiltonian& ph, const rvec& params) {
    if (eta.rows() != ph.dim()) throw config_error("state dimension does not match the Hamiltonian");
    require_density(eta);
    cmat h = assemble(ph, params);
    thermal_state ts = make_thermal_state(h);
    rvec log_p = -ts.es.values.array() - ts.logZ;
    cmat log_rho = ts.es.vectors * log_p.cast<cplx>().asDiagonal() * ts.es.vectors.adjoint();
    return {-expectation(log_rho, eta), expectation(h, eta) + ts.logZ};
}

double log_partition_bound(const param_hamiltonian& ph, const rvec& params) {
    return params.cwiseAbs().sum() * ph.max_term_norm();
}

double cross_entropy_bound(const param_hamiltonian& ph, const rvec& params) {
    return 2.0 * params.cwiseAbs().sum() * ph.max_term_norm();
}

sample_summary log_partition_estimate(const param_hamiltonian& ph, const rvec& params, const estimator_plan& plan,
                                      const sampling_options& opt) {
    const double ln_d = std::log(static_cast<double>(ph.dim()));
    if (params.cwiseAbs().sum() == 0.0) return constant(ln_d);
    term_distribution dist = l1_and_term_distribution(params);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int j = draw(r, dist.q);
        double lambda = sample_uniform(r);
        thermal_state ts = make_thermal_state(ph, masked(params, j, lambda));
        double x = measure_on(r, ph.term_eigensystem(j), ts.rho);
        return ln_d - dist.l1 * sign(params(j)) * x;
    });
}

sample_summary cross_entropy_estimate(const cmat& eta, const param_hamiltonian& ph, const rvec& params,
                                      const estimator_plan& plan, const sampling_options& opt) {
    if (eta.rows() != ph.dim()) throw config_error("state dimension does not match the Hamiltonian");
    require_density(eta);
    const double ln_d = std::log(static_cast<double>(ph.dim()));
    if (params.cwiseAbs().sum() == 0.0) return constant(ln_d);
    term_distribution dist = l1_and_term_distribution(params);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int j = draw(r, dist.q);
        double lambda = sample_uniform(r);
        const eigensystem& meas = ph.term_eigensystem(j);
        double x_eta = measure_on(r, meas, eta);
        thermal_state ts = make_thermal_state(ph, masked(params, j, lambda));
        double x_rho = measure_on(r, meas, ts.rho);
        return ln_d + dist.l1 * sign(params(j)) * (x_eta - x_rho);
    });
}

}  // namespace qneuron
