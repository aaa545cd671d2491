#include "qneuron/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qneuron/errors.hpp"
#include "qneuron/observables.hpp"

namespace qneuron {

namespace {

const double sqrt_2_over_pi = std::sqrt(2.0 / std::numbers::pi);

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

int sample_index(rng& r, const rvec& p) {
    double u = r.uniform() * p.sum();
    double acc = 0.0;
    int last = -1;
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) <= 0.0) continue;
        acc += p(i);
        last = i;
        if (u < acc) return i;
    }
    if (last < 0) throw numeric_error("cannot sample from an all-zero distribution");
    return last;
}

void require_state(const param_hamiltonian& ph, const cmat& rho) {
    if (rho.rows() != ph.dim() || rho.cols() != ph.dim()) {
        throw config_error("state dimension does not match the Hamiltonian");
    }
    require_density(rho);
}

void require_index(const param_hamiltonian& ph, int j) {
    if (j < 0 || j >= ph.size()) throw config_error("term index out of range");
}

void require_unitary_terms(const param_hamiltonian& ph) {
    if (!ph.terms_are_unitary()) throw config_error("estimator needs every term to be Hermitian and unitary");
}

// H(params) in its own eigenbasis together with rho in that basis.
struct frame {
    eigensystem es;
    cmat rho_e;

    frame(const cmat& h, const cmat& rho) : es(eigh(h)), rho_e(es.vectors.adjoint() * rho * es.vectors) {}
};

// Hadamard test with U = left * e^{i H tau} on sigma = e^{-i H s tau} rho e^{i H s tau}.
hadamard_outcome evolved_test(rng& r, const frame& f, const cmat* left, double tau, double s,
                              const eigensystem& meas) {
    const int d = f.es.dim();
    cvec fwd(d), back(d);
    for (int k = 0; k < d; ++k) {
        fwd(k) = std::polar(1.0, f.es.values(k) * tau);
        back(k) = std::polar(1.0, -f.es.values(k) * s * tau);
    }
    const cmat& V = f.es.vectors;
    cmat U = V * fwd.asDiagonal() * V.adjoint();
    if (left != nullptr) U = (*left) * U;
    cmat sig = V * (back.asDiagonal() * f.rho_e * back.conjugate().asDiagonal()) * V.adjoint();
    return hadamard_joint_sample(r, U, meas, sig);
}

// Eigenvalue of the measured term on rho.
double measure(rng& r, const eigensystem& meas, const rvec& born) {
    return meas.values(sample_index(r, born));
}

struct phase_draw {
    double tau;
    double coefficient;
};

phase_draw draw_zeta_phase(rng& r, const activation& act, int y) {
    const double T = act.T;
    switch (act.kind) {
        case activation_kind::softplus: return {sample_gamma(r) / T, 0.5 / T};
        case activation_kind::logloss: return {y * sample_gamma(r) / T, 0.5 / T};
        case activation_kind::silu: {
            xi_draw x = sample_xi_branch(r);
            return {x.from_gamma ? x.t / T : x.t / (2.0 * T), 1.0 / T};
        }
        case activation_kind::grelu: {
            double t = sample_gaussian(r, 1.0 / T);
            return {sample_uniform(r) * t, sqrt_2_over_pi / T};
        }
        case activation_kind::gelu: {
            double t = sample_gaussian(r, 1.0 / T);
            return {sample_kappa(r) * t, 2.0 * sqrt_2_over_pi / T};
        }
        default: break;
    }
    throw config_error("no second-term sampler for activation " + to_string(act.kind));
}

double zeta_coefficient(const activation& act) {
    switch (act.kind) {
        case activation_kind::softplus:
        case activation_kind::logloss: return 0.5 / act.T;
        case activation_kind::silu: return 1.0 / act.T;
        case activation_kind::grelu: return sqrt_2_over_pi / act.T;
        case activation_kind::gelu: return 2.0 * sqrt_2_over_pi / act.T;
        default: break;
    }
    throw config_error("no second-term sampler for activation " + to_string(act.kind));
}

void require_label(int y) {
    if (y != 1 && y != -1) throw config_error("label must be +1 or -1");
}

std::vector<rvec> term_born(const param_hamiltonian& ph, const cmat& rho) {
    std::vector<rvec> out;
    for (int j = 0; j < ph.size(); ++j) out.push_back(born_probabilities(ph.term_eigensystem(j), rho));
    return out;
}

sample_summary constant_summary(double v) {
    sample_summary s;
    s.mean = v;
    s.count = 0;
    return s;
}

}  // namespace

void validate_dataset(const labeled_dataset& ds) {
    if (ds.states.size() != ds.labels.size()) throw config_error("dataset states and labels differ in length");
    if (ds.states.empty()) throw config_error("dataset is empty");
    for (size_t m = 0; m < ds.states.size(); ++m) {
        require_density(ds.states[m]);
        double y = ds.labels[m];
        if (ds.task == task_kind::classification && y != 1.0 && y != -1.0) {
            throw config_error("classification labels must be +1 or -1");
        }
        if (!std::isfinite(y)) throw config_error("dataset label is not finite");
    }
}

estimator_plan plan_trials(double epsilon, double delta, double M) {
    if (!(epsilon > 0.0)) throw config_error("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw config_error("delta must lie in (0,1)");
    if (!(M >= 0.0) || !std::isfinite(M)) throw config_error("bound M must be finite and nonnegative");
    estimator_plan p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.M = M;
    double k = std::ceil(2.0 * M * M / (epsilon * epsilon) * std::log(2.0 / delta));
    p.K = std::max(1L, static_cast<long>(k));
    return p;
}

Eigen::MatrixXd hadamard_joint_law(const cmat& U, const eigensystem& meas, const cmat& sigma) {
    const int d = meas.dim();
    if (U.rows() != d || sigma.rows() != d) throw config_error("hadamard test: dimension mismatch");
    cmat Y = meas.vectors.adjoint();
    cmat us = U * sigma;
    cmat usu = us * U.adjoint();
    auto diag = [&](const cmat& m) -> cvec { return (Y * m).cwiseProduct(Y.conjugate()).rowwise().sum(); };
    cvec a = diag(sigma), b = diag(us), c = diag(usu);
    Eigen::MatrixXd law(2, d);
    for (int k = 0; k < d; ++k) {
        double base = 0.25 * (a(k).real() + c(k).real());
        double cross = 0.5 * b(k).real();
        law(0, k) = base + cross;
        law(1, k) = base - cross;
    }
    const double tol = 1e-10;
    if (law.minCoeff() < -tol || law.maxCoeff() > 1.0 + tol || std::abs(law.sum() - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "hadamard test probabilities inconsistent: min " << law.minCoeff() << ", sum " << law.sum();
        throw numeric_error(os.str());
    }
    return law.cwiseMax(0.0);
}

hadamard_outcome hadamard_joint_sample(rng& r, const cmat& U, const eigensystem& meas, const cmat& sigma) {
    Eigen::MatrixXd law = hadamard_joint_law(U, meas, sigma);
    const int d = meas.dim();
    double u = r.uniform() * law.sum();
    double acc = 0.0;
    int zi = 0, k = 0, last_z = 0, last_k = 0;
    for (zi = 0; zi < 2; ++zi) {
        for (k = 0; k < d; ++k) {
            if (law(zi, k) <= 0.0) continue;
            acc += law(zi, k);
            last_z = zi;
            last_k = k;
            if (u < acc) return {zi == 0 ? 1 : -1, meas.values(k)};
        }
    }
    return {last_z == 0 ? 1 : -1, meas.values(last_k)};
}

double tanh_gradient_bound(const param_hamiltonian& ph, int j, double T) {
    require_index(ph, j);
    return ph.term_eigensystem(j).values.cwiseAbs().maxCoeff() / T;
}

sample_summary estimate_tanh_gradient(const param_hamiltonian& ph, const rvec& params, int j, double T,
                                      const cmat& rho, const estimator_plan& plan,
                                      const sampling_options& opt) {
    require_index(ph, j);
    require_state(ph, rho);
    if (!(T > 0.0)) throw config_error("temperature must be positive");
    frame f(assemble(ph, params), rho);
    const eigensystem& meas = ph.term_eigensystem(j);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        double t = sample_mu(r);
        double s = sample_uniform(r);
        hadamard_outcome o = evolved_test(r, f, nullptr, t / T, s, meas);
        return o.z * o.x / T;
    });
}

double erf_gradient_bound(const param_hamiltonian& ph, int j, double T) {
    require_index(ph, j);
    return 2.0 / T * sqrt_2_over_pi * ph.term_eigensystem(j).values.cwiseAbs().maxCoeff();
}

sample_summary estimate_erf_gradient(const param_hamiltonian& ph, const rvec& params, int j, double T,
                                     const cmat& rho, const estimator_plan& plan,
                                     const sampling_options& opt) {
    require_index(ph, j);
    require_state(ph, rho);
    if (!(T > 0.0)) throw config_error("temperature must be positive");
    frame f(assemble(ph, params), rho);
    const eigensystem& meas = ph.term_eigensystem(j);
    const double c = 2.0 / T * sqrt_2_over_pi;
    return run_trials(plan.K, opt, [&](rng& r, long) {
        double t = sample_gaussian(r, 1.0);
        double s = sample_uniform(r);
        hadamard_outcome o = evolved_test(r, f, nullptr, 2.0 * t / T, s, meas);
        return c * o.z * o.x;
    });
}

double tanh_objective_bound(const param_hamiltonian& ph, const rvec& params, double T) {
    return params.cwiseAbs().sum() * ph.max_term_norm() / T;
}

sample_summary estimate_tanh_objective(const param_hamiltonian& ph, const rvec& params, double T,
                                       const cmat& rho, const estimator_plan& plan,
                                       const sampling_options& opt) {
    require_state(ph, rho);
    if (!(T > 0.0)) throw config_error("temperature must be positive");
    if (params.cwiseAbs().sum() == 0.0) return constant_summary(0.0);
    term_distribution dist = l1_and_term_distribution(params);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int j = sample_index(r, dist.q);
        double lambda = sample_uniform(r);
        double s = sample_uniform(r);
        double t = sample_mu(r);
        frame f(assemble(ph, masked(params, j, lambda)), rho);
        hadamard_outcome o = evolved_test(r, f, nullptr, t / T, s, ph.term_eigensystem(j));
        return dist.l1 / T * sign(params(j)) * o.z * o.x;
    });
}

double linear_term_bound(const param_hamiltonian& ph, const rvec& params, double scale) {
    return std::abs(scale) * params.cwiseAbs().sum() * ph.max_term_norm();
}

sample_summary estimate_linear_term(const param_hamiltonian& ph, const rvec& params, const cmat& rho,
                                    double scale, const estimator_plan& plan, const sampling_options& opt) {
    require_state(ph, rho);
    if (params.cwiseAbs().sum() == 0.0 || scale == 0.0) return constant_summary(0.0);
    term_distribution dist = l1_and_term_distribution(params);
    std::vector<rvec> born = term_born(ph, rho);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int j = sample_index(r, dist.q);
        double x = measure(r, ph.term_eigensystem(j), born[j]);
        return scale * dist.l1 * sign(params(j)) * x;
    });
}

double gradient_first_term_coefficient(activation_kind kind, int y_label) {
    switch (kind) {
        case activation_kind::softplus:
        case activation_kind::silu:
        case activation_kind::grelu:
        case activation_kind::gelu: return 0.5;
        case activation_kind::logloss: return -0.5 * y_label;
        default: return 0.0;
    }
}

double zeta_bound(const param_hamiltonian& ph, const rvec& params, const activation& act) {
    double h = ph.max_term_norm();
    return zeta_coefficient(act) * params.cwiseAbs().sum() * h * h;
}

double family_objective(const param_hamiltonian& ph, const rvec& params, const activation& act, const cmat& rho,
                        int y_label) {
    if (act.kind == activation_kind::logloss) {
        require_label(y_label);
        return objective_value(ph, y_label * params, act, rho);
    }
    return objective_value(ph, params, act, rho);
}

rvec family_gradient(const param_hamiltonian& ph, const rvec& params, const activation& act, const cmat& rho,
                     int y_label) {
    if (act.kind == activation_kind::logloss) {
        require_label(y_label);
        return y_label * exact_gradient(ph, y_label * params, act, rho);
    }
    return exact_gradient(ph, params, act, rho);
}

double zeta_exact(const param_hamiltonian& ph, const rvec& params, int j, const activation& act,
                  const cmat& rho, int y_label) {
    require_index(ph, j);
    double g = family_gradient(ph, params, act, rho, y_label)(j);
    return g - gradient_first_term_coefficient(act.kind, y_label) * expectation(ph.term(j), rho);
}

sample_summary estimate_zeta_j(const param_hamiltonian& ph, const rvec& params, int j, const activation& act,
                               const cmat& rho, int y_label, const estimator_plan& plan,
                               const sampling_options& opt) {
    require_index(ph, j);
    require_state(ph, rho);
    require_label(y_label);
    require_unitary_terms(ph);
    zeta_coefficient(act);
    if (params.cwiseAbs().sum() == 0.0) return constant_summary(0.0);
    term_distribution dist = l1_and_term_distribution(params);
    frame f(assemble(ph, params), rho);
    const cmat& hj = ph.term(j);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        double s = sample_uniform(r);
        int k = sample_index(r, dist.q);
        phase_draw p = draw_zeta_phase(r, act, y_label);
        hadamard_outcome o = evolved_test(r, f, &hj, p.tau, s, ph.term_eigensystem(k));
        return p.coefficient * dist.l1 * s * sign(params(k)) * o.z * o.x;
    });
}

double telescoped_bound(const param_hamiltonian& ph, const rvec& params, const activation& act) {
    double h = ph.max_term_norm();
    double worst = 0.0;
    for (int j = 0; j < params.size(); ++j) {
        worst = std::max(worst, std::abs(params(j)) * params.tail(params.size() - j).cwiseAbs().sum());
    }
    double tel = params.size() * worst * zeta_coefficient(act) * h * h;
    double lin = 0.5 * params.cwiseAbs().sum() * h;
    return tel + lin;
}

sample_summary estimate_objective_telescoped(const param_hamiltonian& ph, const rvec& params,
                                             const activation& act, const cmat& rho, int y_label,
                                             const estimator_plan& plan, const sampling_options& opt) {
    if (act.kind != activation_kind::softplus && act.kind != activation_kind::logloss &&
        act.kind != activation_kind::silu) {
        throw config_error("telescoped objective supports softplus, logloss and silu");
    }
    require_state(ph, rho);
    require_label(y_label);
    require_unitary_terms(ph);
    const double phi0 = act.at_zero();
    if (params.cwiseAbs().sum() == 0.0) return constant_summary(phi0);
    const int J = ph.size();
    const double lin_coef = gradient_first_term_coefficient(act.kind, y_label);
    const double c = zeta_coefficient(act);
    term_distribution dist = l1_and_term_distribution(params);
    std::vector<rvec> born = term_born(ph, rho);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int j = r.index(J);
        double lambda = sample_uniform(r);
        double s = sample_uniform(r);
        double w_tel = 0.0;
        rvec th = masked(params, j, lambda);
        double l1j = th.cwiseAbs().sum();
        if (params(j) != 0.0 && l1j > 0.0) {
            rvec qj = th.cwiseAbs() / l1j;
            int k = sample_index(r, qj);
            phase_draw p = draw_zeta_phase(r, act, y_label);
            frame f(assemble(ph, th), rho);
            hadamard_outcome o = evolved_test(r, f, &ph.term(j), p.tau, s, ph.term_eigensystem(k));
            w_tel = J * params(j) * l1j * c * s * sign(th(k)) * o.z * o.x;
        }
        int i = sample_index(r, dist.q);
        double x = measure(r, ph.term_eigensystem(i), born[i]);
        double w_lin = lin_coef * dist.l1 * sign(params(i)) * x;
        return phi0 + w_tel + w_lin;
    });
}

double sqloss_gradient_bound(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                             double T) {
    double ymax = 0.0;
    for (double y : ds.labels) ymax = std::max(ymax, std::abs(y));
    double h = ph.max_term_norm();
    return 2.0 / T * h * (params.cwiseAbs().sum() * h / T + ymax);
}

double sqloss_gradient_exact(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, double T,
                             int j) {
    require_index(ph, j);
    activation act(activation_kind::tanh, T);
    double g = 0.0;
    for (int m = 0; m < ds.size(); ++m) {
        double v = objective_value(ph, params, act, ds.states[m]);
        g += 2.0 * (v - ds.labels[m]) * exact_gradient(ph, params, act, ds.states[m])(j);
    }
    return g / ds.size();
}

sample_summary estimate_sqloss_gradient(const labeled_dataset& ds, const param_hamiltonian& ph,
                                        const rvec& params, double T, int j, const estimator_plan& plan,
                                        const sampling_options& opt) {
    if (ds.size() == 0) throw config_error("dataset is empty");
    require_index(ph, j);
    if (!(T > 0.0)) throw config_error("temperature must be positive");
    for (const auto& rho : ds.states) require_state(ph, rho);
    const int M = ds.size();
    if (params.cwiseAbs().sum() == 0.0) {
        // tanh(0) = 0, so only the -y_m factor survives.
        std::vector<frame> frames;
        for (const auto& rho : ds.states) frames.emplace_back(assemble(ph, params), rho);
        return run_trials(plan.K, opt, [&](rng& r, long) {
            int m = r.index(M);
            double t2 = sample_mu(r), s2 = sample_uniform(r);
            hadamard_outcome o2 = evolved_test(r, frames[m], nullptr, t2 / T, s2, ph.term_eigensystem(j));
            return 2.0 / T * o2.z * o2.x * (-ds.labels[m]);
        });
    }
    term_distribution dist = l1_and_term_distribution(params);
    std::vector<frame> frames;
    cmat h = assemble(ph, params);
    for (const auto& rho : ds.states) frames.emplace_back(h, rho);
    return run_trials(plan.K, opt, [&](rng& r, long) {
        int m = r.index(M);
        int k = sample_index(r, dist.q);
        double t1 = sample_mu(r), t2 = sample_mu(r);
        double s1 = sample_uniform(r), s2 = sample_uniform(r), lambda = sample_uniform(r);
        frame f1(assemble(ph, masked(params, k, lambda)), ds.states[m]);
        hadamard_outcome o1 = evolved_test(r, f1, nullptr, t1 / T, s1, ph.term_eigensystem(k));
        hadamard_outcome o2 = evolved_test(r, frames[m], nullptr, t2 / T, s2, ph.term_eigensystem(j));
        double obj = dist.l1 / T * sign(params(k)) * o1.z * o1.x;
        return 2.0 / T * o2.z * o2.x * (obj - ds.labels[m]);
    });
}

}  // namespace qneuron
