#include "qneuron/training.hpp"

#include <cmath>
#include <sstream>

#include "qneuron/errors.hpp"
#include "qneuron/observables.hpp"
#include "qneuron/parallel.hpp"

namespace qneuron {

namespace {

constexpr std::uint64_t target_stream = 11;
constexpr std::uint64_t quantum_init_stream = 12;
constexpr std::uint64_t classical_init_stream = 13;
constexpr std::uint64_t validation_tag = 0x76616c6964ULL;

cvec kron(const cvec& a, const cvec& b) {
    cvec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

std::vector<cmat> product_states(int n, const cvec& up, const cvec& down) {
    std::vector<cmat> out;
    for (int b = 0; b < (1 << n); ++b) {
        cvec psi = ((b >> (n - 1)) & 1) ? down : up;
        for (int i = 1; i < n; ++i) psi = kron(psi, ((b >> (n - 1 - i)) & 1) ? down : up);
        out.push_back(pure_density(psi));
    }
    return out;
}

void require_qubits(int n) {
    if (n < 1 || n > 12) throw config_error("qubit count must be in [1,12]");
}

}  // namespace

std::vector<cmat> computational_basis_states(int n) {
    require_qubits(n);
    cvec up(2), down(2);
    up << 1, 0;
    down << 0, 1;
    return product_states(n, up, down);
}

std::vector<cmat> hadamard_basis_states(int n) {
    require_qubits(n);
    const double h = 1.0 / std::sqrt(2.0);
    cvec plus(2), minus(2);
    plus << h, h;
    minus << h, -h;
    return product_states(n, plus, minus);
}

std::vector<cmat> y_basis_states(int n) {
    require_qubits(n);
    const double h = 1.0 / std::sqrt(2.0);
    cvec plus(2), minus(2);
    plus << h, cplx(0, h);
    minus << h, cplx(0, -h);
    return product_states(n, plus, minus);
}

std::vector<cmat> bell_states(int n) {
    if (n < 2) throw config_error("Bell states need n >= 2");
    require_qubits(n);
    const double h = 1.0 / std::sqrt(2.0);
    cvec rest = cvec::Zero(1 << (n - 2));
    rest(0) = 1.0;
    std::vector<cmat> out;
    const double signs[4][2] = {{1, 1}, {1, -1}, {1, 1}, {1, -1}};
    for (int b = 0; b < 4; ++b) {
        cvec pair = cvec::Zero(4);
        if (b < 2) {
            pair(0) = h * signs[b][0];
            pair(3) = h * signs[b][1];
        } else {
            pair(1) = h * signs[b][0];
            pair(2) = h * signs[b][1];
        }
        out.push_back(pure_density(kron(pair, rest)));
    }
    return out;
}

cmat ghz_state(int n) { return sqrt_p_state(n, 0.5); }

cmat sqrt_p_state(int n, double p) {
    require_qubits(n);
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("sqrtp state needs p in [0,1]");
    cvec psi = cvec::Zero(1 << n);
    psi(0) = std::sqrt(p);
    psi((1 << n) - 1) = std::sqrt(1.0 - p);
    return pure_density(psi);
}

cmat haar_state(rng& r, int n) {
    require_qubits(n);
    cvec psi(1 << n);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = cplx(r.normal(), r.normal());
    return pure_density(psi);
}

std::vector<cmat> build_roster(int n, const std::vector<std::string>& names) {
    std::vector<cmat> out;
    auto append = [&](const std::vector<cmat>& v) { out.insert(out.end(), v.begin(), v.end()); };
    for (const auto& name : names) {
        if (name == "computational") append(computational_basis_states(n));
        else if (name == "hadamard") append(hadamard_basis_states(n));
        else if (name == "y") append(y_basis_states(n));
        else if (name == "bell") append(bell_states(n));
        else if (name == "ghz") out.push_back(ghz_state(n));
        else if (name == "mixed") out.push_back(maximally_mixed(1 << n));
        else if (name.rfind("sqrtp:", 0) == 0) {
            double p = 0.0;
            try {
                p = std::stod(name.substr(6));
            } catch (const std::exception&) {
                throw config_error("states: malformed entry '" + name + "'");
            }
            out.push_back(sqrt_p_state(n, p));
        } else {
            throw config_error("states: unknown roster entry '" + name + "'");
        }
    }
    if (out.empty()) throw config_error("states: roster is empty");
    return out;
}

std::vector<std::string> regression_roster() {
    return {"computational", "hadamard", "bell", "ghz", "sqrtp:0.25", "sqrtp:0.75", "mixed"};
}

std::vector<std::string> classification_roster() { return {"computational", "hadamard", "y"}; }

labeled_dataset generate_dataset(const param_hamiltonian& target, const activation& act,
                                 const std::vector<cmat>& states, task_kind task) {
    labeled_dataset ds;
    ds.task = task;
    spectral_objective obj(target, target.theta(), act);
    for (const auto& rho : states) {
        require_density(rho);
        double z = obj.value(rho);
        ds.states.push_back(rho);
        ds.labels.push_back(task == task_kind::classification ? (z >= 0.0 ? 1.0 : -1.0) : z);
    }
    return ds;
}

loss_kind parse_loss_kind(const std::string& name) {
    if (name == "squared") return loss_kind::squared;
    if (name == "logistic") return loss_kind::logistic;
    throw config_error("unknown loss '" + name + "'");
}

double squared_loss(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                    const activation& act) {
    return loss_value(ds, ph, params, loss_kind::squared, act);
}

double squared_loss_observable_form(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                                    const activation& act) {
    validate_dataset(ds);
    const int d = ph.dim(), M = ds.size();
    cmat phi = activation_observable(ph, params, act);
    cmat delta = cmat::Zero(M * d * d, M * d * d);
    cmat rho_bar = cmat::Zero(M * d * d, M * d * d);
    cmat id = cmat::Identity(d, d);
    auto kron2 = [](const cmat& a, const cmat& b) {
        cmat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    for (int m = 0; m < M; ++m) {
        cmat shifted = phi - ds.labels[m] * id;
        delta.block(m * d * d, m * d * d, d * d, d * d) = kron2(shifted, shifted);
        rho_bar.block(m * d * d, m * d * d, d * d, d * d) = kron2(ds.states[m], ds.states[m]) / M;
    }
    return expectation(delta, rho_bar);
}

double logistic_loss(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, double T) {
    return loss_value(ds, ph, params, loss_kind::logistic, activation(activation_kind::logloss, T));
}

double logistic_loss_spectral(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params,
                              double T) {
    validate_dataset(ds);
    eigensystem es = eigh(assemble(ph, params));
    double total = 0.0;
    for (int m = 0; m < ds.size(); ++m) {
        rvec q = born_probabilities(es, ds.states[m]);
        for (int k = 0; k < es.dim(); ++k) {
            double u = -ds.labels[m] * es.values(k) / T;
            total += q(k) * T * (std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))));
        }
    }
    return total / ds.size();
}

namespace {

// Per-item loss value and gradient, reduced in item order.
std::pair<double, rvec> loss_and_gradient(const labeled_dataset& ds, const param_hamiltonian& ph,
                                          const rvec& params, loss_kind loss, const activation& act,
                                          int threads, bool want_gradient) {
    validate_dataset(ds);
    const int M = ds.size();
    std::vector<double> values(M);
    std::vector<rvec> grads(M);
    if (loss == loss_kind::squared) {
        spectral_objective obj(ph, params, act);
        parallel_for(M, threads, [&](long m) {
            double v = obj.value(ds.states[m]);
            double r = v - ds.labels[m];
            values[m] = r * r;
            if (want_gradient) grads[m] = 2.0 * r * obj.gradient(ds.states[m]);
        });
    } else {
        activation ll(activation_kind::logloss, act.T);
        spectral_objective pos(ph, params, ll), neg(ph, -params, ll);
        parallel_for(M, threads, [&](long m) {
            const bool up = ds.labels[m] > 0;
            const spectral_objective& obj = up ? pos : neg;
            values[m] = obj.value(ds.states[m]);
            if (want_gradient) grads[m] = (up ? 1.0 : -1.0) * obj.gradient(ds.states[m]);
        });
    }
    double total = 0.0;
    rvec g = rvec::Zero(ph.size());
    for (int m = 0; m < M; ++m) {
        total += values[m];
        if (want_gradient) g += grads[m];
    }
    return {total / M, g / M};
}

}  // namespace

double loss_value(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, loss_kind loss,
                  const activation& act, int threads) {
    return loss_and_gradient(ds, ph, params, loss, act, threads, false).first;
}

rvec loss_gradient(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& params, loss_kind loss,
                   const activation& act, int threads) {
    return loss_and_gradient(ds, ph, params, loss, act, threads, true).second;
}

rvec random_init(rng& r, int J, double range) {
    rvec out(J);
    for (int j = 0; j < J; ++j) out(j) = range * (2.0 * r.uniform() - 1.0);
    return out;
}

train_trace train(const labeled_dataset& ds, const param_hamiltonian& ph, const rvec& init,
                  const train_config& cfg, loss_kind loss, const activation& act) {
    if (!(cfg.eta >= 0.0)) throw config_error("learning rate must be nonnegative");
    if (!(cfg.T > 0.0)) throw config_error("temperature must be positive");
    if (cfg.max_iterations < 1) throw config_error("max_iterations must be positive");
    if (init.size() != ph.size()) throw config_error("initial parameters have the wrong length");
    train_trace trace;
    trace.theta = init;
    double prev = NAN;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        auto [value, grad] = loss_and_gradient(ds, ph, trace.theta, loss, act, cfg.threads, true);
        if (!std::isfinite(value) || value > 1e6) {
            std::ostringstream os;
            os << "training diverged at iteration " << it << " with loss " << value;
            throw numeric_error(os.str());
        }
        trace.losses.push_back(value);
        if (it > 0 && std::abs(value - prev) < cfg.threshold) {
            trace.converged = true;
            return trace;
        }
        prev = value;
        if (it + 1 < cfg.max_iterations) trace.theta -= cfg.eta * grad;
    }
    return trace;
}

double validate_accuracy(const param_hamiltonian& model, const rvec& params, const param_hamiltonian& target,
                         double T, int n_states, std::uint64_t seed, int threads) {
    if (model.n() != target.n()) throw config_error("model and target act on different qubit counts");
    if (n_states < 1) throw config_error("validation needs at least one state");
    activation g(activation_kind::tanh, T);
    spectral_objective pred(model, params, g), truth(target, target.theta(), g);
    std::vector<int> hit(n_states);
    parallel_for(n_states, threads, [&](long i) {
        rng r(mix64(seed ^ validation_tag), static_cast<std::uint64_t>(i));
        cmat rho = haar_state(r, model.n());
        double a = pred.value(rho), b = truth.value(rho);
        hit[i] = ((a >= 0.0) == (b >= 0.0)) ? 1 : 0;
    });
    long total = 0;
    for (int h : hit) total += h;
    return static_cast<double>(total) / n_states;
}

experiment_result classification_experiment(int n, const train_config& cfg, int n_validation) {
    experiment_result out;
    rng rt(cfg.seed, target_stream);
    const int Jq = model_size("heisenberg", n), Jc = model_size("fcim", n);
    out.zeta = random_init(rt, Jq, 2.0);
    param_hamiltonian target = build_model("heisenberg", n, out.zeta);
    activation g(activation_kind::tanh, cfg.T);
    labeled_dataset ds = generate_dataset(target, g, build_roster(n, classification_roster()),
                                          task_kind::classification);
    param_hamiltonian quantum = build_model("heisenberg", n, rvec::Zero(Jq));
    param_hamiltonian classical = build_model("fcim", n, rvec::Zero(Jc));
    rng rq(cfg.seed, quantum_init_stream), rc(cfg.seed, classical_init_stream);
    out.quantum = train(ds, quantum, random_init(rq, Jq, cfg.init_range), cfg, loss_kind::logistic, g);
    out.classical = train(ds, classical, random_init(rc, Jc, cfg.init_range), cfg, loss_kind::logistic, g);
    out.quantum_accuracy = validate_accuracy(quantum, out.quantum.theta, target, cfg.T, n_validation, cfg.seed,
                                             cfg.threads);
    out.classical_accuracy = validate_accuracy(classical, out.classical.theta, target, cfg.T, n_validation,
                                               cfg.seed, cfg.threads);
    return out;
}

experiment_result regression_experiment(int n, activation_kind kind, const train_config& cfg) {
    experiment_result out;
    rng rt(cfg.seed, target_stream);
    const int J = model_size("tfim", n);
    out.zeta = random_init(rt, J, 2.0);
    param_hamiltonian target = build_model("tfim", n, out.zeta);
    activation act(kind, cfg.T);
    labeled_dataset ds = generate_dataset(target, act, build_roster(n, regression_roster()), task_kind::regression);
    param_hamiltonian quantum = build_model("tfim", n, rvec::Zero(J));
    param_hamiltonian classical = build_model("im", n, rvec::Zero(J));
    rng rq(cfg.seed, quantum_init_stream), rc(cfg.seed, classical_init_stream);
    out.quantum = train(ds, quantum, random_init(rq, J, cfg.init_range), cfg, loss_kind::squared, act);
    out.classical = train(ds, classical, random_init(rc, J, cfg.init_range), cfg, loss_kind::squared, act);
    return out;
}

}  // namespace qneuron
