#include "qneuron/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qneuron/errors.hpp"
#include "qneuron/estimators.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/obsnet.hpp"
#include "qneuron/observables.hpp"
#include "qneuron/parallel.hpp"
#include "qneuron/singleshot.hpp"
#include "qneuron/thermo.hpp"
#include "qneuron/training.hpp"

namespace qneuron {

namespace {

using nlohmann::json;

constexpr std::uint64_t theta_stream = 100;
constexpr std::uint64_t state_stream = 101;

struct common_flags {
    std::string config;
    std::uint64_t seed = 1;
    std::string out;
    int threads = 0;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("malformed JSON in '" + path + "': " + e.what());
    }
}

template <class T>
T get_key(const json& j, const std::string& key, const T& fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("config key '" + key + "' has the wrong type");
    }
}

template <class T>
T require_key(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw config_error("config key '" + key + "' is missing");
    return get_key<T>(j, key, T{});
}

// Rejects keys outside the allowed set; where prefixes nested key names.
void require_known_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where = "") {
    if (!j.is_object()) throw config_error("config" + (where.empty() ? "" : " key '" + where + "'") + " must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known) throw config_error("config key '" + where + (where.empty() ? "" : ".") + item.key() + "' is not recognized");
    }
}

rvec json_vector(const json& j, const std::string& key) {
    std::vector<double> v = require_key<std::vector<double>>(j, key);
    rvec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw config_error("config key '" + key + "' holds a non-finite entry");
        out(static_cast<Eigen::Index>(i)) = v[i];
    }
    return out;
}

json vector_json(const rvec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

rvec random_vector(std::uint64_t seed, std::uint64_t stream, int J, double range) {
    rng r(seed, stream);
    return random_init(r, J, range);
}

// Parameter vector from key, or uniform in [-range, range] when absent.
rvec params_or_random(const json& cfg, const std::string& key, const std::string& model, int n, std::uint64_t seed,
                      std::uint64_t stream, double range) {
    const int J = model_size(model, n);
    if (cfg.is_object() && cfg.contains(key)) {
        rvec v = json_vector(cfg, key);
        if (v.size() != J) {
            throw config_error("config key '" + key + "' has length " + std::to_string(v.size()) + ", model '" +
                               model + "' needs " + std::to_string(J));
        }
        return v;
    }
    return random_vector(seed, stream, J, range);
}

cmat named_state(const std::string& name, int n, std::uint64_t seed) {
    if (name == "haar") {
        rng r(seed, state_stream);
        return haar_state(r, n);
    }
    if (name == "mixed") return maximally_mixed(1 << n);
    if (name == "ghz") return ghz_state(n);
    if (name == "zero") return computational_basis_states(n).front();
    if (name == "plus") return hadamard_basis_states(n).front();
    throw config_error("config key 'state': unknown state '" + name + "'");
}

int thread_count(const common_flags& f) { return f.threads > 0 ? f.threads : default_threads(1); }

void emit(const common_flags& f, const std::string& name, const json& j) {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!f.out.empty()) {
        std::filesystem::create_directories(f.out);
        std::ofstream o(std::filesystem::path(f.out) / (name + ".json"), std::ios::binary);
        if (!o) throw config_error("cannot write to output directory '" + f.out + "'");
        o << text;
    }
}

void add_common(CLI::App* sub, common_flags& f) {
    sub->add_option("--config", f.config, "JSON configuration file");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
}

json config_or_empty(const common_flags& f) { return f.config.empty() ? json::object() : load_config(f.config); }

int check_qubits(int n) {
    if (n < 1 || n > 8) throw config_error("config key 'n' must be in [1,8]");
    return n;
}

std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---- train ----

int cmd_train(const common_flags& f) {
    if (f.config.empty()) throw config_error("train needs --config");
    json cfg = load_config(f.config);
    require_known_keys(cfg, {"n", "model", "classical_model", "loss", "activation", "target", "states", "config",
                             "validation_states"});
    const int n = check_qubits(require_key<int>(cfg, "n"));
    const std::string model_q = get_key<std::string>(cfg, "model", "tfim");
    const std::string model_c = get_key<std::string>(cfg, "classical_model", model_q == "heisenberg" ? "fcim" : "im");
    const loss_kind loss = parse_loss_kind(get_key<std::string>(cfg, "loss", "squared"));
    const task_kind task = loss == loss_kind::logistic ? task_kind::classification : task_kind::regression;

    train_config tc;
    json tj = get_key<json>(cfg, "config", json::object());
    require_known_keys(tj, {"eta", "T", "max_iterations", "threshold", "init_range"}, "config");
    tc.eta = get_key<double>(tj, "eta", tc.eta);
    tc.T = get_key<double>(tj, "T", tc.T);
    tc.max_iterations = get_key<int>(tj, "max_iterations", tc.max_iterations);
    tc.threshold = get_key<double>(tj, "threshold", tc.threshold);
    tc.init_range = get_key<double>(tj, "init_range", tc.init_range);
    tc.seed = f.seed;
    tc.threads = thread_count(f);
    if (!(tc.eta > 0.0)) throw config_error("config key 'config.eta' must be positive");
    if (!(tc.T > 0.0)) throw config_error("config key 'config.T' must be positive");

    const std::string act_name =
        get_key<std::string>(cfg, "activation", task == task_kind::classification ? "tanh" : "tanh");
    const activation act(parse_activation_kind(act_name), tc.T);
    const activation label_act = task == task_kind::classification ? activation(activation_kind::tanh, tc.T) : act;

    json target_cfg = get_key<json>(cfg, "target", json::object());
    require_known_keys(target_cfg, {"model", "zeta"}, "target");
    const std::string target_model = get_key<std::string>(target_cfg, "model", model_q);
    rvec zeta = params_or_random(target_cfg, "zeta", target_model, n, f.seed, 11, 2.0);
    param_hamiltonian target = build_model(target_model, n, zeta);

    std::vector<std::string> roster = get_key<std::vector<std::string>>(
        cfg, "states", task == task_kind::classification ? classification_roster() : regression_roster());
    labeled_dataset ds = generate_dataset(target, label_act, build_roster(n, roster), task);

    param_hamiltonian q = build_model(model_q, n, rvec::Zero(model_size(model_q, n)));
    param_hamiltonian c = build_model(model_c, n, rvec::Zero(model_size(model_c, n)));
    train_trace tq = train(ds, q, random_vector(f.seed, 12, q.size(), tc.init_range), tc, loss, act);
    train_trace tcl = train(ds, c, random_vector(f.seed, 13, c.size(), tc.init_range), tc, loss, act);

    json summary = {{"n", n},
                    {"model", model_q},
                    {"classical_model", model_c},
                    {"target_model", target_model},
                    {"loss", loss == loss_kind::logistic ? "logistic" : "squared"},
                    {"activation", to_string(act.kind)},
                    {"zeta", vector_json(zeta)},
                    {"final_loss_q", tq.losses.back()},
                    {"final_loss_c", tcl.losses.back()},
                    {"iterations_q", tq.losses.size()},
                    {"iterations_c", tcl.losses.size()},
                    {"converged_q", tq.converged},
                    {"converged_c", tcl.converged},
                    {"theta_q", vector_json(tq.theta)},
                    {"theta_c", vector_json(tcl.theta)}};
    if (task == task_kind::classification) {
        const int nv = get_key<int>(cfg, "validation_states", 500);
        summary["quantum_accuracy"] = validate_accuracy(q, tq.theta, target, tc.T, nv, f.seed, tc.threads);
        summary["classical_accuracy"] = validate_accuracy(c, tcl.theta, target, tc.T, nv, f.seed, tc.threads);
    }
    if (!f.out.empty()) {
        std::filesystem::create_directories(f.out);
        std::ofstream csv(std::filesystem::path(f.out) / "trace.csv", std::ios::binary);
        if (!csv) throw config_error("cannot write to output directory '" + f.out + "'");
        csv << "iteration,loss_q,loss_c\n";
        const std::size_t rows = std::max(tq.losses.size(), tcl.losses.size());
        for (std::size_t i = 0; i < rows; ++i) {
            csv << i << ',' << (i < tq.losses.size() ? csv_number(tq.losses[i]) : "") << ','
                << (i < tcl.losses.size() ? csv_number(tcl.losses[i]) : "") << '\n';
        }
    }
    emit(f, "summary", summary);
    return 0;
}

// ---- validate ----

int cmd_validate(const common_flags& f) {
    if (f.config.empty()) throw config_error("validate needs --config");
    json cfg = load_config(f.config);
    require_known_keys(cfg, {"n", "model", "theta", "target", "T", "n_states"});
    const int n = check_qubits(require_key<int>(cfg, "n"));
    const std::string model = require_key<std::string>(cfg, "model");
    rvec theta = json_vector(cfg, "theta");
    if (theta.size() != model_size(model, n)) throw config_error("config key 'theta' has the wrong length");
    json tj = require_key<json>(cfg, "target");
    require_known_keys(tj, {"model", "zeta"}, "target");
    const std::string target_model = require_key<std::string>(tj, "model");
    rvec zeta = json_vector(tj, "zeta");
    if (zeta.size() != model_size(target_model, n)) throw config_error("config key 'target.zeta' has the wrong length");
    const double T = get_key<double>(cfg, "T", 2.0);
    if (!(T > 0.0)) throw config_error("config key 'T' must be positive");
    const int ns = get_key<int>(cfg, "n_states", 500);
    param_hamiltonian ph = build_model(model, n, theta);
    param_hamiltonian target = build_model(target_model, n, zeta);
    double acc = validate_accuracy(ph, theta, target, T, ns, f.seed, thread_count(f));
    emit(f, "validate", {{"accuracy", acc}, {"n_states", ns}});
    return 0;
}

// ---- estimate ----

struct estimate_flags {
    std::string algorithm;
    std::string family;
    int n = 2;
    std::string model = "heisenberg";
    double T = 1.0;
    int j = 0;
    int y = 1;
    double epsilon = 0.05;
    double delta = 0.01;
    double scale = 1.0;
    std::string state = "haar";
};

std::string canonical_algorithm(const std::string& name) {
    if (name == "grad-tanh" || name == "tanh_gradient") return "grad-tanh";
    if (name == "grad-erf" || name == "erf_gradient") return "grad-erf";
    if (name == "obj-tanh" || name == "tanh_objective") return "obj-tanh";
    if (name == "zeta-j" || name == "zeta") return "zeta-j";
    if (name == "obj-telescoped" || name == "telescoped") return "obj-telescoped";
    if (name == "grad-sqloss" || name == "sqloss_gradient") return "grad-sqloss";
    if (name == "linear") return "linear";
    if (name == "log-partition" || name == "log_partition") return "log-partition";
    throw config_error("config key 'algorithm': unknown algorithm '" + name + "'");
}

int cmd_estimate(const common_flags& f, const estimate_flags& e) {
    json cfg = config_or_empty(f);
    require_known_keys(cfg, {"n", "model", "theta", "algorithm", "family", "T", "j", "y", "epsilon", "delta",
                             "scale", "state", "states"});
    const int n = check_qubits(get_key<int>(cfg, "n", e.n));
    const std::string model = get_key<std::string>(cfg, "model", e.model);
    rvec theta = params_or_random(cfg, "theta", model, n, f.seed, theta_stream, 1.0);
    param_hamiltonian ph = build_model(model, n, theta);
    const std::string raw = get_key<std::string>(cfg, "algorithm", e.algorithm);
    if (raw.empty()) throw config_error("estimate needs --algorithm");
    const std::string algorithm = canonical_algorithm(raw);
    const double T = get_key<double>(cfg, "T", e.T);
    if (!(T > 0.0)) throw config_error("config key 'T' must be positive");
    const int j = get_key<int>(cfg, "j", e.j);
    const int y = get_key<int>(cfg, "y", e.y);
    const double eps = get_key<double>(cfg, "epsilon", e.epsilon);
    const double delta = get_key<double>(cfg, "delta", e.delta);
    if (!(eps > 0.0)) throw config_error("config key 'epsilon' must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw config_error("config key 'delta' must be in (0,1)");
    if (j < 0 || j >= ph.size()) throw config_error("config key 'j' is out of range");
    cmat rho = named_state(get_key<std::string>(cfg, "state", e.state), n, f.seed);
    sampling_options opt{f.seed, thread_count(f)};
    auto family = [&]() {
        const std::string name = get_key<std::string>(cfg, "family", e.family);
        if (name.empty()) throw config_error("algorithm '" + algorithm + "' needs --family");
        return activation(parse_activation_kind(name), T);
    };

    double M = 0.0, exact = 0.0;
    std::function<sample_summary(const estimator_plan&)> run_est;
    labeled_dataset ds;
    if (algorithm == "grad-tanh") {
        M = tanh_gradient_bound(ph, j, T);
        exact = exact_gradient(ph, theta, activation(activation_kind::tanh, T), rho)(j);
        run_est = [&](const estimator_plan& p) { return estimate_tanh_gradient(ph, theta, j, T, rho, p, opt); };
    } else if (algorithm == "grad-erf") {
        M = erf_gradient_bound(ph, j, T);
        exact = exact_gradient(ph, theta, activation(activation_kind::erf, T), rho)(j);
        run_est = [&](const estimator_plan& p) { return estimate_erf_gradient(ph, theta, j, T, rho, p, opt); };
    } else if (algorithm == "obj-tanh") {
        M = tanh_objective_bound(ph, theta, T);
        exact = objective_value(ph, theta, activation(activation_kind::tanh, T), rho);
        run_est = [&](const estimator_plan& p) { return estimate_tanh_objective(ph, theta, T, rho, p, opt); };
    } else if (algorithm == "zeta-j") {
        activation act = family();
        M = zeta_bound(ph, theta, act);
        exact = zeta_exact(ph, theta, j, act, rho, y);
        run_est = [&, act](const estimator_plan& p) { return estimate_zeta_j(ph, theta, j, act, rho, y, p, opt); };
    } else if (algorithm == "obj-telescoped") {
        activation act = family();
        M = telescoped_bound(ph, theta, act);
        exact = family_objective(ph, theta, act, rho, y);
        run_est = [&, act](const estimator_plan& p) {
            return estimate_objective_telescoped(ph, theta, act, rho, y, p, opt);
        };
    } else if (algorithm == "linear") {
        const double scale = get_key<double>(cfg, "scale", e.scale);
        M = linear_term_bound(ph, theta, scale);
        exact = scale * expectation(assemble(ph, theta), rho);
        run_est = [&, scale](const estimator_plan& p) {
            return estimate_linear_term(ph, theta, rho, scale, p, opt);
        };
    } else if (algorithm == "grad-sqloss") {
        std::vector<std::string> roster =
            get_key<std::vector<std::string>>(cfg, "states", std::vector<std::string>{"computational", "hadamard"});
        rvec zeta = random_vector(f.seed, 11, ph.size(), 2.0);
        param_hamiltonian target = build_model(model, n, zeta);
        ds = generate_dataset(target, activation(activation_kind::tanh, T), build_roster(n, roster),
                              task_kind::regression);
        M = sqloss_gradient_bound(ds, ph, theta, T);
        exact = sqloss_gradient_exact(ds, ph, theta, T, j);
        run_est = [&](const estimator_plan& p) { return estimate_sqloss_gradient(ds, ph, theta, T, j, p, opt); };
    } else {
        M = log_partition_bound(ph, theta);
        exact = make_thermal_state(ph, theta).logZ;
        run_est = [&](const estimator_plan& p) { return log_partition_estimate(ph, theta, p, opt); };
    }
    estimator_plan plan = plan_trials(eps, delta, M);
    sample_summary s = run_est(plan);
    emit(f, "estimate",
         {{"algorithm", algorithm},
          {"estimate", s.mean},
          {"stderr", s.stderr_mean},
          {"exact", exact},
          {"K", plan.K},
          {"M", plan.M},
          {"epsilon", eps},
          {"delta", delta},
          {"within_epsilon", std::abs(s.mean - exact) <= eps}});
    return 0;
}

// ---- singleshot ----

struct singleshot_flags {
    std::string neuron = "fd";
    int n = 2;
    std::string model = "heisenberg";
    double T1 = 1.0, T2 = 1.0;
    long shots = 100000;
    std::string state = "haar";
};

int cmd_singleshot(const common_flags& f, const singleshot_flags& s) {
    json cfg = config_or_empty(f);
    require_known_keys(cfg, {"n", "model", "neuron", "T1", "T2", "shots", "theta", "state"});
    const int n = check_qubits(get_key<int>(cfg, "n", s.n));
    const std::string model = get_key<std::string>(cfg, "model", s.model);
    const neuron_kind kind = parse_neuron_kind(get_key<std::string>(cfg, "neuron", s.neuron));
    const double T1 = get_key<double>(cfg, "T1", s.T1), T2 = get_key<double>(cfg, "T2", s.T2);
    if (!(T1 > 0.0 && T2 > 0.0)) throw config_error("temperatures T1 and T2 must be positive");
    const long shots = get_key<long>(cfg, "shots", s.shots);
    if (shots < 1) throw config_error("config key 'shots' must be positive");
    rvec theta = params_or_random(cfg, "theta", model, n, f.seed, theta_stream, 1.0);
    param_hamiltonian ph = build_model(model, n, theta);
    cmat rho = named_state(get_key<std::string>(cfg, "state", s.state), n, f.seed);
    neuron nrn(kind, ph, theta, T1, T2, rho);
    sample_summary sum = fire_many(nrn, shots, {f.seed, thread_count(f)});
    activation act = neuron_activation(kind, T1, T2);
    emit(f, "singleshot",
         {{"neuron", to_string(kind)},
          {"activation", to_string(act.kind)},
          {"T", act.T},
          {"shots", shots},
          {"mean", sum.mean},
          {"stderr", sum.stderr_mean},
          {"exact", nrn.exact()}});
    return 0;
}

// ---- gradcheck ----

struct gradcheck_flags {
    int n = 2;
    std::string model = "tfim";
    std::string act = "tanh";
    double T = 1.0;
    double h = 1e-5;
    double tolerance = 1e-6;
};

int cmd_gradcheck(const common_flags& f, const gradcheck_flags& g) {
    double worst = 0.0;
    json report;
    if (!f.config.empty()) {
        json cfg = load_config(f.config);
        require_known_keys(cfg, {"n", "base", "layers", "state"});
        observable_network net = network_from_json(cfg);
        cmat rho = named_state(get_key<std::string>(cfg, "state", "haar"), net.n, f.seed);
        for (int k = 0; k < net.outputs(); ++k) {
            auto exact = network_gradient(net, rho, k);
            auto fd = network_fd_gradient(net, rho, k, g.h);
            for (std::size_t l = 0; l < exact.size(); ++l)
                worst = std::max(worst, (exact[l] - fd[l]).cwiseAbs().maxCoeff());
        }
        report = {{"mode", "network"}, {"depth", net.depth()}, {"outputs", net.outputs()}};
    } else {
        const int n = check_qubits(g.n);
        activation act(parse_activation_kind(g.act), g.T);
        if (!(g.T > 0.0)) throw config_error("--T must be positive");
        rvec theta = random_vector(f.seed, theta_stream, model_size(g.model, n), 1.0);
        param_hamiltonian ph = build_model(g.model, n, theta);
        cmat rho = named_state("haar", n, f.seed);
        rvec exact = exact_gradient(ph, theta, act, rho);
        rvec fd = finite_diff_gradient(ph, theta, act, rho, g.h);
        worst = (exact - fd).cwiseAbs().maxCoeff();
        report = {{"mode", "neuron"},
                  {"n", n},
                  {"model", g.model},
                  {"activation", to_string(act.kind)},
                  {"T", g.T},
                  {"gradient", vector_json(exact)}};
    }
    const bool pass = worst < g.tolerance;
    report["max_abs_diff"] = worst;
    report["tolerance"] = g.tolerance;
    report["pass"] = pass;
    emit(f, "gradcheck", report);
    if (!pass) {
        std::cerr << "gradcheck: max |exact - fd| = " << worst << " exceeds " << g.tolerance << "\n";
        return 2;
    }
    return 0;
}

// ---- xent ----

struct xent_flags {
    std::string mode = "exact";
    int n = 2;
    std::string model = "heisenberg";
    double epsilon = 0.05;
    double delta = 0.01;
};

int cmd_xent(const common_flags& f, const xent_flags& x) {
    json cfg = config_or_empty(f);
    require_known_keys(cfg, {"n", "model", "mode", "theta", "state", "epsilon", "delta"});
    const int n = check_qubits(get_key<int>(cfg, "n", x.n));
    const std::string model = get_key<std::string>(cfg, "model", x.model);
    const std::string mode = get_key<std::string>(cfg, "mode", x.mode);
    rvec theta = params_or_random(cfg, "theta", model, n, f.seed, theta_stream, 1.0);
    param_hamiltonian ph = build_model(model, n, theta);
    cmat eta = named_state(get_key<std::string>(cfg, "state", "haar"), n, f.seed);
    cross_entropy_forms ex = cross_entropy_exact(eta, ph, theta);
    const double logZ = make_thermal_state(ph, theta).logZ;
    json out = {{"mode", mode},
                {"n", n},
                {"model", model},
                {"theta", vector_json(theta)},
                {"cross_entropy_log_form", ex.log_form},
                {"cross_entropy_energy_form", ex.energy_form},
                {"log_partition", logZ},
                {"entropy_eta", von_neumann_entropy(eta)}};
    if (mode == "estimate") {
        const double eps = get_key<double>(cfg, "epsilon", x.epsilon);
        const double delta = get_key<double>(cfg, "delta", x.delta);
        if (!(eps > 0.0)) throw config_error("epsilon must be positive");
        if (!(delta > 0.0 && delta < 1.0)) throw config_error("delta must be in (0,1)");
        sampling_options opt{f.seed, thread_count(f)};
        estimator_plan px = plan_trials(eps, delta, cross_entropy_bound(ph, theta));
        estimator_plan pz = plan_trials(eps, delta, log_partition_bound(ph, theta));
        sample_summary sx = cross_entropy_estimate(eta, ph, theta, px, opt);
        sample_summary sz = log_partition_estimate(ph, theta, pz, opt);
        out["cross_entropy_estimate"] = sx.mean;
        out["cross_entropy_stderr"] = sx.stderr_mean;
        out["cross_entropy_K"] = px.K;
        out["log_partition_estimate"] = sz.mean;
        out["log_partition_stderr"] = sz.stderr_mean;
        out["log_partition_K"] = pz.K;
        out["epsilon"] = eps;
        out["delta"] = delta;
    } else if (mode != "exact") {
        throw config_error("--mode must be 'exact' or 'estimate'");
    }
    emit(f, "xent", out);
    return 0;
}

// ---- table1 ----

struct table1_flags {
    int n = 2;
    int seeds = 1;
    int validation = 500;
    int iterations = 500;
};

int cmd_table1(const common_flags& f, const table1_flags& t) {
    const int n = check_qubits(t.n);
    if (t.seeds < 1) throw config_error("--seeds must be positive");
    json rows = json::array();
    double qa = 0.0, ca = 0.0;
    for (int s = 0; s < t.seeds; ++s) {
        train_config cfg;
        cfg.seed = f.seed + static_cast<std::uint64_t>(s);
        cfg.threads = thread_count(f);
        cfg.max_iterations = t.iterations;
        experiment_result r = classification_experiment(n, cfg, t.validation);
        qa += r.quantum_accuracy;
        ca += r.classical_accuracy;
        rows.push_back({{"seed", cfg.seed},
                        {"quantum_acc", r.quantum_accuracy},
                        {"classical_acc", r.classical_accuracy},
                        {"final_loss_q", r.quantum.losses.back()},
                        {"final_loss_c", r.classical.losses.back()}});
    }
    emit(f, "table1",
         {{"n", n}, {"quantum_acc", qa / t.seeds}, {"classical_acc", ca / t.seeds}, {"runs", rows}});
    return 0;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Quantized neuron simulator"};
    app.require_subcommand(1);
    common_flags f;

    auto* train_cmd = app.add_subcommand("train", "train quantum and classical models from a config");
    add_common(train_cmd, f);
    auto* validate_cmd = app.add_subcommand("validate", "classification accuracy on Haar states");
    add_common(validate_cmd, f);
    estimate_flags ef;
    auto* estimate_cmd = app.add_subcommand("estimate", "run one sampling estimator against its exact value");
    add_common(estimate_cmd, f);
    estimate_cmd->add_option("--algorithm", ef.algorithm,
                             "grad-tanh, grad-erf, obj-tanh, zeta-j, obj-telescoped, grad-sqloss, linear, log-partition");
    estimate_cmd->add_option("--family", ef.family, "softplus, logloss, silu, grelu or gelu");
    estimate_cmd->add_option("--n", ef.n, "qubits");
    estimate_cmd->add_option("--model", ef.model, "Hamiltonian family");
    estimate_cmd->add_option("--T", ef.T, "temperature");
    estimate_cmd->add_option("--j", ef.j, "zero-based term index");
    estimate_cmd->add_option("--y", ef.y, "label for logloss, +1 or -1");
    estimate_cmd->add_option("--epsilon", ef.epsilon, "target accuracy");
    estimate_cmd->add_option("--delta", ef.delta, "failure probability");
    estimate_cmd->add_option("--scale", ef.scale, "prefactor of the linear term");
    estimate_cmd->add_option("--state", ef.state, "haar, mixed, ghz, zero or plus");

    singleshot_flags ss;
    auto* ss_cmd = app.add_subcommand("singleshot", "average repeated single-shot firings");
    add_common(ss_cmd, f);
    ss_cmd->add_option("--neuron", ss.neuron, "fd, relu, silu, erf, grelu or gelu");
    ss_cmd->add_option("--n", ss.n, "qubits");
    ss_cmd->add_option("--model", ss.model, "Hamiltonian family");
    ss_cmd->add_option("--t1,--T1", ss.T1, "kernel temperature");
    ss_cmd->add_option("--t2,--T2", ss.T2, "readout temperature");
    ss_cmd->add_option("--shots", ss.shots, "number of shots");
    ss_cmd->add_option("--state", ss.state, "haar, mixed, ghz, zero or plus");

    gradcheck_flags gc;
    auto* gc_cmd = app.add_subcommand("gradcheck", "compare exact gradients with finite differences");
    add_common(gc_cmd, f);
    gc_cmd->add_option("--n", gc.n, "qubits");
    gc_cmd->add_option("--model", gc.model, "Hamiltonian family");
    gc_cmd->add_option("--act", gc.act, "activation");
    gc_cmd->add_option("--T", gc.T, "temperature");
    gc_cmd->add_option("--step", gc.h, "finite-difference step");
    gc_cmd->add_option("--tolerance", gc.tolerance, "pass threshold");

    xent_flags xf;
    auto* xent_cmd = app.add_subcommand("xent", "cross entropy and log-partition function");
    add_common(xent_cmd, f);
    xent_cmd->add_option("--mode", xf.mode, "exact or estimate");
    xent_cmd->add_option("--n", xf.n, "qubits");
    xent_cmd->add_option("--model", xf.model, "Hamiltonian family");
    xent_cmd->add_option("--epsilon", xf.epsilon, "target accuracy");
    xent_cmd->add_option("--delta", xf.delta, "failure probability");

    table1_flags tf;
    auto* t1_cmd = app.add_subcommand("table1", "classification experiment, quantum versus classical");
    add_common(t1_cmd, f);
    t1_cmd->add_option("--n", tf.n, "qubits");
    t1_cmd->add_option("--seeds", tf.seeds, "number of consecutive seeds to average");
    t1_cmd->add_option("--validation", tf.validation, "Haar validation states");
    t1_cmd->add_option("--iterations", tf.iterations, "maximum gradient steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*train_cmd) return cmd_train(f);
        if (*validate_cmd) return cmd_validate(f);
        if (*estimate_cmd) return cmd_estimate(f, ef);
        if (*ss_cmd) return cmd_singleshot(f, ss);
        if (*gc_cmd) return cmd_gradcheck(f, gc);
        if (*xent_cmd) return cmd_xent(f, xf);
        if (*t1_cmd) return cmd_table1(f, tf);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace qneuron
