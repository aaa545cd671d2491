#include "qneuron/hamiltonians.hpp"

#include <cmath>

#include "qneuron/errors.hpp"

namespace qneuron {

namespace {

cmat letter_matrix(char c) {
    cmat m(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw config_error(std::string("invalid Pauli letter '") + c + "'");
    }
    return m;
}

cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::string single(int n, int site, char c) {
    std::string s(n, 'I');
    s[site] = c;
    return s;
}

std::string pair(int n, int a, int b, char c) {
    std::string s(n, 'I');
    s[a] = c;
    s[b] = c;
    return s;
}

void require_len(const rvec& v, Eigen::Index len, const char* name) {
    if (v.size() != len) {
        throw config_error(std::string(name) + " has length " + std::to_string(v.size()) +
                           ", expected " + std::to_string(len));
    }
}

void require_n(int n) {
    if (n < 2) throw config_error("model needs n >= 2 qubits");
    if (n > 12) throw config_error("n > 12 qubits is not supported");
}

}  // namespace

cmat pauli_string::matrix() const {
    if (letters.empty()) throw config_error("empty Pauli string");
    cmat m = letter_matrix(letters[0]);
    for (size_t i = 1; i < letters.size(); ++i) m = kron(m, letter_matrix(letters[i]));
    return m;
}

pauli_string parse_pauli(const std::string& s) {
    pauli_string p{s};
    for (char& c : p.letters) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw config_error("invalid Pauli string '" + s + "'");
        }
    }
    if (p.letters.empty()) throw config_error("empty Pauli string");
    return p;
}

param_hamiltonian::param_hamiltonian(int n, std::vector<pauli_string> terms, rvec theta)
    : n_(n), terms_(std::move(terms)) {
    if (terms_.empty()) throw config_error("Hamiltonian needs at least one term");
    for (const auto& t : terms_) {
        if (t.n() != n_) throw config_error("term " + t.letters + " does not act on n qubits");
        mats_.push_back(t.matrix());
        term_es_.push_back(eigh(mats_.back()));
        max_norm_ = std::max(max_norm_, term_es_.back().values.cwiseAbs().maxCoeff());
    }
    set_theta(theta);
}

void param_hamiltonian::set_theta(const rvec& theta) {
    require_len(theta, size(), "theta");
    if (!theta.allFinite()) throw config_error("theta has non-finite entries");
    theta_ = theta;
}

bool param_hamiltonian::terms_are_unitary() const {
    for (const auto& m : mats_) {
        if (max_abs_entry(m * m - cmat::Identity(dim(), dim())) > 1e-12) return false;
    }
    return true;
}

cmat assemble(const param_hamiltonian& ph, const rvec& params) {
    require_len(params, ph.size(), "params");
    cmat h = cmat::Zero(ph.dim(), ph.dim());
    for (int j = 0; j < ph.size(); ++j) {
        if (params(j) != 0.0) h += params(j) * ph.term(j);
    }
    return h;
}

namespace {

param_hamiltonian ising_like(int n, const rvec& W, const rvec& w, double b, char field) {
    require_n(n);
    require_len(W, n - 1, "W");
    require_len(w, n, "w");
    std::vector<pauli_string> terms;
    rvec theta(2 * n);
    int k = 0;
    for (int i = 0; i + 1 < n; ++i) {
        std::string s(n, 'I');
        s[i] = 'Z';
        s[i + 1] = 'Z';
        terms.push_back({s});
        theta(k++) = W(i);
    }
    for (int i = 0; i < n; ++i) {
        terms.push_back({single(n, i, field)});
        theta(k++) = w(i);
    }
    terms.push_back({std::string(n, 'I')});
    theta(k++) = b;
    return param_hamiltonian(n, std::move(terms), theta);
}

}  // namespace

param_hamiltonian build_tfim(int n, const rvec& W, const rvec& w, double b) {
    return ising_like(n, W, w, b, 'X');
}

param_hamiltonian build_im(int n, const rvec& W, const rvec& w, double b) {
    return ising_like(n, W, w, b, 'Z');
}

// W is ordered (x couplings, y couplings, z couplings), each of length n-1; w likewise.
param_hamiltonian build_heisenberg(int n, const rvec& W, const rvec& w) {
    require_n(n);
    require_len(W, 3 * (n - 1), "W");
    require_len(w, 3 * n, "w");
    const char alpha[3] = {'X', 'Y', 'Z'};
    std::vector<pauli_string> terms;
    rvec theta(6 * n - 3);
    int k = 0;
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i + 1 < n; ++i) {
            terms.push_back({pair(n, i, i + 1, alpha[a])});
            theta(k++) = W(a * (n - 1) + i);
        }
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < n; ++i) {
            terms.push_back({single(n, i, alpha[a])});
            theta(k++) = w(a * n + i);
        }
    return param_hamiltonian(n, std::move(terms), theta);
}

// W lists the pairs (1,2),(1,3),...,(1,n),(2,3),... once each.
param_hamiltonian build_fcim(int n, const rvec& W, const rvec& w) {
    require_n(n);
    require_len(W, n * (n - 1) / 2, "W");
    require_len(w, n, "w");
    std::vector<pauli_string> terms;
    rvec theta(n * (n + 1) / 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            terms.push_back({pair(n, i, j, 'Z')});
            theta(k) = W(k);
            ++k;
        }
    for (int i = 0; i < n; ++i) {
        terms.push_back({single(n, i, 'Z')});
        theta(k++) = w(i);
    }
    return param_hamiltonian(n, std::move(terms), theta);
}

int model_size(const std::string& model, int n) {
    if (model == "tfim" || model == "im") return 2 * n;
    if (model == "heisenberg") return 6 * n - 3;
    if (model == "fcim") return n * (n + 1) / 2;
    throw config_error("unknown model '" + model + "'");
}

param_hamiltonian build_model(const std::string& model, int n, const rvec& params) {
    require_n(n);
    require_len(params, model_size(model, n), "params");
    if (model == "tfim" || model == "im") {
        rvec W = params.head(n - 1);
        rvec w = params.segment(n - 1, n);
        double b = params(2 * n - 1);
        return model == "tfim" ? build_tfim(n, W, w, b) : build_im(n, W, w, b);
    }
    if (model == "heisenberg") {
        return build_heisenberg(n, params.head(3 * (n - 1)), params.tail(3 * n));
    }
    return build_fcim(n, params.head(n * (n - 1) / 2), params.tail(n));
}

rvec masked(const rvec& theta, int j, double lambda) {
    if (j < 0 || j >= theta.size()) throw config_error("masked: index out of range");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw config_error("masked: lambda outside [0,1]");
    rvec out = theta;
    out.head(j).setZero();
    out(j) *= lambda;
    return out;
}

term_distribution l1_and_term_distribution(const rvec& params) {
    term_distribution d;
    d.l1 = params.cwiseAbs().sum();
    if (!(d.l1 > 0.0)) throw config_error("term distribution needs a nonzero parameter vector");
    d.q = params.cwiseAbs() / d.l1;
    return d;
}

term_distribution conditional_distribution(const rvec& theta, int j, double lambda) {
    return l1_and_term_distribution(masked(theta, j, lambda));
}

nlohmann::json to_json(const param_hamiltonian& ph) {
    nlohmann::json j;
    j["n"] = ph.n();
    std::vector<std::string> terms;
    for (const auto& t : ph.terms()) terms.push_back(t.letters);
    j["terms"] = terms;
    j["theta"] = std::vector<double>(ph.theta().data(), ph.theta().data() + ph.size());
    return j;
}

param_hamiltonian hamiltonian_from_json(const nlohmann::json& j) {
    for (const char* key : {"n", "terms", "theta"}) {
        if (!j.contains(key)) throw config_error(std::string("hamiltonian: missing key '") + key + "'");
    }
    int n = j.at("n").get<int>();
    std::vector<pauli_string> terms;
    for (const auto& s : j.at("terms")) terms.push_back(parse_pauli(s.get<std::string>()));
    auto th = j.at("theta").get<std::vector<double>>();
    rvec theta = Eigen::Map<rvec>(th.data(), static_cast<Eigen::Index>(th.size()));
    return param_hamiltonian(n, std::move(terms), theta);
}

}  // namespace qneuron
