#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "qneuron/qlinalg.hpp"

namespace qneuron {

struct pauli_string {
    std::string letters;  // over {I,X,Y,Z}, leftmost letter acts on qubit 1

    int n() const { return static_cast<int>(letters.size()); }
    cmat matrix() const;
};

pauli_string parse_pauli(const std::string& s);

class param_hamiltonian {
public:
    param_hamiltonian() = default;
    param_hamiltonian(int n, std::vector<pauli_string> terms, rvec theta);

    int n() const { return n_; }
    int dim() const { return 1 << n_; }
    int size() const { return static_cast<int>(terms_.size()); }
    const std::vector<pauli_string>& terms() const { return terms_; }
    const cmat& term(int j) const { return mats_[j]; }
    const eigensystem& term_eigensystem(int j) const { return term_es_[j]; }
    const rvec& theta() const { return theta_; }
    void set_theta(const rvec& theta);
    // Largest operator norm among the terms.
    double max_term_norm() const { return max_norm_; }
    bool terms_are_unitary() const;

private:
    int n_ = 0;
    std::vector<pauli_string> terms_;
    std::vector<cmat> mats_;
    std::vector<eigensystem> term_es_;
    rvec theta_;
    double max_norm_ = 0.0;
};

cmat assemble(const param_hamiltonian& ph, const rvec& params);
inline cmat assemble(const param_hamiltonian& ph) { return assemble(ph, ph.theta()); }

param_hamiltonian build_tfim(int n, const rvec& W, const rvec& w, double b);
param_hamiltonian build_im(int n, const rvec& W, const rvec& w, double b);
param_hamiltonian build_heisenberg(int n, const rvec& W, const rvec& w);
param_hamiltonian build_fcim(int n, const rvec& W, const rvec& w);

// Named model with a flat parameter vector in term order.
param_hamiltonian build_model(const std::string& model, int n, const rvec& params);
int model_size(const std::string& model, int n);

// (0,...,0, lambda*theta_j, theta_{j+1}, ...), j zero-based.
rvec masked(const rvec& theta, int j, double lambda);

struct term_distribution {
    double l1 = 0.0;
    rvec q;
};

term_distribution l1_and_term_distribution(const rvec& params);
// q_{j,lambda}: the term distribution of the masked vector.
term_distribution conditional_distribution(const rvec& theta, int j, double lambda);

nlohmann::json to_json(const param_hamiltonian& ph);
param_hamiltonian hamiltonian_from_json(const nlohmann::json& j);

}  // namespace qneuron
