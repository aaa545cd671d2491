#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace qneuron {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

inline constexpr double herm_tol = 1e-10;

struct eigensystem {
    rvec values;   // ascending
    cmat vectors;  // columns are eigenvectors
    int dim() const { return static_cast<int>(values.size()); }
};

double max_abs_entry(const cmat& m);

// Largest entry of |m - m^dagger|.
double hermitian_defect(const cmat& m);

// Throws config_error unless m is Hermitian to 1e-10 times its largest entry.
void require_hermitian(const cmat& m, const char* what = "matrix");

eigensystem eigh(const cmat& m);

cmat reconstruct(const eigensystem& es);

cmat matrix_function(const eigensystem& es, const std::function<double(double)>& f);

// e^{-iHt}
cmat propagator(const eigensystem& es, double t);

double expectation(const cmat& obs, const cmat& rho);

// Hermitian, unit trace and positive semidefinite to 1e-10.
void require_density(const cmat& rho);
bool is_density(const cmat& rho);

cmat pure_density(const cvec& psi);
cmat maximally_mixed(int dim);

// Probability of each eigenvector of es for a measurement on rho.
rvec born_probabilities(const eigensystem& es, const cmat& rho);

}  // namespace qneuron
