#include "qneuron/qlinalg.hpp"

#include <cmath>
#include <sstream>

#include "qneuron/errors.hpp"

namespace qneuron {

double max_abs_entry(const cmat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const cmat& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return max_abs_entry(m - m.adjoint());
}

void require_hermitian(const cmat& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw config_error(std::string(what) + " must be a non-empty square matrix");
    }
    if (!m.allFinite()) throw config_error(std::string(what) + " has non-finite entries");
    double defect = hermitian_defect(m);
    if (defect > herm_tol * std::max(1.0, max_abs_entry(m))) {
        std::ostringstream os;
        os << what << " is not Hermitian: max asymmetry " << defect;
        throw config_error(os.str());
    }
}

eigensystem eigh(const cmat& m) {
    require_hermitian(m);
    cmat sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<cmat> solver(sym);
    if (solver.info() != Eigen::Success) throw numeric_error("eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

cmat reconstruct(const eigensystem& es) {
    return es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

cmat matrix_function(const eigensystem& es, const std::function<double(double)>& f) {
    rvec fv(es.dim());
    for (int k = 0; k < es.dim(); ++k) {
        fv(k) = f(es.values(k));
        if (!std::isfinite(fv(k))) {
            std::ostringstream os;
            os << "function is not finite at eigenvalue " << es.values(k);
            throw numeric_error(os.str());
        }
    }
    cmat out = es.vectors * fv.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

cmat propagator(const eigensystem& es, double t) {
    cvec phase(es.dim());
    for (int k = 0; k < es.dim(); ++k) phase(k) = std::polar(1.0, -es.values(k) * t);
    return es.vectors * phase.asDiagonal() * es.vectors.adjoint();
}

double expectation(const cmat& obs, const cmat& rho) {
    if (obs.rows() != rho.rows() || obs.cols() != rho.cols()) {
        throw config_error("expectation: dimension mismatch");
    }
    cplx tr = (obs.cwiseProduct(rho.transpose())).sum();
    double scale = std::max(1.0, max_abs_entry(obs));
    if (std::abs(tr.imag()) > 1e-10 * scale) {
        std::ostringstream os;
        os << "expectation has imaginary residue " << tr.imag();
        throw numeric_error(os.str());
    }
    return tr.real();
}

bool is_density(const cmat& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0 || !rho.allFinite()) return false;
    if (hermitian_defect(rho) > herm_tol) return false;
    if (std::abs(rho.trace() - cplx(1.0)) > herm_tol) return false;
    Eigen::SelfAdjointEigenSolver<cmat> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -herm_tol;
}

void require_density(const cmat& rho) {
    if (!is_density(rho)) throw config_error("state is not a valid density matrix");
}

cmat pure_density(const cvec& psi) {
    cvec v = psi / psi.norm();
    return v * v.adjoint();
}

cmat maximally_mixed(int dim) {
    return cmat::Identity(dim, dim) / static_cast<double>(dim);
}

rvec born_probabilities(const eigensystem& es, const cmat& rho) {
    cmat r = es.vectors.adjoint() * rho * es.vectors;
    rvec p(es.dim());
    for (int k = 0; k < es.dim(); ++k) p(k) = std::max(0.0, r(k, k).real());
    return p;
}

}  // namespace qneuron
