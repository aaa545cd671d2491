#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qneuron/errors.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/thermo.hpp"

using namespace qneuron;

namespace {

std::vector<std::string> names_of(const param_hamiltonian& ph) {
    std::vector<std::string> out;
    for (const auto& t : ph.terms()) out.push_back(t.letters);
    return out;
}

cmat ref_thermal(const cmat& h) {
    cmat e = oracle::general_function(h, [](double x) { return std::exp(-x); });
    return e / e.trace().real();
}

double ref_log_z(const cmat& h) {
    return std::log(oracle::general_function(h, [](double x) { return std::exp(-x); }).trace().real());
}

double ref_entropy(const cmat& rho) {
    Eigen::SelfAdjointEigenSolver<cmat> es(rho);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()(i);
        if (p > 1e-300) s -= p * std::log(p);
    }
    return s;
}

double ref_cross_entropy(const cmat& eta, const cmat& h) {
    cmat log_rho = oracle::general_function(h, [](double x) { return -x; }) - ref_log_z(h) * cmat::Identity(h.rows(), h.rows());
    return -oracle::trace_real(eta, log_rho);
}

// ln Z along the masked path: (0,...,0, lambda theta_j, theta_{j+1}, ...).
rvec ref_masked(const rvec& th, int j, double lambda) {
    rvec m = th;
    for (int k = 0; k < j; ++k) m(k) = 0.0;
    m(j) *= lambda;
    return m;
}

}  // namespace

TEST(Thermal, ZeroParameters) {
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    thermal_state ts = make_thermal_state(ph, rvec::Zero(9));
    EXPECT_NEAR((ts.rho - maximally_mixed(4)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_NEAR(ts.logZ, std::log(4.0), 1e-14);
}

TEST(Thermal, SingleQubitSoftmax) {
    for (double th : {-3.0, 0.4, 2.0, 50.0}) {
        param_hamiltonian ph(1, {parse_pauli("Z")}, rvec::Constant(1, th));
        thermal_state ts = make_thermal_state(ph, ph.theta());
        double p0 = 1.0 / (1.0 + std::exp(2.0 * th));
        EXPECT_NEAR(ts.rho(0, 0).real(), p0, 1e-14);
        EXPECT_NEAR(ts.rho(1, 1).real(), 1.0 - p0, 1e-14);
        EXPECT_NEAR(ts.logZ, std::abs(th) + std::log1p(std::exp(-2.0 * std::abs(th))), 1e-12);
    }
}

TEST(Thermal, RandomMatchesReference) {
    std::mt19937_64 g(1);
    for (int rep = 0; rep < 5; ++rep) {
        cmat h = 3.0 * oracle::random_hermitian(g, 8);
        thermal_state ts = make_thermal_state(h);
        EXPECT_NEAR(ts.rho.trace().real(), 1.0, 1e-12);
        EXPECT_TRUE(is_density(ts.rho));
        EXPECT_GT(eigh(ts.rho).values.minCoeff(), 0.0);
        EXPECT_LT((ts.rho - ref_thermal(h)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(ts.logZ, ref_log_z(h), 1e-12);
    }
}

TEST(Thermal, LargeFieldsStayFinite) {
    param_hamiltonian ph = build_model("tfim", 2, rvec::Constant(4, 400.0));
    thermal_state ts = make_thermal_state(ph, ph.theta());
    EXPECT_TRUE(std::isfinite(ts.logZ));
    EXPECT_TRUE(ts.rho.allFinite());
    EXPECT_NEAR(ts.rho.trace().real(), 1.0, 1e-12);
}

TEST(Entropy, KnownValues) {
    EXPECT_NEAR(von_neumann_entropy(maximally_mixed(8)), std::log(8.0), 1e-13);
    cvec v = cvec::Zero(4);
    v(2) = 1.0;
    EXPECT_NEAR(von_neumann_entropy(pure_density(v)), 0.0, 1e-13);
    std::mt19937_64 g(2);
    cmat rho = oracle::random_density(g, 4);
    EXPECT_NEAR(von_neumann_entropy(rho), ref_entropy(rho), 1e-12);
}

TEST(CrossEntropy, FormsAgreeWithReference) {
    std::mt19937_64 g(3);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    for (int rep = 0; rep < 5; ++rep) {
        rvec th = oracle::random_params(g, 9, 1.0);
        cmat eta = oracle::random_density(g, 4);
        cross_entropy_forms f = cross_entropy_exact(eta, ph, th);
        EXPECT_NEAR(f.log_form, f.energy_form, 1e-9);
        EXPECT_NEAR(f.energy_form, ref_cross_entropy(eta, oracle::hamiltonian(names_of(ph), th)), 1e-10);
    }
}

TEST(CrossEntropy, SelfIsEntropyAndZeroIsLogD) {
    std::mt19937_64 g(4);
    param_hamiltonian ph = build_model("tfim", 3, rvec::Zero(6));
    rvec th = oracle::random_params(g, 6, 1.0);
    thermal_state ts = make_thermal_state(ph, th);
    EXPECT_NEAR(cross_entropy_exact(ts.rho, ph, th).energy_form, ref_entropy(ts.rho), 1e-10);
    cmat eta = oracle::random_density(g, 8);
    EXPECT_NEAR(cross_entropy_exact(eta, ph, rvec::Zero(6)).log_form, std::log(8.0), 1e-12);
}

TEST(CrossEntropy, RelativeEntropyIsNonnegative) {
    std::mt19937_64 g(5);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    for (int rep = 0; rep < 50; ++rep) {
        rvec th = oracle::random_params(g, 9, 2.0);
        cmat eta = rep % 2 ? oracle::random_density(g, 4) : oracle::random_pure(g, 4);
        EXPECT_GE(cross_entropy_exact(eta, ph, th).energy_form - ref_entropy(eta), -1e-9);
    }
}

TEST(CrossEntropy, TelescopingQuadrature) {
    std::mt19937_64 g(6);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 1.0);
    cmat eta = oracle::random_density(g, 4);
    std::vector<std::string> names = names_of(ph);
    double log_z = std::log(4.0);
    for (int j = 0; j < 4; ++j) {
        cmat hj = oracle::pauli_string(names[j]);
        log_z -= th(j) * oracle::integrate(
                             [&](double lambda) {
                                 return oracle::trace_real(hj, ref_thermal(oracle::hamiltonian(names, ref_masked(th, j, lambda))));
                             },
                             0.0, 1.0);
    }
    double energy = oracle::trace_real(oracle::hamiltonian(names, th), eta);
    EXPECT_NEAR(log_z, make_thermal_state(ph, th).logZ, 1e-10);
    EXPECT_NEAR(energy + log_z, cross_entropy_exact(eta, ph, th).energy_form, 1e-6);
}

TEST(LogPartition, ZeroParameters) {
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    estimator_plan p;
    p.K = 100;
    sample_summary s = log_partition_estimate(ph, rvec::Zero(4), p, {1, 1});
    EXPECT_EQ(s.mean, std::log(4.0));
    EXPECT_EQ(s.stderr_mean, 0.0);
}

TEST(LogPartition, SingleTerm) {
    const double th = 0.9;
    param_hamiltonian ph(1, {parse_pauli("Z")}, rvec::Constant(1, th));
    estimator_plan p;
    p.K = 200000;
    sample_summary s = log_partition_estimate(ph, ph.theta(), p, {2, 1});
    EXPECT_LT(std::abs(s.mean - std::log(2.0 * std::cosh(th))), 4.0 * s.stderr_mean);
}

TEST(LogPartition, HeisenbergWithinEpsilon) {
    std::mt19937_64 g(7);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 0.5);
    double exact = ref_log_z(oracle::hamiltonian(names_of(ph), th));
    EXPECT_NEAR(log_partition_bound(ph, th), th.cwiseAbs().sum(), 1e-12);
    estimator_plan p = plan_trials(0.05, 1e-3, log_partition_bound(ph, th));
    sample_summary s = log_partition_estimate(ph, th, p, {3, 1});
    EXPECT_LT(std::abs(s.mean - exact), p.epsilon);
    EXPECT_LT(std::abs(s.mean - exact), 4.0 * s.stderr_mean);
}

TEST(CrossEntropyEstimate, WithinFourSigma) {
    std::mt19937_64 g(8);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 0.5);
    cmat eta = oracle::random_density(g, 4);
    double exact = ref_cross_entropy(eta, oracle::hamiltonian(names_of(ph), th));
    estimator_plan p;
    p.K = 200000;
    sample_summary s = cross_entropy_estimate(eta, ph, th, p, {4, 1});
    EXPECT_LT(std::abs(s.mean - exact), 4.0 * s.stderr_mean);
    EXPECT_NEAR(cross_entropy_bound(ph, th), 2.0 * th.cwiseAbs().sum(), 1e-12);
}

TEST(CrossEntropyEstimate, ZeroParametersAndDeterminism) {
    std::mt19937_64 g(9);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    cmat eta = oracle::random_density(g, 4);
    estimator_plan p;
    p.K = 1000;
    sample_summary z = cross_entropy_estimate(eta, ph, rvec::Zero(4), p, {5, 1});
    EXPECT_EQ(z.mean, std::log(4.0));
    EXPECT_EQ(z.stderr_mean, 0.0);
    rvec th = oracle::random_params(g, 4, 1.0);
    p.K = 20000;
    EXPECT_EQ(cross_entropy_estimate(eta, ph, th, p, {6, 1}).mean, cross_entropy_estimate(eta, ph, th, p, {6, 8}).mean);
    EXPECT_THROW(cross_entropy_estimate(maximally_mixed(2), ph, th, p, {6, 1}), config_error);
}
