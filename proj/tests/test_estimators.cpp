#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qneuron/errors.hpp"
#include "qneuron/estimators.hpp"
#include "qneuron/hamiltonians.hpp"
#include "qneuron/observables.hpp"

using namespace qneuron;

namespace {

std::vector<std::string> names_of(const param_hamiltonian& ph) {
    std::vector<std::string> out;
    for (const auto& t : ph.terms()) out.push_back(t.letters);
    return out;
}

cmat ket0() {
    cvec v(2);
    v << 1, 0;
    return pure_density(v);
}

param_hamiltonian single_z(double theta) {
    return param_hamiltonian(1, {parse_pauli("Z")}, rvec::Constant(1, theta));
}

estimator_plan fixed_plan(long K) {
    estimator_plan p;
    p.K = K;
    return p;
}

void expect_within_4sigma(const sample_summary& s, double exact, const std::string& what) {
    EXPECT_LT(std::abs(s.mean - exact), 4.0 * s.stderr_mean + 1e-12)
        << what << ": estimate " << s.mean << " exact " << exact << " stderr " << s.stderr_mean;
}

// Reference first-term coefficients of the split gradient.
double first_coefficient(const std::string& family, int y) {
    if (family == "logloss") return -0.5 * y;
    return 0.5;
}

// Gradient of Tr[phi(y H) rho] for logloss, Tr[phi(H) rho] otherwise, by reference finite differences.
rvec reference_family_gradient(const param_hamiltonian& ph, const rvec& th, const std::string& family, double T,
                               const cmat& rho, int y) {
    auto f = oracle::by_name(family, T);
    if (family == "logloss") {
        auto g = [f, y](double x) { return f(y * x); };
        return oracle::fd_gradient(names_of(ph), th, g, rho);
    }
    return oracle::fd_gradient(names_of(ph), th, f, rho);
}

}  // namespace

TEST(Plan, HoeffdingCount) {
    EXPECT_EQ(plan_trials(0.01, 0.01, 1.0).K, 105967);
    EXPECT_EQ(plan_trials(0.01, 0.01, 1.0).K, oracle::hoeffding_trials(0.01, 0.01, 1.0));
    EXPECT_EQ(plan_trials(1.0, 2.0 / std::exp(2.0), 1.0).K, 4);
    long k1 = plan_trials(0.05, 0.01, 1.0).K, k2 = plan_trials(0.05, 0.01, 2.0).K;
    EXPECT_NEAR(static_cast<double>(k2) / k1, 4.0, 1e-3);
    EXPECT_GE(plan_trials(0.1, 0.1, 0.0).K, 1);
    EXPECT_THROW(plan_trials(0.0, 0.1, 1.0), config_error);
    EXPECT_THROW(plan_trials(0.1, 1.5, 1.0), config_error);
}

TEST(Hadamard, IdentityAndMinusIdentity) {
    std::mt19937_64 g(1);
    cmat sigma = oracle::random_density(g, 2);
    eigensystem meas = eigh(oracle::pauli('Z'));
    rng r(1, 0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(hadamard_joint_sample(r, cmat::Identity(2, 2), meas, sigma).z, 1);
        EXPECT_EQ(hadamard_joint_sample(r, -cmat::Identity(2, 2), meas, sigma).z, -1);
    }
}

TEST(Hadamard, JointLawIsNormalizedAndCorrelated) {
    std::mt19937_64 g(2);
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::ComplexEigenSolver<cmat> ces(oracle::random_hermitian(g, 4));
        cvec phases = ces.eigenvalues().unaryExpr([](std::complex<double> l) { return std::polar(1.0, l.real()); });
        cmat U = ces.eigenvectors() * phases.asDiagonal() * ces.eigenvectors().inverse();
        cmat sigma = oracle::random_density(g, 4);
        cmat obs = oracle::random_hermitian(g, 4);
        eigensystem meas = eigh(obs);
        Eigen::MatrixXd law = hadamard_joint_law(U, meas, sigma);
        EXPECT_NEAR(law.sum(), 1.0, 1e-12);
        EXPECT_GE(law.minCoeff(), -1e-12);
        double ezx = 0.0;
        for (int k = 0; k < 4; ++k) ezx += (law(0, k) - law(1, k)) * meas.values(k);
        EXPECT_NEAR(ezx, (obs * U * sigma).trace().real(), 1e-12);
    }
}

TEST(Hadamard, EmpiricalMeanMatchesTrace) {
    std::mt19937_64 g(3);
    cmat h = oracle::random_hermitian(g, 2);
    cmat U = propagator(eigh(h), 0.9);
    cmat sigma = oracle::random_density(g, 2);
    eigensystem meas = eigh(oracle::pauli('Z'));
    sample_summary s = run_trials(1000000, {5, 1}, [&](rng& r, long) {
        hadamard_outcome o = hadamard_joint_sample(r, U, meas, sigma);
        return o.z * o.x;
    });
    expect_within_4sigma(s, (oracle::pauli('Z') * U * sigma).trace().real(), "hadamard");
}

TEST(TanhGradient, RandomTfimWithinPlanEpsilon) {
    std::mt19937_64 g(4);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 1.0);
    cmat rho = oracle::random_density(g, 4);
    const double T = 1.5;
    rvec ref = oracle::fd_gradient(names_of(ph), th, oracle::act_tanh(T), rho);
    for (int j = 0; j < 4; ++j) {
        estimator_plan p = plan_trials(0.02, 1e-3, tanh_gradient_bound(ph, j, T));
        sample_summary s = estimate_tanh_gradient(ph, th, j, T, rho, p, {10 + static_cast<std::uint64_t>(j), 1});
        EXPECT_LT(std::abs(s.mean - ref(j)), p.epsilon) << j;
        expect_within_4sigma(s, ref(j), "tanh gradient");
    }
}

TEST(TanhGradient, ZeroParameters) {
    std::mt19937_64 g(5);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    cmat rho = oracle::random_density(g, 4);
    const double T = 2.0;
    for (int j : {0, 4, 8}) {
        sample_summary s = estimate_tanh_gradient(ph, rvec::Zero(9), j, T, rho, fixed_plan(200000), {6, 1});
        expect_within_4sigma(s, oracle::trace_real(ph.term(j), rho) / T, "theta=0");
    }
}

TEST(TanhGradient, ScalarPureState) {
    const double theta = 0.9, T = 0.8;
    sample_summary s =
        estimate_tanh_gradient(single_z(theta), rvec::Constant(1, theta), 0, T, ket0(), fixed_plan(200000), {7, 1});
    expect_within_4sigma(s, 1.0 / (T * std::pow(std::cosh(theta / T), 2)), "scalar");
    sample_summary m = estimate_tanh_gradient(single_z(theta), rvec::Constant(1, theta), 0, T, maximally_mixed(2),
                                              fixed_plan(200000), {7, 1});
    EXPECT_LT(std::abs(m.mean), 4.0 * m.stderr_mean + 1e-12);
}

TEST(ErfGradient, MatchesReference) {
    std::mt19937_64 g(8);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 0.5);
    cmat rho = oracle::random_density(g, 4);
    const double T = 1.2;
    rvec ref = oracle::fd_gradient(names_of(ph), th, oracle::act_erf(T), rho);
    for (int j : {0, 5}) {
        sample_summary s = estimate_erf_gradient(ph, th, j, T, rho, fixed_plan(200000), {9, 1});
        expect_within_4sigma(s, ref(j), "erf gradient");
    }
}

TEST(TanhObjective, RandomTfim) {
    std::mt19937_64 g(10);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.6);
    cmat rho = oracle::random_density(g, 4);
    const double T = 1.0;
    double ref = oracle::objective(names_of(ph), th, oracle::act_tanh(T), rho);
    estimator_plan p = plan_trials(0.03, 1e-3, tanh_objective_bound(ph, th, T));
    sample_summary s = estimate_tanh_objective(ph, th, T, rho, p, {11, 1});
    EXPECT_LT(std::abs(s.mean - ref), p.epsilon);
    expect_within_4sigma(s, ref, "tanh objective");
}

TEST(TanhObjective, ScalarAndZero) {
    const double theta = 0.7, T = 0.9;
    sample_summary s =
        estimate_tanh_objective(single_z(theta), rvec::Constant(1, theta), T, ket0(), fixed_plan(200000), {12, 1});
    expect_within_4sigma(s, std::tanh(theta / T), "scalar objective");
    sample_summary z = estimate_tanh_objective(single_z(0.0), rvec::Zero(1), T, ket0(), fixed_plan(100), {1, 1});
    EXPECT_EQ(z.mean, 0.0);
    EXPECT_EQ(z.count, 0);
}

TEST(LinearTerm, Examples) {
    std::mt19937_64 g(13);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 1.0);
    sample_summary a = estimate_linear_term(ph, th, maximally_mixed(4), 1.0, fixed_plan(100000), {14, 1});
    expect_within_4sigma(a, 0.0, "traceless");
    sample_summary b = estimate_linear_term(single_z(1.3), rvec::Constant(1, 1.3), ket0(), 0.5, fixed_plan(1000), {1, 1});
    EXPECT_NEAR(b.mean, 0.65, 1e-12);
    cmat rho = oracle::random_density(g, 4);
    double ref = 0.5 * oracle::trace_real(oracle::hamiltonian(names_of(ph), th), rho);
    estimator_plan p = plan_trials(0.02, 1e-3, linear_term_bound(ph, th, 0.5));
    sample_summary c = estimate_linear_term(ph, th, rho, 0.5, p, {15, 1});
    EXPECT_LT(std::abs(c.mean - ref), p.epsilon);
}

class ZetaFamilies : public ::testing::TestWithParam<std::string> {};

TEST_P(ZetaFamilies, MatchesGradientMinusFirstTerm) {
    const std::string family = GetParam();
    std::mt19937_64 g(16);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 0.25);
    cmat rho = oracle::random_density(g, 4);
    const double T = 1.0;
    activation act(parse_activation_kind(family), T);
    for (int y : {1, -1}) {
        if (family != "logloss" && y == -1) continue;
        rvec grad = reference_family_gradient(ph, th, family, T, rho, y);
        for (int j : {1, 7}) {
            double ref = grad(j) - first_coefficient(family, y) * oracle::trace_real(ph.term(j), rho);
            EXPECT_NEAR(zeta_exact(ph, th, j, act, rho, y), ref, 1e-6);
            sample_summary s = estimate_zeta_j(ph, th, j, act, rho, y, fixed_plan(200000), {17, 1});
            expect_within_4sigma(s, ref, family + " zeta");
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Families, ZetaFamilies,
                         ::testing::Values("softplus", "logloss", "silu", "grelu", "gelu"));

TEST(Zeta, ZeroParametersGiveZero) {
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    sample_summary s = estimate_zeta_j(ph, rvec::Zero(9), 3, activation(activation_kind::softplus, 1.0),
                                       maximally_mixed(4), 1, fixed_plan(1000), {1, 1});
    EXPECT_EQ(s.mean, 0.0);
}

TEST(Zeta, LoglossLabelFlipSymmetry) {
    std::mt19937_64 g(18);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.3);
    cmat rho = oracle::random_density(g, 4);
    activation act(activation_kind::logloss, 1.0);
    sample_summary a = estimate_zeta_j(ph, th, 1, act, rho, 1, fixed_plan(200000), {19, 1});
    sample_summary b = estimate_zeta_j(ph, -th, 1, act, rho, -1, fixed_plan(200000), {20, 1});
    EXPECT_LT(std::abs(a.mean + b.mean), 4.0 * std::hypot(a.stderr_mean, b.stderr_mean));
}

TEST(Telescoped, SoftplusScalar) {
    const double theta = 0.8, T = 1.0;
    sample_summary s = estimate_objective_telescoped(single_z(theta), rvec::Constant(1, theta),
                                                     activation(activation_kind::softplus, T), ket0(), 1,
                                                     fixed_plan(200000), {21, 1});
    expect_within_4sigma(s, T * std::log1p(std::exp(theta / T)), "softplus scalar");
}

TEST(Telescoped, FamiliesOnTfim) {
    std::mt19937_64 g(22);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.3);
    cmat rho = oracle::random_density(g, 4);
    const double T = 1.0;
    for (const std::string family : {"softplus", "silu", "logloss"}) {
        for (int y : {1, -1}) {
            if (family != "logloss" && y == -1) continue;
            activation act(parse_activation_kind(family), T);
            auto f = oracle::by_name(family, T);
            double ref = oracle::objective(names_of(ph), th, [f, y](double x) { return f(y * x); }, rho);
            EXPECT_NEAR(family_objective(ph, th, act, rho, y), ref, 1e-10);
            estimator_plan p = plan_trials(0.05, 1e-3, telescoped_bound(ph, th, act));
            sample_summary s = estimate_objective_telescoped(ph, th, act, rho, y, p, {23, 1});
            EXPECT_LT(std::abs(s.mean - ref), p.epsilon) << family;
            expect_within_4sigma(s, ref, family + " telescoped");
        }
    }
}

TEST(Telescoped, LoglossEqualsSoftplusOfNegatedHamiltonian) {
    std::mt19937_64 g(24);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.3);
    cmat rho = oracle::random_density(g, 4);
    sample_summary a = estimate_objective_telescoped(ph, th, activation(activation_kind::logloss, 1.0), rho, 1,
                                                     fixed_plan(200000), {25, 1});
    sample_summary b = estimate_objective_telescoped(ph, -th, activation(activation_kind::softplus, 1.0), rho, 1,
                                                     fixed_plan(200000), {26, 1});
    EXPECT_LT(std::abs(a.mean - b.mean), 4.0 * std::hypot(a.stderr_mean, b.stderr_mean));
}

TEST(Telescoped, ZeroParametersGiveActivationAtZero) {
    sample_summary s = estimate_objective_telescoped(single_z(0.0), rvec::Zero(1),
                                                     activation(activation_kind::softplus, 2.0), ket0(), 1,
                                                     fixed_plan(10), {1, 1});
    EXPECT_NEAR(s.mean, 2.0 * std::log(2.0), 1e-15);
    EXPECT_THROW(estimate_objective_telescoped(single_z(1.0), rvec::Constant(1, 1.0),
                                               activation(activation_kind::tanh, 1.0), ket0(), 1, fixed_plan(10),
                                               {1, 1}),
                 config_error);
}

TEST(SqlossGradient, MatchesChainRule) {
    std::mt19937_64 g(27);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.5);
    const double T = 1.0;
    labeled_dataset ds;
    for (int m = 0; m < 4; ++m) {
        ds.states.push_back(oracle::random_density(g, 4));
        ds.labels.push_back(std::uniform_real_distribution<double>(-1, 1)(g));
    }
    auto f = oracle::act_tanh(T);
    for (int j : {0, 2}) {
        double ref = 0.0;
        for (int m = 0; m < 4; ++m) {
            double v = oracle::objective(names_of(ph), th, f, ds.states[m]);
            ref += 2.0 * (v - ds.labels[m]) * oracle::fd_gradient(names_of(ph), th, f, ds.states[m])(j);
        }
        ref /= 4.0;
        EXPECT_NEAR(sqloss_gradient_exact(ds, ph, th, T, j), ref, 1e-8);
        sample_summary s = estimate_sqloss_gradient(ds, ph, th, T, j, fixed_plan(500000), {28, 1});
        expect_within_4sigma(s, ref, "sqloss gradient");
    }
}

TEST(SqlossGradient, PerfectFitAndScalar) {
    std::mt19937_64 g(29);
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    rvec th = oracle::random_params(g, 4, 0.5);
    const double T = 1.0;
    labeled_dataset ds;
    for (int m = 0; m < 3; ++m) {
        ds.states.push_back(oracle::random_density(g, 4));
        ds.labels.push_back(oracle::objective(names_of(ph), th, oracle::act_tanh(T), ds.states.back()));
    }
    sample_summary s = estimate_sqloss_gradient(ds, ph, th, T, 1, fixed_plan(200000), {30, 1});
    expect_within_4sigma(s, 0.0, "perfect fit");

    const double theta = 0.6, y = -0.2;
    labeled_dataset one;
    one.states.push_back(ket0());
    one.labels.push_back(y);
    double exact = 2.0 * (std::tanh(theta / T) - y) / std::pow(std::cosh(theta / T), 2) / T;
    sample_summary t = estimate_sqloss_gradient(one, single_z(theta), rvec::Constant(1, theta), T, 0,
                                                fixed_plan(200000), {31, 1});
    expect_within_4sigma(t, exact, "scalar sqloss");
    labeled_dataset empty;
    EXPECT_THROW(estimate_sqloss_gradient(empty, ph, th, T, 0, fixed_plan(10), {1, 1}), config_error);
}

TEST(Determinism, WorkerCountDoesNotChangeEstimates) {
    std::mt19937_64 g(32);
    param_hamiltonian ph = build_model("heisenberg", 2, rvec::Zero(9));
    rvec th = oracle::random_params(g, 9, 0.3);
    cmat rho = oracle::random_density(g, 4);
    activation act(activation_kind::silu, 1.0);
    sample_summary a = estimate_objective_telescoped(ph, th, act, rho, 1, fixed_plan(20000), {33, 1});
    sample_summary b = estimate_objective_telescoped(ph, th, act, rho, 1, fixed_plan(20000), {33, 8});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.stderr_mean, b.stderr_mean);
    sample_summary c = estimate_tanh_gradient(ph, th, 2, 1.0, rho, fixed_plan(20000), {34, 1});
    sample_summary d = estimate_tanh_gradient(ph, th, 2, 1.0, rho, fixed_plan(20000), {34, 3});
    EXPECT_EQ(c.mean, d.mean);
}
