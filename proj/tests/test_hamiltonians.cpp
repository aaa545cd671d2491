#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qneuron/errors.hpp"
#include "qneuron/hamiltonians.hpp"

using namespace qneuron;

namespace {

std::vector<std::string> term_strings(const param_hamiltonian& ph) {
    std::vector<std::string> out;
    for (const auto& t : ph.terms()) out.push_back(t.letters);
    return out;
}

}  // namespace

TEST(Pauli, MatricesMatchKroneckerOracle) {
    for (const std::string s : {"X", "Y", "Z", "I", "XY", "ZZI", "YXZ", "IXYZ"}) {
        cmat m = parse_pauli(s).matrix();
        EXPECT_LT((m - oracle::pauli_string(s)).cwiseAbs().maxCoeff(), 1e-15) << s;
    }
}

TEST(Pauli, SquareToIdentityAndHermitian) {
    for (const std::string s : {"X", "Y", "Z", "XY", "ZYX", "YYYY"}) {
        cmat m = parse_pauli(s).matrix();
        EXPECT_LT((m * m - cmat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Pauli, RejectsBadLetters) {
    EXPECT_THROW(parse_pauli("XQ"), config_error);
    EXPECT_THROW(parse_pauli(""), config_error);
}

TEST(Assemble, SingleTermAndZero) {
    param_hamiltonian ph(1, {parse_pauli("Z")}, rvec::Constant(1, 2.0));
    EXPECT_LT((assemble(ph, ph.theta()) - 2.0 * oracle::pauli('Z')).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(assemble(ph, rvec::Zero(1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Assemble, LengthMismatchThrows) {
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    EXPECT_THROW(assemble(ph, rvec::Zero(3)), config_error);
}

TEST(Assemble, Linearity) {
    std::mt19937_64 g(1);
    param_hamiltonian ph = build_model("heisenberg", 3, rvec::Zero(15));
    rvec a = oracle::random_params(g, 15, 1.0), b = oracle::random_params(g, 15, 1.0);
    cmat lhs = assemble(ph, 0.3 * a - 1.7 * b);
    cmat rhs = 0.3 * assemble(ph, a) - 1.7 * assemble(ph, b);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Tfim, TermsAndSingleCoupling) {
    param_hamiltonian ph = build_model("tfim", 2, rvec::Zero(4));
    EXPECT_EQ(ph.size(), 4);
    EXPECT_EQ(term_strings(ph), oracle::tfim_terms(2, 'X'));
    rvec p(4);
    p << 1, 0, 0, 0;
    EXPECT_LT((assemble(ph, p) - oracle::pauli_string("ZZ")).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Tfim, ThreeQubitChainSpectrum) {
    param_hamiltonian ph = build_model("tfim", 3, rvec::Zero(6));
    rvec p = rvec::Zero(6);
    p(0) = p(1) = 1.0;
    rvec lam = eigh(assemble(ph, p)).values;
    // Z1Z2 + Z2Z3 over the eight sign patterns.
    std::vector<double> expected;
    for (int b = 0; b < 8; ++b) {
        int z1 = (b & 4) ? -1 : 1, z2 = (b & 2) ? -1 : 1, z3 = (b & 1) ? -1 : 1;
        expected.push_back(z1 * z2 + z2 * z3);
    }
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(lam(k), expected[k], 1e-12);
}

TEST(Tfim, RejectsSingleQubit) { EXPECT_THROW(build_model("tfim", 1, rvec::Zero(2)), config_error); }

TEST(Ising, DiagonalEnergies) {
    param_hamiltonian ph = build_model("im", 2, rvec::Zero(4));
    EXPECT_EQ(term_strings(ph), oracle::tfim_terms(2, 'Z'));
    rvec p(4);
    p << 1, 1, 1, 0;
    cmat h = assemble(ph, p);
    EXPECT_NEAR(h(0, 0).real(), 3.0, 1e-15);
    EXPECT_NEAR(h(1, 1).real(), -1.0, 1e-15);
    EXPECT_NEAR(h(2, 2).real(), -1.0, 1e-15);
    EXPECT_NEAR(h(3, 3).real(), -1.0, 1e-15);
    EXPECT_EQ((h - cmat(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Heisenberg, TermCountAndOrder) {
    EXPECT_EQ(model_size("heisenberg", 2), 9);
    EXPECT_EQ(model_size("heisenberg", 7), 39);
    param_hamiltonian ph = build_model("heisenberg", 3, rvec::Zero(15));
    EXPECT_EQ(term_strings(ph), oracle::heisenberg_terms(3));
    EXPECT_LT(assemble(ph, rvec::Zero(15)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Fcim, TermCountAndDiagonal) {
    EXPECT_EQ(model_size("fcim", 2), 3);
    EXPECT_EQ(model_size("fcim", 7), 28);
    param_hamiltonian ph = build_model("fcim", 4, rvec::Zero(10));
    EXPECT_EQ(term_strings(ph), oracle::fcim_terms(4));
    std::mt19937_64 g(3);
    cmat h = assemble(ph, oracle::random_params(g, 10, 1.0));
    EXPECT_EQ((h - cmat(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Commuting, IsingTermsCommute) {
    for (const char* model : {"im", "fcim"}) {
        param_hamiltonian ph = build_model(model, 3, rvec::Zero(model_size(model, 3)));
        for (int a = 0; a < ph.size(); ++a)
            for (int b = 0; b < ph.size(); ++b) {
                cmat c = ph.term(a) * ph.term(b) - ph.term(b) * ph.term(a);
                EXPECT_EQ(c.cwiseAbs().maxCoeff(), 0.0);
            }
    }
}

TEST(Masked, Definition) {
    rvec th(3);
    th << 2, -3, 5;
    EXPECT_EQ((masked(th, 0, 1.0) - th).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(masked(th, 2, 0.0).cwiseAbs().maxCoeff(), 0.0);
    rvec m = masked(th, 1, 0.5);
    EXPECT_EQ(m(0), 0.0);
    EXPECT_EQ(m(1), -1.5);
    EXPECT_EQ(m(2), 5.0);
    EXPECT_THROW(masked(th, 3, 0.5), config_error);
    EXPECT_THROW(masked(th, 0, 1.5), config_error);
}

TEST(TermDistribution, Examples) {
    rvec a(2);
    a << 1, -1;
    term_distribution d = l1_and_term_distribution(a);
    EXPECT_DOUBLE_EQ(d.l1, 2.0);
    EXPECT_DOUBLE_EQ(d.q(0), 0.5);
    rvec b(3);
    b << 3, 0, 1;
    d = l1_and_term_distribution(b);
    EXPECT_DOUBLE_EQ(d.q(0), 0.75);
    EXPECT_DOUBLE_EQ(d.q(1), 0.0);
    EXPECT_DOUBLE_EQ(d.q(2), 0.25);
    EXPECT_NEAR(d.q.sum(), 1.0, 1e-12);
    EXPECT_THROW(l1_and_term_distribution(rvec::Zero(3)), config_error);
}

TEST(TermDistribution, Conditional) {
    rvec th(2);
    th << 2, 2;
    term_distribution d = conditional_distribution(th, 0, 0.5);
    EXPECT_NEAR(d.q(0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.q(1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.l1, 3.0, 1e-15);
}

TEST(Json, RoundTrip) {
    std::mt19937_64 g(4);
    param_hamiltonian ph = build_model("heisenberg", 2, oracle::random_params(g, 9, 1.0));
    param_hamiltonian back = hamiltonian_from_json(to_json(ph));
    EXPECT_EQ(back.n(), 2);
    EXPECT_EQ(back.size(), 9);
    EXPECT_LT((assemble(back, back.theta()) - assemble(ph, ph.theta())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Json, MissingKeyNamed) {
    nlohmann::json j = {{"n", 2}, {"terms", {"ZZ"}}};
    try {
        hamiltonian_from_json(j);
        FAIL();
    } catch (const config_error& e) {
        EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
    }
}
