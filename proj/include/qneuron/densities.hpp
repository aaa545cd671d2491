#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace qneuron {

// Counter-keyed random stream. Each (seed, stream) pair gives an independent
// sequence; usable as a UniformRandomBitGenerator.
class rng {
public:
    using result_type = std::uint64_t;

    rng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // Uniform on the open interval (0,1).
    double uniform();
    double normal();
    bool coin() { return ((*this)() >> 63) != 0; }
    int index(int n);  // uniform on {0,...,n-1}

private:
    std::uint64_t state_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t mix64(std::uint64_t x);

class tabulated_inverse_cdf {
public:
    // Knots t_0 = 0 < t_1 < ... < t_m = bound of the positive half of an even
    // density, with cumulative half-masses u_i normalized so u_m = 1.
    tabulated_inverse_cdf(std::vector<double> t, std::vector<double> u);

    double bound() const { return t_.back(); }
    size_t knots() const { return t_.size(); }
    // Quantile of the positive half for u in [0,1].
    double half_quantile(double u) const;
    // Cumulative distribution of the full even law.
    double cdf(double x) const;
    double sample(rng& r) const;

private:
    std::vector<double> t_, u_;
};

double mu_pdf(double t);
double gamma_pdf(double t);
double xi_pdf(double t);
double gaussian_pdf(double x, double sigma);

const tabulated_inverse_cdf& mu_table();
const tabulated_inverse_cdf& gamma_table();

double sample_uniform(rng& r);
double sample_mu(rng& r);
double sample_gamma(rng& r);
double sample_xi(rng& r);

struct xi_draw {
    double t;
    bool from_gamma;
};
xi_draw sample_xi_branch(rng& r);

double sample_logistic(rng& r, double T);
double sample_gaussian(rng& r, double sigma);
double sample_kappa(rng& r);

}  // namespace qneuron
