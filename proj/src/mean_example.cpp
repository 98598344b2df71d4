#include "ismi/mean_example.hpp"

#include <cmath>
#include <random>

#include "ismi/errors.hpp"

namespace ismi::mean {

namespace {
constexpr std::uint64_t kStream = 0x6d65616eULL;  // "mean"
}

void Params::validate() const {
    if (d < 1) throw DomainError("mean example: d must be >= 1");
    if (!(sigma_sq > 0.0)) throw DomainError("mean example: sigma^2 must be positive");
    if (n < 2) throw DomainError("mean example: n must be >= 2");
}

double exact_gen(const Params& p) {
    p.validate();
    return 2.0 * p.sigma_sq * p.d / p.n;
}

double exact_per_sample_mi(const Params& p) {
    p.validate();
    return 0.5 * p.d * std::log(static_cast<double>(p.n) / (p.n - 1.0));
}

GaussianJointSpec covariance_blocks(const Params& p) {
    p.validate();
    const Eigen::MatrixXd sigma = p.sigma_sq * Eigen::MatrixXd::Identity(p.d, p.d);
    return {sigma / p.n, sigma, sigma / p.n};
}

double ismi_bound_mean(const Params& p) {
    p.validate();
    const double n = p.n;
    const double ratio = (n + 1.0) / n;
    return p.sigma_sq * p.d * std::sqrt(2.0 * ratio * ratio * std::log(n / (n - 1.0)));
}

GenBound ismi_bound_composed(const Params& p) {
    const auto psi_minus = chi_squared_neg_cgf(p.d, p.sigma_l_sq());
    // ERM makes gen nonnegative, so only the psi_- side carries information;
    // psi_+ is reused for the (unused) lower side.
    return ismi_bound(MiProfile::uniform(p.n, exact_per_sample_mi(p)), psi_minus, psi_minus);
}

MeanSe monte_carlo_gen(const Params& p, int trials, std::uint64_t seed, int threads) {
    p.validate();
    if (trials < 100) throw DomainError("monte_carlo_gen: need at least 100 trials");
    const double sigma = std::sqrt(p.sigma_sq);
    const auto gaps = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        auto rng = substream(seed, kStream, t);
        std::normal_distribution<double> normal(0.0, sigma);
        Eigen::MatrixXd z(p.d, p.n);
        for (int i = 0; i < p.n; ++i)
            for (int c = 0; c < p.d; ++c) z(c, i) = normal(rng);
        const Eigen::VectorXd w = z.rowwise().mean();
        // Population risk E||w - Z~||^2 = sigma^2 d + ||w - mu||^2, exact.
        const double population = p.sigma_sq * p.d + w.squaredNorm();
        const double empirical = (z.colwise() - w).colwise().squaredNorm().mean();
        return population - empirical;
    });
    return mean_se(gaps);
}

}  // namespace ismi::mean
