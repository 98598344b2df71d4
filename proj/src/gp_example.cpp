#include "ismi/gp_example.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ismi/bounds.hpp"
#include "ismi/errors.hpp"

namespace ismi::gp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kGenStream = 0x67702d67656eULL;
constexpr std::uint64_t kPhaseStream = 0x67702d706861ULL;

double wrap(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

QuadratureConfig phase_quadrature() {
    QuadratureConfig cfg;
    cfg.rule = QuadratureRule::Simpson;
    cfg.initial_panels = 32;
    cfg.tolerance = 1e-12;
    cfg.max_panels = 1 << 16;
    return cfg;
}

}  // namespace

void Params::validate() const {
    if (n < 1) throw DomainError("gp example: n must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("gp example: epsilon must lie in [0, 1]");
}

Phase phase_of(const Vec2& v) {
    if (v.x() == 0.0 && v.y() == 0.0) return {0.0, true};
    return {wrap(std::atan2(v.x(), v.y())), false};
}

Phase erm_phase(std::span<const Vec2> samples) {
    if (samples.empty()) throw DomainError("erm_phase: no samples");
    Vec2 sum = Vec2::Zero();
    for (const auto& z : samples) sum += z;
    return phase_of(sum / static_cast<double>(samples.size()));
}

double noisy_erm_phase(std::span<const Vec2> samples, double epsilon, Rng& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("noisy_erm_phase: epsilon must lie in [0, 1]");
    const double phi = erm_phase(samples).phi;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < epsilon) return phi;
    std::uniform_real_distribution<double> shift(-std::numbers::pi, std::numbers::pi);
    return wrap(phi + shift(rng));
}

double exact_gen_erm(int n) {
    if (n < 1) throw DomainError("exact_gen_erm: n must be >= 1");
    return std::sqrt(std::numbers::pi / (2.0 * n));
}

double exact_gen_noisy(int n, double epsilon) {
    Params{n, epsilon}.validate();
    return epsilon * exact_gen_erm(n);
}

double phase_pdf(double phi, double r, int n, double epsilon) {
    const double m = n - 1.0;
    const double c = std::cos(phi), s = std::sin(phi);
    const double base = std::exp(-r * r / (2.0 * m)) / kTwoPi;
    const double peak = r * c / std::sqrt(kTwoPi * m) * std::exp(-r * r * s * s / (2.0 * m)) * q_function(-r * c / std::sqrt(m));
    const double f = std::max(0.0, base + peak);
    return (1.0 - epsilon) / kTwoPi + epsilon * f;
}

Density1D phase_density(double r, int n) { return phase_density_noisy(r, n, 1.0); }

Density1D phase_density_noisy(double r, int n, double epsilon) {
    if (n < 2) throw DomainError("phase_density: n must be >= 2");
    if (!(r >= 0.0)) throw DomainError("phase_density: r must be nonnegative");
    Params{n, epsilon}.validate();
    return {[=](double phi) { return phase_pdf(phi, r, n, epsilon); }, 0.0, kTwoPi, phase_quadrature()};
}

double ismi_gp(int n, double epsilon) {
    if (n < 2) throw DomainError("ismi_gp: n must be >= 2");
    Params{n, epsilon}.validate();
    if (epsilon == 0.0) return 0.0;
    const double log_two_pi = std::log(kTwoPi);
    const double mi = expectation_over_rayleigh(
        [&](double r) { return log_two_pi - differential_entropy(phase_density_noisy(r, n, epsilon)); });
    return std::max(0.0, mi);
}

double ismi_bound_gp(int n, double epsilon) {
    if (n == 1) return kInfinity;
    return std::sqrt(2.0 * ismi_gp(n, epsilon));
}

double cmi_reference(int n) {
    if (n < 1) throw DomainError("cmi_reference: n must be >= 1");
    return 19.0352 / std::sqrt(static_cast<double>(n));
}

MeanSe monte_carlo_gen(const Params& p, int trials, std::uint64_t seed, int threads) {
    p.validate();
    if (trials < 2) throw DomainError("gp monte_carlo_gen: need at least 2 trials");
    const auto gaps = parallel_map(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        auto rng = substream(seed, kGenStream, t);
        std::normal_distribution<double> normal;
        std::vector<Vec2> z(static_cast<std::size_t>(p.n));
        Vec2 mean = Vec2::Zero();
        for (auto& v : z) {
            v = Vec2(normal(rng), normal(rng));
            mean += v;
        }
        mean /= static_cast<double>(p.n);
        const double phi = p.epsilon == 1.0 ? erm_phase(z).phi : noisy_erm_phase(z, p.epsilon, rng);
        const Vec2 w(std::sin(phi), std::cos(phi));
        return w.dot(mean);  // -L_S(w)
    });
    return mean_se(gaps);
}

std::vector<double> sample_conditional_phases(double r, int n, int count, std::uint64_t seed, int threads) {
    if (n < 2) throw DomainError("sample_conditional_phases: n must be >= 2");
    const Vec2 zi(r, 0.0);
    const double zi_phase = phase_of(zi).phi;
    return parallel_map(static_cast<std::size_t>(count), threads, [&](std::size_t t) {
        auto rng = substream(seed, kPhaseStream, t);
        std::normal_distribution<double> normal;
        Vec2 sum = zi;
        for (int j = 1; j < n; ++j) sum += Vec2(normal(rng), normal(rng));
        return wrap(phase_of(sum / static_cast<double>(n)).phi - zi_phase);
    });
}

double ks_distance(std::vector<double> samples, const Density1D& density) {
    if (samples.empty()) throw DomainError("ks_distance: no samples");
    constexpr int kGrid = 1 << 16;
    const double h = (density.b - density.a) / kGrid;
    std::vector<double> cdf(kGrid + 1, 0.0);
    double prev = density.pdf(density.a);
    for (int i = 1; i <= kGrid; ++i) {
        const double cur = density.pdf(density.a + i * h);
        cdf[i] = cdf[i - 1] + 0.5 * h * (prev + cur);
        prev = cur;
    }
    auto cdf_at = [&](double x) {
        const double pos = std::clamp((x - density.a) / h, 0.0, static_cast<double>(kGrid));
        const auto i = std::min(static_cast<int>(pos), kGrid - 1);
        return cdf[i] + (pos - i) * (cdf[i + 1] - cdf[i]);
    };
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf_at(samples[i]);
        ks = std::max({ks, std::abs(f - i / m), std::abs((i + 1) / m - f)});
    }
    return ks;
}

}  // namespace ismi::gp
