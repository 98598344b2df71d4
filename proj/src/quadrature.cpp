#include "ismi/quadrature.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ismi/errors.hpp"

namespace ismi {

namespace {

// Trapezoid refinement reused across doublings; Simpson = (4 T_{2m} - T_m) / 3.
double simpson_doubling(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg) {
    int m = std::max(1, cfg.initial_panels);
    double h = (b - a) / m;
    double trap = 0.5 * (f(a) + f(b));
    for (int i = 1; i < m; ++i) trap += f(a + i * h);
    trap *= h;

    double prev_simpson = std::nan("");
    while (m <= cfg.max_panels) {
        double mid = 0.0;
        for (int i = 0; i < m; ++i) mid += f(a + (i + 0.5) * h);
        const double next_trap = 0.5 * trap + 0.5 * h * mid;
        const double simpson = (4.0 * next_trap - trap) / 3.0;
        if (std::abs(simpson - prev_simpson) < cfg.tolerance) return simpson;
        prev_simpson = simpson;
        trap = next_trap;
        m *= 2;
        h *= 0.5;
    }
    throw NonConvergence("integrate: Simpson refinement budget exhausted");
}

double gauss_legendre_panels(const std::function<double(double)>& f, double a, double b, int panels) {
    static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                             0.9061798459386640};
    static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                             0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f(c + 0.5 * h * x[k]);
        sum += 0.5 * h * s;
    }
    return sum;
}

double gauss_legendre_doubling(const std::function<double(double)>& f, double a, double b,
                               const QuadratureConfig& cfg) {
    int m = std::max(1, cfg.initial_panels);
    double prev = gauss_legendre_panels(f, a, b, m);
    while (m < cfg.max_panels) {
        m *= 2;
        const double next = gauss_legendre_panels(f, a, b, m);
        if (std::abs(next - prev) < cfg.tolerance) return next;
        prev = next;
    }
    throw NonConvergence("integrate: Gauss-Legendre refinement budget exhausted");
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg) {
    if (!(b > a)) throw DomainError("integrate: need a < b");
    return cfg.rule == QuadratureRule::Simpson ? simpson_doubling(f, a, b, cfg)
                                                : gauss_legendre_doubling(f, a, b, cfg);
}

double differential_entropy(const Density1D& density) {
    auto checked = [&](double x) {
        const double p = density.pdf(x);
        if (p < -1e-14 || std::isnan(p)) throw DomainError("differential_entropy: density is negative at " + std::to_string(x));
        return std::max(p, 0.0);
    };
    const double mass = integrate(checked, density.a, density.b, density.config);
    if (std::abs(mass - 1.0) > 1e-4)
        throw NonNormalized("differential_entropy: density integrates to " + std::to_string(mass));
    return integrate(
        [&](double x) {
            const double p = checked(x);
            return p < 1e-300 ? 0.0 : -p * std::log(p);
        },
        density.a, density.b, density.config);
}

QuadratureConfig rayleigh_default_config() {
    QuadratureConfig cfg;
    cfg.rule = QuadratureRule::GaussLegendre;
    cfg.initial_panels = 4;
    cfg.tolerance = 1e-10;
    cfg.max_panels = 1 << 12;
    return cfg;
}

double expectation_over_rayleigh(const std::function<double(double)>& f, double scale, double truncation,
                                 QuadratureConfig cfg) {
    if (!(scale > 0.0)) throw DomainError("expectation_over_rayleigh: scale must be positive");
    const double r_max = truncation > 0.0 ? truncation : 8.0 * scale;
    const double s2 = scale * scale;
    return integrate([&](double r) { return f(r) * (r / s2) * std::exp(-0.5 * r * r / s2); }, 0.0, r_max, cfg);
}

}  // namespace ismi
