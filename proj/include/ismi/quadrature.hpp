#pragma once

#include <functional>

namespace ismi {

enum class QuadratureRule { Simpson, GaussLegendre };

struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::Simpson;
    int initial_panels = 16;
    double tolerance = 1e-7;  // absolute change between successive refinements
    int max_panels = 1 << 20;
};

/// Composite rule on [a, b] with panel doubling until successive estimates agree.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg = {});

/// A density on [a, b) with the quadrature settings used to integrate it.
struct Density1D {
    std::function<double(double)> pdf;
    double a = 0.0;
    double b = 1.0;
    QuadratureConfig config{};
};

/// -int p log p over the support, with p log p := 0 below 1e-300.
/// Throws NonNormalized when int p deviates from one by more than 1e-4.
double differential_entropy(const Density1D& density);

/// Gauss-Legendre panels, tolerance 1e-10.
QuadratureConfig rayleigh_default_config();

/// int_0^{r_max} f(r) (r / s^2) exp(-r^2 / (2 s^2)) dr; r_max defaults to 8 s.
double expectation_over_rayleigh(const std::function<double(double)>& f, double scale = 1.0,
                                 double truncation = 0.0, QuadratureConfig cfg = rayleigh_default_config());

}  // namespace ismi
