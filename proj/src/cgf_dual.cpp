#include "ismi/cgf_dual.hpp"

#include <cmath>
#include <string>

#include "ismi/errors.hpp"

namespace ismi {

namespace {

constexpr int kGridPoints = 64;

double domain_cap(double upper) {
    return std::isfinite(upper) ? upper * (1.0 - 1e-12) : std::numeric_limits<double>::infinity();
}

}  // namespace

void CgfBound::validate() const {
    if (!psi) throw DomainError("CgfBound: psi is empty");
    if (!(upper > 0.0)) throw DomainError("CgfBound: upper endpoint must be positive");
    const double p0 = psi(0.0);
    if (std::abs(p0) > 1e-12) throw DomainError("CgfBound: psi(0) = " + std::to_string(p0));

    // Grid spans [0, min(b, 10)) on a quadratic spacing so the origin is well sampled.
    const double span = std::isfinite(upper) ? 0.999 * upper : 10.0;
    for (double h : {1e-6 * span, 1e-5 * span, 1e-4 * span}) {
        const double slope = psi(h) / h;
        const double curvature_scale = std::abs(psi(1e-2 * span)) / (1e-2 * span);
        if (std::abs(slope) > 1e-3 * std::max(1.0, curvature_scale) + 1e-9)
            throw DomainError("CgfBound: psi'(0) is not zero");
    }
    for (int i = 1; i <= kGridPoints; ++i) {
        const double t = static_cast<double>(i) / kGridPoints;
        const double a = span * t * t;
        const double b = span * ((i - 1.0) / kGridPoints) * ((i - 1.0) / kGridPoints);
        const double mid = 0.5 * (a + b);
        const double fa = psi(a), fb = psi(b), fm = psi(mid);
        if (!std::isfinite(fa)) throw DomainError("CgfBound: psi is not finite inside its domain");
        const double tol = 1e-10 * (1.0 + std::abs(fa) + std::abs(fb));
        if (fm > 0.5 * (fa + fb) + tol) throw DomainError("CgfBound: psi is not convex");
        // Also compare with the origin to catch concavity across cells.
        if (psi(0.5 * a) > 0.5 * (fa + p0) + tol) throw DomainError("CgfBound: psi is not convex");
    }
}

double chi_squared_exact_cgf(int d, double sigma_l_sq, double lambda) {
    if (d < 1 || !(sigma_l_sq > 0.0)) throw DomainError("chi_squared_exact_cgf: need d >= 1, sigma_l_sq > 0");
    const double u = 2.0 * sigma_l_sq * lambda;
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return -d * sigma_l_sq * lambda - 0.5 * d * std::log1p(-u);
}

CgfBound sub_gaussian_cgf(double R) {
    if (!(R > 0.0)) throw DomainError("sub_gaussian_cgf: R must be positive");
    const double r2 = R * R;
    CgfBound b;
    b.psi = [r2](double l) { return 0.5 * r2 * l * l; };
    b.closed_form_inverse = [r2](double y) { return std::sqrt(2.0 * r2 * y); };
    return b;
}

CgfBound chi_squared_neg_cgf(int d, double sigma_l_sq) {
    if (d < 1 || !(sigma_l_sq > 0.0)) throw DomainError("chi_squared_neg_cgf: need d >= 1, sigma_l_sq > 0");
    const double a = d * sigma_l_sq * sigma_l_sq;
    CgfBound b;
    b.psi = [a](double l) { return a * l * l; };
    b.closed_form_inverse = [a](double y) { return 2.0 * std::sqrt(a * y); };
    return b;
}

double legendre_dual_inverse(const CgfBound& bound, double y, const DualInverseOptions& opts) {
    if (!(y >= 0.0)) throw DomainError("legendre_dual_inverse: y must be nonnegative");
    if (y == 0.0) return 0.0;
    if (bound.has_closed_form() && !opts.force_numeric) return bound.closed_form_inverse(y);
    return legendre_dual_inverse_numeric(bound, y, opts);
}

double legendre_dual_inverse_numeric(const CgfBound& bound, double y, const DualInverseOptions& opts) {
    if (!(y >= 0.0)) throw DomainError("legendre_dual_inverse: y must be nonnegative");
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return std::numeric_limits<double>::infinity();

    const double cap = domain_cap(bound.upper);
    const double log_cap = std::log(cap);
    auto objective = [&](double t) {
        const double l = std::exp(t);
        return (y + bound.psi(l)) / l;
    };

    // Geometric bracket expansion in log-lambda from lambda = 1 (or the cap).
    double mid = std::min(0.0, log_cap);
    double step = 1.0;
    double lo = mid - step, hi = std::min(mid + step, log_cap);
    double f_mid = objective(mid);
    int it = 0;
    while (objective(lo) <= f_mid) {
        mid = lo;
        f_mid = objective(mid);
        step *= 2.0;
        lo = mid - step;
        if (++it > opts.max_iterations / 4) throw NonConvergence("legendre_dual_inverse: bracket did not close below");
    }
    while (hi < log_cap && objective(hi) < f_mid) {
        lo = mid;
        mid = hi;
        f_mid = objective(mid);
        step *= 2.0;
        hi = std::min(mid + step, log_cap);
        if (++it > opts.max_iterations / 4) throw NonConvergence("legendre_dual_inverse: bracket did not close above");
    }

    // Golden-section search on [lo, hi].
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = objective(c), fd = objective(d);
    double best = std::min({f_mid, fc, fd});
    for (int i = 0; i < opts.max_iterations; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        const double next = std::min({best, fc, fd});
        // The objective is flat to second order at the minimizer, so width 1e-6 in
        // log-lambda puts the value well inside rel_tol.
        if (b - a < std::sqrt(opts.rel_tol) * 1e-3) {
            return std::min(next, objective(0.5 * (a + b)));
        }
        best = next;
    }
    throw NonConvergence("legendre_dual_inverse: golden-section search did not stabilize");
}

}  // namespace ismi
