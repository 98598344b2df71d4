#pragma once

#include <functional>
#include <limits>
#include <optional>

namespace ismi {

/// Convex upper bound psi on a cumulant generating function, defined on [0, b).
///
/// psi(0) = 0 and psi'(0) = 0 are required; these and convexity are checked
/// numerically by validate(). When the inverse Legendre dual has a closed
/// form it is carried alongside, otherwise legendre_dual_inverse minimizes
/// (y + psi(l)) / l numerically.
struct CgfBound {
    std::function<double(double)> psi;
    double upper = std::numeric_limits<double>::infinity();
    std::function<double(double)> closed_form_inverse;  // empty when numeric

    bool has_closed_form() const { return static_cast<bool>(closed_form_inverse); }

    /// Throws DomainError if psi(0) != 0, psi'(0) != 0 or psi fails the
    /// midpoint convexity test on a 64-point grid.
    void validate() const;
};

struct SubGaussianBound {
    double R;
};

/// Exact CGF of (sigma_l_sq * chi^2_d) minus its mean; finite for l < 1/(2 sigma_l_sq).
double chi_squared_exact_cgf(int d, double sigma_l_sq, double lambda);

CgfBound sub_gaussian_cgf(double R);
inline CgfBound sub_gaussian_cgf(SubGaussianBound b) { return sub_gaussian_cgf(b.R); }

/// psi_-(l) = d sigma_l^4 l^2, bounding the lower tail of a scaled chi-squared loss.
CgfBound chi_squared_neg_cgf(int d, double sigma_l_sq);

struct DualInverseOptions {
    double rel_tol = 1e-8;
    int max_iterations = 400;
    bool force_numeric = false;
};

/// inf over l in (0, b) of (y + psi(l)) / l.
double legendre_dual_inverse(const CgfBound& bound, double y, const DualInverseOptions& opts = {});

/// Always takes the numeric route, ignoring any closed form.
double legendre_dual_inverse_numeric(const CgfBound& bound, double y, const DualInverseOptions& opts = {});

}  // namespace ismi
