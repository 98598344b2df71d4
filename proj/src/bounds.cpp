#include "ismi/bounds.hpp"

#include <cmath>

#include "ismi/errors.hpp"

namespace ismi {

namespace {

void check_profile(const MiProfile& profile) {
    if (profile.per_sample.empty()) throw DomainError("MiProfile: need n >= 1");
    for (double v : profile.per_sample)
        if (std::isnan(v)) throw DomainError("MiProfile: NaN mutual information");
}

// Estimators can return small negatives; MI is nonnegative by definition.
double clamp_mi(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

GenBound ismi_bound(const MiProfile& profile, const CgfBound& psi_plus, const CgfBound& psi_minus) {
    check_profile(profile);
    double up = 0.0, lo = 0.0;
    for (double v : profile.per_sample) {
        const double mi = clamp_mi(v);
        up += legendre_dual_inverse(psi_minus, mi);
        lo += legendre_dual_inverse(psi_plus, mi);
    }
    const double n = static_cast<double>(profile.per_sample.size());
    return {up / n, lo / n, "ismi"};
}

GenBound sub_gaussian_ismi(const MiProfile& profile, double R) {
    if (!(R > 0.0)) throw DomainError("sub_gaussian_ismi: R must be positive");
    check_profile(profile);
    double s = 0.0;
    for (double v : profile.per_sample) s += std::sqrt(2.0 * R * R * clamp_mi(v));
    s /= static_cast<double>(profile.per_sample.size());
    return {s, s, "ismi-sub-gaussian"};
}

double full_mi_bound(double mi_full, int n, double R) {
    if (std::isnan(mi_full) || mi_full < 0.0) throw DomainError("full_mi_bound: I(S;W) must be nonnegative");
    if (n < 1) throw DomainError("full_mi_bound: n must be positive");
    if (!(R > 0.0)) throw DomainError("full_mi_bound: R must be positive");
    if (std::isinf(mi_full)) return kInfinity;
    return std::sqrt(2.0 * R * R * mi_full / n);
}

}  // namespace ismi
