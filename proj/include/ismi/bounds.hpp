#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ismi/cgf_dual.hpp"

namespace ismi {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Per-sample mutual informations I(W; Z_i) and, optionally, I(S; W).
struct MiProfile {
    std::vector<double> per_sample;
    std::optional<double> full;  // may be +inf

    static MiProfile uniform(int n, double mi) { return {std::vector<double>(static_cast<std::size_t>(n), mi), {}}; }
};

/// Two-sided generalization bound: gen <= upper, -gen <= lower.
struct GenBound {
    double upper;
    double lower;
    std::string method;
};

/// (1/n) sum_i psi_-^{*-1}(I_i) bounds gen; (1/n) sum_i psi_+^{*-1}(I_i) bounds -gen.
GenBound ismi_bound(const MiProfile& profile, const CgfBound& psi_plus, const CgfBound& psi_minus);

/// Symmetric form for an R-sub-Gaussian loss: (1/n) sum_i sqrt(2 R^2 I_i).
GenBound sub_gaussian_ismi(const MiProfile& profile, double R);

/// sqrt(2 R^2 I(S;W) / n); +inf passes through.
double full_mi_bound(double mi_full, int n, double R);

}  // namespace ismi
