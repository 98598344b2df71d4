#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "ismi/parallel.hpp"
#include "ismi/quadrature.hpp"

namespace ismi::gp {

// Hypotheses are unit vectors w = (sin phi, cos phi), phi in [0, 2 pi);
// the loss is l(w, z) = -<w, z> with z ~ N(0, I_2).

using Vec2 = Eigen::Vector2d;

struct Params {
    int n = 2;
    double epsilon = 1.0;  // mass of the noise atom at 0; 1 means noiseless ERM

    void validate() const;
};

struct Phase {
    double phi;
    bool degenerate;  // mean vector was exactly zero; phi reported as 0
};

/// Phase of v under the (sin phi, cos phi) convention, wrapped to [0, 2 pi).
Phase phase_of(const Vec2& v);

Phase erm_phase(std::span<const Vec2> samples);

/// ERM phase shifted by xi: 0 with probability epsilon, else uniform on (-pi, pi).
double noisy_erm_phase(std::span<const Vec2> samples, double epsilon, Rng& rng);

double exact_gen_erm(int n);
double exact_gen_noisy(int n, double epsilon);

/// Density of the ERM phase given ||Z_i|| = r, rotated so Z_i sits at phase 0.
double phase_pdf(double phi, double r, int n, double epsilon = 1.0);

Density1D phase_density(double r, int n);
Density1D phase_density_noisy(double r, int n, double epsilon);

/// I(W; Z_i) = log 2 pi - E_r[h(phase | r)], r ~ Rayleigh(1). Requires n >= 2.
double ismi_gp(int n, double epsilon = 1.0);

/// sqrt(2 I(W; Z_i)); +inf at n = 1 where W is a function of Z_1.
double ismi_bound_gp(int n, double epsilon = 1.0);

/// Chaining reference curve 19.0352 / sqrt(n).
double cmi_reference(int n);

/// Monte Carlo estimate of gen = E[-L_S(W)], the population term being zero.
MeanSe monte_carlo_gen(const Params& p, int trials, std::uint64_t seed, int threads = 1);

/// ERM phases relative to the direction of Z_i = (r, 0), drawing the other n - 1 samples.
std::vector<double> sample_conditional_phases(double r, int n, int count, std::uint64_t seed, int threads = 1);

/// Kolmogorov-Smirnov distance between samples on [0, 2 pi) and a density there.
double ks_distance(std::vector<double> samples, const Density1D& density);

}  // namespace ismi::gp
