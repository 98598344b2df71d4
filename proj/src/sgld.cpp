#include "ismi/sgld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ismi/errors.hpp"

namespace ismi::sgld {

namespace {
constexpr std::uint64_t kPathStream = 0x73676c64ULL;  // "sgld"

void check_positive(double v, const char* what) {
    if (!(v > 0.0)) throw DomainError(std::string("sgld: ") + what + " must be positive");
}
}  // namespace

void Schedule::validate() const {
    if (eta.size() != sigma.size()) throw DomainError("Schedule: eta and sigma lengths differ");
    for (std::size_t t = 0; t < eta.size(); ++t)
        if (eta[t] < 0.0 || sigma[t] < 0.0) throw DomainError("Schedule: negative step or noise");
}

Schedule Schedule::harmonic(double c, int iterations) {
    if (c < 0.0 || iterations < 1) throw DomainError("Schedule::harmonic: need c >= 0, T >= 1");
    Schedule s;
    for (int t = 1; t <= iterations; ++t) {
        s.eta.push_back(c / t);
        s.sigma.push_back(std::sqrt(c / t));
    }
    return s;
}

Schedule Schedule::constant(double eta, double sigma, int iterations) {
    Schedule s{std::vector<double>(static_cast<std::size_t>(iterations), eta),
               std::vector<double>(static_cast<std::size_t>(iterations), sigma)};
    s.validate();
    return s;
}

std::string to_string(Sampling s) {
    return s == Sampling::WithoutReplacement ? "without-replacement" : "with-replacement";
}

Path Path::from_indices(int n, std::vector<int> indices) {
    if (n < 1) throw DomainError("Path: n must be >= 1");
    Path p;
    p.n = n;
    p.iterations.resize(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < indices.size(); ++t) {
        const int i = indices[t];
        if (i < 0 || i >= n) throw DomainError("Path: sample index out of range");
        p.iterations[static_cast<std::size_t>(i)].push_back(static_cast<int>(t) + 1);
    }
    p.indices = std::move(indices);
    return p;
}

Path sample_path(int n, int epochs, Sampling scheme, Rng& rng) {
    if (n < 1 || epochs < 1) throw DomainError("sample_path: need n, K >= 1");
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n) * epochs);
    if (scheme == Sampling::WithoutReplacement) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int k = 0; k < epochs; ++k) {
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            idx.insert(idx.end(), perm.begin(), perm.end());
        }
    } else {
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int t = 0; t < n * epochs; ++t) idx.push_back(pick(rng));
    }
    return Path::from_indices(n, std::move(idx));
}

namespace {

double info_ratio(const Schedule& s, int tau, double L) {
    const double eta = s.eta[static_cast<std::size_t>(tau - 1)];
    const double sigma = s.sigma[static_cast<std::size_t>(tau - 1)];
    if (eta == 0.0) return 0.0;
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return eta * eta * L * L / (sigma * sigma);
}

}  // namespace

double ismi_bound_per_path(const Path& path, const Schedule& schedule, double L, double R) {
    schedule.validate();
    if (static_cast<int>(path.indices.size()) > schedule.length()) throw DomainError("ismi_bound_per_path: schedule too short");
    double total = 0.0;
    for (const auto& taus : path.iterations) {
        double s = 0.0;
        for (int tau : taus) s += info_ratio(schedule, tau, L);
        total += std::sqrt(s);
    }
    return R * total / path.n;
}

std::vector<double> per_step_information(const Schedule& schedule, double L, int d) {
    schedule.validate();
    if (d < 1) throw DomainError("per_step_information: d must be >= 1");
    std::vector<double> out;
    for (int t = 1; t <= schedule.length(); ++t) out.push_back(0.5 * d * std::log1p(info_ratio(schedule, t, L) / d));
    return out;
}

double pre_relaxation_bound(const Path& path, const Schedule& schedule, double L, double R, int d) {
    const auto info = per_step_information(schedule, L, d);
    double total = 0.0;
    for (const auto& taus : path.iterations) {
        double mi = 0.0;
        for (int tau : taus) mi += info[static_cast<std::size_t>(tau - 1)];
        total += std::sqrt(2.0 * R * R * mi);
    }
    return total / path.n;
}

double analytic_ismi_bound(int n, int epochs, double c, double L, double R) {
    if (epochs < 2) throw DomainError("analytic_ismi_bound: need K >= 2");
    if (n < 1) throw DomainError("analytic_ismi_bound: n must be >= 1");
    const double tail = (std::log(epochs - 1.0) + 1.0) / n;
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += std::sqrt(1.0 / i + tail);
    return R * L * std::sqrt(c) * s / n;
}

double analytic_ismi_integral(int n, int epochs, double c, double L, double R) {
    if (epochs < 2) throw DomainError("analytic_ismi_integral: need K >= 2");
    // int_0^1 sqrt(1/x + A) dx = sqrt(1 + A) + asinh(sqrt(A)) / sqrt(A)
    const double a = 1.0 + std::log(epochs - 1.0);
    const double integral = std::sqrt(1.0 + a) + std::asinh(std::sqrt(a)) / std::sqrt(a);
    return R * L * std::sqrt(c) * integral / std::sqrt(static_cast<double>(n));
}

double pensia_bound(int n, int epochs, double c, double L, double R) {
    if (n < 1 || epochs < 1) throw DomainError("pensia_bound: need n, K >= 1");
    if (c < 0.0) throw DomainError("pensia_bound: c must be nonnegative");
    check_positive(L, "L");
    check_positive(R, "R");
    return R * L / std::sqrt(static_cast<double>(n)) * std::sqrt(c * std::log(static_cast<double>(n) * epochs) + c);
}

MeanSe monte_carlo_path_bound(int n, int epochs, double c, double L, double R, int paths, std::uint64_t seed,
                              int threads) {
    if (paths < 2) throw DomainError("monte_carlo_path_bound: need at least 2 paths");
    const auto schedule = Schedule::harmonic(c, n * epochs);
    const auto values = parallel_map(static_cast<std::size_t>(paths), threads, [&](std::size_t p) {
        auto rng = substream(seed, kPathStream + static_cast<std::uint64_t>(n) * 1000003ULL + epochs, p);
        return ismi_bound_per_path(sample_path(n, epochs, Sampling::WithoutReplacement, rng), schedule, L, R);
    });
    return mean_se(values);
}

Trajectory run_sgld(const logreg::Dataset& data, const Path& path, const Schedule& schedule, double L, Rng& rng) {
    schedule.validate();
    check_positive(L, "L");
    if (path.n != data.size()) throw DomainError("run_sgld: path and dataset sizes differ");
    if (static_cast<int>(path.indices.size()) > schedule.length()) throw DomainError("run_sgld: schedule too short");

    const auto d = data.x.cols();
    std::normal_distribution<double> normal;
    Trajectory tr;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    tr.iterates.push_back(w);
    Eigen::VectorXd noise(d);
    for (std::size_t t = 0; t < path.indices.size(); ++t) {
        const auto i = static_cast<Eigen::Index>(path.indices[t]);
        const double y = data.y(i);
        const Eigen::VectorXd x = data.x.row(i).transpose();
        const double m = y * w.dot(x);
        const double coef = m > 0.0 ? -y * std::exp(-m) / (1.0 + std::exp(-m)) : -y / (1.0 + std::exp(m));
        Eigen::VectorXd g = coef * x;
        const double gn = g.norm();
        if (gn > L) g *= L / gn;
        tr.grad_norms.push_back(g.norm());
        for (Eigen::Index c = 0; c < d; ++c) noise(c) = normal(rng);
        w = w - schedule.eta[t] * g + schedule.sigma[t] * noise;
        tr.iterates.push_back(w);
        if ((t + 1) % static_cast<std::size_t>(path.n) == 0) tr.epoch_objective.push_back(logreg::logistic_objective(w, data));
    }
    return tr;
}

Trajectory run_sgld(const logreg::Dataset& data, const RunConfig& cfg, Rng& rng) {
    const int n = static_cast<int>(data.size());
    if (cfg.n != 0 && cfg.n != n) throw DomainError("run_sgld: config n differs from dataset size");
    const auto path = sample_path(n, cfg.epochs, cfg.sampling, rng);
    return run_sgld(data, path, Schedule::harmonic(cfg.c, n * cfg.epochs), cfg.L, rng);
}

}  // namespace ismi::sgld
