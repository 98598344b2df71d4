#include "ismi/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ismi/errors.hpp"

namespace ismi::logreg {

namespace {

constexpr std::uint64_t kTrialStream = 0x6c6f67726567ULL;  // "logreg"
constexpr std::uint64_t kShuffleStream = 0x73687566ULL;
constexpr int kMaxResamples = 1000;

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// log(1 + exp(-m)) without overflow.
double softplus_neg(double m) { return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
    if (m > 0.0) {
        const double e = std::exp(-m);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(m));
}

struct ObjGrad {
    double value;
    Eigen::VectorXd grad;
};

ObjGrad objective_and_gradient(const Eigen::VectorXd& w, const Dataset& data) {
    const Eigen::VectorXd margins = data.y.cwiseProduct(data.x * w);
    const double n = static_cast<double>(data.size());
    double value = 0.0;
    Eigen::VectorXd coef(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        value += softplus_neg(margins(i));
        coef(i) = -data.y(i) * sigmoid_neg(margins(i));
    }
    return {value / n, data.x.transpose() * coef / n};
}

Dataset canonical_order(const Dataset& data) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(data.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (data.y(a) != data.y(b)) return data.y(a) < data.y(b);
        for (Eigen::Index c = 0; c < data.x.cols(); ++c)
            if (data.x(a, c) != data.x(b, c)) return data.x(a, c) < data.x(b, c);
        return false;
    });
    Dataset out{Eigen::MatrixXd(data.x.rows(), data.x.cols()), Eigen::VectorXd(data.size())};
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.x.row(static_cast<Eigen::Index>(i)) = data.x.row(idx[i]);
        out.y(static_cast<Eigen::Index>(i)) = data.y(idx[i]);
    }
    return out;
}

Eigen::VectorXd sample_z(const Dataset& data, Eigen::Index row) {
    Eigen::VectorXd z(data.x.cols() + 1);
    z << data.x.row(row).transpose(), data.y(row);
    return z;
}

}  // namespace

void DataModel::validate() const {
    const auto d = mu_plus.size();
    if (d < 1 || mu_minus.size() != d || sigma.rows() != d || sigma.cols() != d)
        throw DomainError("DataModel: inconsistent dimensions");
    if (!sigma.isApprox(sigma.transpose())) throw DomainError("DataModel: Sigma is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw DomainError("DataModel: Sigma is not positive definite");
}

DataModel DataModel::reference() {
    return {Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(-1.0, -1.0), 4.0 * Eigen::Matrix2d::Identity()};
}

Dataset generate_dataset(const DataModel& model, int n, Rng& rng) {
    if (n < 1) throw DomainError("generate_dataset: n must be >= 1");
    const int d = model.dim();
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(model.sigma).matrixL();
    std::normal_distribution<double> normal;
    std::bernoulli_distribution coin(0.5);
    Dataset data{Eigen::MatrixXd(n, d), Eigen::VectorXd(n)};
    Eigen::VectorXd xi(d);
    for (int i = 0; i < n; ++i) {
        const bool positive = coin(rng);
        for (int c = 0; c < d; ++c) xi(c) = normal(rng);
        data.y(i) = positive ? 1.0 : -1.0;
        data.x.row(i) = ((positive ? model.mu_plus : model.mu_minus) + chol * xi).transpose();
    }
    return data;
}

double logistic_objective(const Eigen::VectorXd& w, const Dataset& data) {
    return objective_and_gradient(w, data).value;
}

Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& w, const Dataset& data) {
    return objective_and_gradient(w, data).grad;
}

TrainedModel train_logreg(const Dataset& raw, const TrainConfig& cfg) {
    if (raw.size() == 0) throw DomainError("train_logreg: empty dataset");
    const Dataset data = canonical_order(raw);
    TrainedModel m;
    m.w = Eigen::VectorXd::Zero(data.x.cols());
    auto cur = objective_and_gradient(m.w, data);
    double step = cfg.step;
    for (m.iterations = 0; m.iterations < cfg.max_iterations; ++m.iterations) {
        if (cur.grad.norm() < cfg.grad_tol) {
            m.converged = true;
            break;
        }
        Eigen::VectorXd next_w = m.w - step * cur.grad;
        auto next = objective_and_gradient(next_w, data);
        while (next.value > cur.value && step > 1e-12) {
            step *= 0.5;
            next_w = m.w - step * cur.grad;
            next = objective_and_gradient(next_w, data);
        }
        m.w = std::move(next_w);
        cur = std::move(next);
    }
    if (!m.converged && cur.grad.norm() < cfg.grad_tol) m.converged = true;
    m.final_objective = cur.value;
    m.grad_norm = cur.grad.norm();
    return m;
}

int classify(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x) { return w.dot(x) >= 0.0 ? 1 : -1; }

int zero_one_loss(const Eigen::VectorXd& w, const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
    return classify(w, x) == static_cast<int>(y) ? 0 : 1;
}

double empirical_risk(const Eigen::VectorXd& w, const Dataset& data) {
    int errors = 0;
    for (Eigen::Index i = 0; i < data.size(); ++i) errors += zero_one_loss(w, data.x.row(i).transpose(), data.y(i));
    return static_cast<double>(errors) / static_cast<double>(data.size());
}

double population_risk(const DataModel& model, const Eigen::VectorXd& w) {
    const double s2 = w.dot(model.sigma * w);
    if (s2 <= 0.0) return 0.5;  // w = 0: every point is labelled +1
    const double s = std::sqrt(s2);
    return 0.5 * q_function(w.dot(model.mu_plus) / s) + 0.5 * q_function(-w.dot(model.mu_minus) / s);
}

TrialOutcome run_trial(const DataModel& model, int n, int test_size, Rng& rng, const TrainConfig& cfg) {
    TrialOutcome out;
    for (;;) {
        const Dataset data = generate_dataset(model, n, rng);
        const TrainedModel m = train_logreg(data, cfg);
        const double train_risk = empirical_risk(m.w, data);
        if (!m.converged && train_risk == 0.0) {
            if (++out.resampled > kMaxResamples) throw NonConvergence("run_trial: every draw was separable");
            continue;
        }
        out.w = m.w;
        out.converged = m.converged;
        out.train_risk = train_risk;
        out.z_first = sample_z(data, 0);
        if (n > 1) out.z_second = sample_z(data, 1);
        break;
    }
    if (test_size > 0) out.test_risk = empirical_risk(out.w, generate_dataset(model, test_size, rng));
    return out;
}

std::vector<TrialOutcome> collect_runs(const DataModel& model, int n, int runs, int test_size, std::uint64_t seed,
                                       int threads) {
    model.validate();
    if (runs < 1) throw DomainError("collect_runs: need at least one run");
    return parallel_map(static_cast<std::size_t>(runs), threads, [&](std::size_t t) {
        auto rng = substream(seed, kTrialStream + static_cast<std::uint64_t>(n), t);
        return run_trial(model, n, test_size, rng);
    });
}

GenErrorEstimate empirical_gen_error(const DataModel& model, int n, int trials, int test_size, std::uint64_t seed,
                                     int threads) {
    if (trials < 100) throw DomainError("empirical_gen_error: need at least 100 trials");
    if (test_size < 10000) throw DomainError("empirical_gen_error: test_size must be >= 1e4");
    const auto runs = collect_runs(model, n, trials, test_size, seed, threads);
    std::vector<double> gaps;
    int resampled = 0;
    for (const auto& r : runs) {
        gaps.push_back(r.test_risk - r.train_risk);
        resampled += r.resampled;
    }
    const auto ms = mean_se(gaps);
    return {ms.mean, ms.se, resampled};
}

IsmiEstimate ismi_from_mi(const KnnMiResult& mi, int resampled) {
    auto bound_of = [](double v) { return std::sqrt(std::max(0.0, v) / 2.0); };
    return {bound_of(mi.estimate),
            0.5 * (bound_of(mi.estimate + mi.std_error) - bound_of(mi.estimate - mi.std_error)),
            mi.estimate,
            mi.std_error,
            mi.variant,
            mi.k,
            static_cast<int>(mi.n),
            resampled};
}

SampleCloud make_cloud(const std::vector<TrialOutcome>& runs, int k, int sample_index) {
    if (runs.empty()) throw DomainError("make_cloud: no runs");
    const auto dw = runs.front().w.size();
    const auto& first_z = sample_index == 0 ? runs.front().z_first : runs.front().z_second;
    if (first_z.size() == 0) throw DomainError("make_cloud: requested sample index is not available");
    SampleCloud cloud{PointMatrix(static_cast<Eigen::Index>(runs.size()), dw),
                      PointMatrix(static_cast<Eigen::Index>(runs.size()), first_z.size()), k};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        cloud.w.row(row) = runs[i].w.transpose();
        cloud.z.row(row) = (sample_index == 0 ? runs[i].z_first : runs[i].z_second).transpose();
    }
    return cloud;
}

SampleCloud make_independent_cloud(const std::vector<TrialOutcome>& runs, int k, std::uint64_t seed) {
    SampleCloud cloud = make_cloud(runs, k, 0);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(cloud.w.rows()));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    auto rng = substream(seed, kShuffleStream, 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointMatrix shuffled(cloud.w.rows(), cloud.w.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.row(static_cast<Eigen::Index>(i)) = cloud.w.row(perm[i]);
    cloud.w = std::move(shuffled);
    return cloud;
}

IsmiEstimate estimate_ismi_bound(const DataModel& model, int n, int runs, int k, std::uint64_t seed, int threads,
                                 KsgVariant variant) {
    if (runs < 1000) throw DomainError("estimate_ismi_bound: need N >= 1000 runs");
    const auto collected = collect_runs(model, n, runs, 0, seed, threads);
    int resampled = 0;
    for (const auto& r : collected) resampled += r.resampled;
    return ismi_from_mi(knn_mi(make_cloud(collected, k, 0), variant), resampled);
}

}  // namespace ismi::logreg
