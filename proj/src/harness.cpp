#include "ismi/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ismi/bounds.hpp"
#include "ismi/cgf_dual.hpp"
#include "ismi/errors.hpp"
#include "ismi/gp_example.hpp"
#include "ismi/kdtree.hpp"
#include "ismi/knn_mi.hpp"
#include "ismi/logreg.hpp"
#include "ismi/mean_example.hpp"
#include "ismi/mi_oracle.hpp"
#include "ismi/sgld.hpp"

namespace ismi::harness {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c].name;
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << '\n';
    }
    return os.str();
}

namespace {

constexpr std::uint64_t kDefaultSeed = 2019;

std::vector<int> powers_of_two(int from, int to) {
    std::vector<int> out;
    for (int n = from; n <= to; n *= 2) out.push_back(n);
    return out;
}

json defaults_for(const std::string& experiment) {
    if (experiment == "mean")
        return {{"n_grid", {2, 5, 10, 20, 50, 100, 200, 500, 1000}},
                {"d", 2},
                {"sigma_sq", 1.0},
                {"trials", 100000},
                {"seed", kDefaultSeed}};
    if (experiment == "gp")
        return {{"n_grid", powers_of_two(1, 1024)}, {"epsilon", 1.0}, {"trials", 100000}, {"seed", kDefaultSeed}};
    if (experiment == "gp-noisy")
        return {{"n_grid", powers_of_two(1, 1024)}, {"epsilon", 0.05}, {"trials", 100000}, {"seed", kDefaultSeed}};
    if (experiment == "sgld")
        return {{"n_grid", {100, 1000, 10000}},
                {"epochs", {2, 10, 50}},
                {"c", 1.0},
                {"L", 1.0},
                {"R", 1.0},
                {"trials", 1000},
                {"seed", kDefaultSeed}};
    if (experiment == "logreg")
        return {{"n_grid", {25, 50, 100, 200, 400}},
                {"N", 5000},
                {"k", 5},
                {"test_size", 10000},
                {"variant", "ksg-revised"},
                {"seed", kDefaultSeed}};
    if (experiment == "selftest") return {{"joints", 1000}, {"seed", kDefaultSeed}};
    throw DomainError("unknown experiment: " + experiment);
}

std::vector<int> int_list(const json& j, const char* key) {
    auto v = j.at(key).get<std::vector<int>>();
    if (v.empty()) throw DomainError(std::string(key) + " must not be empty");
    return v;
}

// ---------------------------------------------------------------- mean

Outcome run_mean(const json& p, int threads) {
    Outcome out;
    out.table.columns = {{"n", "sample count"},
                         {"d", "dimension"},
                         {"sigma_sq", "per-coordinate variance"},
                         {"gen_exact", "exact generalization error 2 sigma^2 d / n"},
                         {"gen_mc", "Monte Carlo generalization error"},
                         {"gen_mc_se", "standard error of gen_mc"},
                         {"mi_per_sample", "I(W; Z_i) = (d/2) log(n / (n-1)), nats"},
                         {"ismi_bound", "ISMI bound from the chi-squared CGF bound"},
                         {"full_mi_bound", "bound via I(S; W); inf because W is deterministic given S"}};
    const int d = p.at("d");
    const double sigma_sq = p.at("sigma_sq");
    const int trials = p.at("trials");
    const std::uint64_t seed = p.at("seed");
    for (int n : int_list(p, "n_grid")) {
        const mean::Params mp{d, sigma_sq, n};
        const double truth = mean::exact_gen(mp);
        const auto mc = mean::monte_carlo_gen(mp, trials, seed + static_cast<std::uint64_t>(n), threads);
        const double mi = mean::exact_per_sample_mi(mp);
        const double bound = mean::ismi_bound_mean(mp);
        const double full = full_mi_bound(kInfinity, n, 1.0);
        out.table.rows.push_back({std::to_string(n), std::to_string(d), format_number(sigma_sq), format_number(truth),
                                  format_number(mc.mean), format_number(mc.se), format_number(mi),
                                  format_number(bound), format_number(full)});
        const bool ok = bound >= truth && bound >= mc.mean - 3.0 * mc.se;
        out.valid = out.valid && ok;
        char line[256];
        std::snprintf(line, sizeof line, "mean n=%d gen=%.6g mc=%.6g+-%.2g ismi=%.6g %s", n, truth, mc.mean, mc.se,
                      bound, ok ? "ok" : "BOUND BELOW TRUTH");
        out.summary.push_back(line);
    }
    return out;
}

// ---------------------------------------------------------------- gp

Outcome run_gp(const json& p, int threads) {
    Outcome out;
    out.table.columns = {{"n", "sample count"},
                         {"epsilon", "mass of the noise atom at 0 (1 = noiseless ERM)"},
                         {"gen_exact", "exact generalization error epsilon sqrt(pi / (2n))"},
                         {"gen_mc", "Monte Carlo generalization error"},
                         {"gen_mc_se", "standard error of gen_mc"},
                         {"mi_per_sample", "I(W; Z_i) by quadrature, nats; inf at n = 1"},
                         {"ismi_bound", "sqrt(2 I(W; Z_i)); inf at n = 1"},
                         {"cmi_reference", "chaining reference curve 19.0352 / sqrt(n)"}};
    const double eps = p.at("epsilon");
    const int trials = p.at("trials");
    const std::uint64_t seed = p.at("seed");
    for (int n : int_list(p, "n_grid")) {
        const gp::Params gpp{n, eps};
        gpp.validate();
        const double truth = gp::exact_gen_noisy(n, eps);
        const auto mc = gp::monte_carlo_gen(gpp, trials, seed + static_cast<std::uint64_t>(n), threads);
        const double mi = n >= 2 ? gp::ismi_gp(n, eps) : kInfinity;
        const double bound = gp::ismi_bound_gp(n, eps);
        const double cmi = gp::cmi_reference(n);
        out.table.rows.push_back({std::to_string(n), format_number(eps), format_number(truth), format_number(mc.mean),
                                  format_number(mc.se), format_number(mi), format_number(bound), format_number(cmi)});
        bool ok = bound >= truth;
        if (eps == 1.0 && n >= 2) ok = ok && bound < cmi;
        out.valid = out.valid && ok;
        char line[256];
        std::snprintf(line, sizeof line, "gp n=%d eps=%g gen=%.6g mc=%.6g+-%.2g ismi=%.6g cmi=%.6g %s", n, eps, truth,
                      mc.mean, mc.se, bound, cmi, ok ? "ok" : "CHECK FAILED");
        out.summary.push_back(line);
    }
    return out;
}

// ---------------------------------------------------------------- sgld

Outcome run_sgld(const json& p, int threads) {
    Outcome out;
    out.table.columns = {{"n", "sample count"},
                         {"K", "epochs"},
                         {"c", "step-size constant, eta_t = c / t, sigma_t = sqrt(eta_t)"},
                         {"L", "gradient bound"},
                         {"R", "sub-Gaussian parameter"},
                         {"ismi_analytic", "closed-form ISMI bound for without-replacement sampling"},
                         {"ismi_mc_mean", "mean of the per-path ISMI bound over sampled paths"},
                         {"ismi_mc_se", "standard error of ismi_mc_mean"},
                         {"pensia", "baseline bound via I(S; W)"},
                         {"ratio", "pensia / ismi_analytic"}};
    const double c = p.at("c"), L = p.at("L"), R = p.at("R");
    const int paths = p.at("trials");
    const std::uint64_t seed = p.at("seed");
    for (int n : int_list(p, "n_grid")) {
        for (int k : int_list(p, "epochs")) {
            const double analytic = sgld::analytic_ismi_bound(n, k, c, L, R);
            const auto mc = sgld::monte_carlo_path_bound(n, k, c, L, R, paths, seed, threads);
            const double pensia = sgld::pensia_bound(n, k, c, L, R);
            out.table.rows.push_back({std::to_string(n), std::to_string(k), format_number(c), format_number(L),
                                      format_number(R), format_number(analytic), format_number(mc.mean),
                                      format_number(mc.se), format_number(pensia), format_number(pensia / analytic)});
            const bool ok = analytic <= pensia && mc.mean <= analytic + 3.0 * mc.se;
            out.valid = out.valid && ok;
            char line[256];
            std::snprintf(line, sizeof line, "sgld n=%d K=%d ismi=%.6g mc=%.6g+-%.2g pensia=%.6g ratio=%.4f %s", n, k,
                          analytic, mc.mean, mc.se, pensia, pensia / analytic, ok ? "ok" : "CHECK FAILED");
            out.summary.push_back(line);
        }
    }
    return out;
}

// ---------------------------------------------------------------- logreg

Outcome run_logreg(const json& p, int threads) {
    Outcome out;
    out.table.columns = {{"n", "training set size"},
                         {"N", "independent training runs"},
                         {"k", "KSG neighbor count"},
                         {"gen_emp", "empirical generalization error (0-1 loss, held-out population risk)"},
                         {"gen_emp_se", "standard error of gen_emp"},
                         {"mi_hat", "kNN estimate of I(W; Z_1), nats, unclamped"},
                         {"ismi_bound_hat", "sqrt(max(mi_hat, 0) / 2)"},
                         {"resampled_trials", "datasets redrawn because they were linearly separable"},
                         {"estimator_variant", "KSG variant used for mi_hat"}};
    const int runs = p.at("N"), k = p.at("k"), test_size = p.at("test_size");
    if (runs < 1000) throw DomainError("logreg: N must be >= 1000");
    if (test_size < 10000) throw DomainError("logreg: test_size must be >= 10000");
    const auto variant = ksg_variant_from_string(p.at("variant"));
    const std::uint64_t seed = p.at("seed");
    const auto model = logreg::DataModel::reference();
    json per_n = json::array();
    for (int n : int_list(p, "n_grid")) {
        const auto collected = logreg::collect_runs(model, n, runs, test_size, seed, threads);
        std::vector<double> gaps;
        int resampled = 0, unconverged = 0;
        for (const auto& r : collected) {
            gaps.push_back(r.test_risk - r.train_risk);
            resampled += r.resampled;
            unconverged += r.converged ? 0 : 1;
        }
        const auto gen = mean_se(gaps);
        const auto est = logreg::ismi_from_mi(knn_mi(logreg::make_cloud(collected, k, 0), variant), resampled);
        out.table.rows.push_back({std::to_string(n), std::to_string(runs), std::to_string(k), format_number(gen.mean),
                                  format_number(gen.se), format_number(est.mi_hat), format_number(est.bound),
                                  std::to_string(resampled), to_string(variant)});
        per_n.push_back({{"n", n}, {"unconverged_runs", unconverged}});
        const bool ok = est.bound >= gen.mean - 0.05;
        out.valid = out.valid && ok;
        char line[256];
        std::snprintf(line, sizeof line, "logreg n=%d gen=%.5f+-%.2g mi=%.5f ismi=%.5f resampled=%d %s", n, gen.mean,
                      gen.se, est.mi_hat, est.bound, resampled, ok ? "ok" : "BOUND BELOW GEN");
        out.summary.push_back(line);
    }
    out.metadata = {{"trainer", {{"method", "full-batch gradient descent"}, {"step", 0.1}, {"grad_tol", 1e-6},
                                 {"max_iterations", 10000}, {"regularization", "none"}}},
                    {"estimator", {{"variant", to_string(variant)}, {"k", k}, {"N", runs},
                                   {"norm", "max"}, {"column_scaling", "unit sample variance"},
                                   {"label_embedding", "+-1 coordinate"},
                                   {"tie_breaking", "index-derived jitter, relative size 1e-12"}}},
                    {"sub_gaussian_R", logreg::kSubGaussianR},
                    {"per_n", per_n}};
    return out;
}

// ---------------------------------------------------------------- selftest

Outcome run_selftest(const json& p, int /*threads*/) {
    Outcome out;
    out.table.columns = {{"check", "property checked"},
                         {"cases", "number of cases evaluated"},
                         {"max_violation", "largest violation (<= 0 means satisfied)"},
                         {"tolerance", "allowed violation"},
                         {"passed", "1 if max_violation <= tolerance"}};
    const int joints = p.at("joints");
    const std::uint64_t seed = p.at("seed");
    auto record = [&](const std::string& name, int cases, double worst, double tol) {
        const bool ok = worst <= tol;
        out.valid = out.valid && ok;
        out.table.rows.push_back(
            {name, std::to_string(cases), format_number(worst), format_number(tol), ok ? "1" : "0"});
        out.summary.push_back("selftest " + name + (ok ? " ok" : " FAILED") + " (max violation " +
                              format_number(worst) + ")");
    };

    {  // numeric dual inverse against closed forms
        double worst = 0.0;
        int cases = 0;
        std::vector<CgfBound> bounds{sub_gaussian_cgf(0.5), sub_gaussian_cgf(1.0), sub_gaussian_cgf(3.0),
                                     chi_squared_neg_cgf(1, 1.0), chi_squared_neg_cgf(3, 2.2)};
        for (const auto& b : bounds) {
            for (int i = 0; i < 30; ++i) {
                const double y = std::pow(10.0, -4.0 + 6.0 * i / 29.0);
                const double exact = b.closed_form_inverse(y);
                worst = std::max(worst, std::abs(legendre_dual_inverse_numeric(b, y) - exact) / exact);
                ++cases;
            }
        }
        record("dual-inverse-closed-form", cases, worst, 1e-6);
    }
    {  // monotone and concave in y
        double worst = -kInfinity;
        int cases = 0;
        const auto b = chi_squared_neg_cgf(2, 1.5);
        for (int i = 0; i + 2 < 64; ++i) {
            const double y0 = 0.05 * i, y1 = 0.05 * (i + 1), y2 = 0.05 * (i + 2);
            const double f0 = legendre_dual_inverse_numeric(b, y0), f1 = legendre_dual_inverse_numeric(b, y1),
                         f2 = legendre_dual_inverse_numeric(b, y2);
            worst = std::max({worst, f0 - f1, 0.5 * (f0 + f2) - f1});
            ++cases;
        }
        record("dual-inverse-monotone-concave", cases, worst, 1e-9);
    }
    {  // chain rule and ISMI <= full-MI ordering on random product joints
        Rng rng(seed);
        std::uniform_int_distribution<int> wsize(2, 4), nsz(1, 3), zsize(2, 3);
        double worst_chain = -kInfinity, worst_order = -kInfinity;
        for (int j = 0; j < joints; ++j) {
            std::vector<int> zs(static_cast<std::size_t>(nsz(rng)));
            for (auto& z : zs) z = zsize(rng);
            const auto joint = random_product_joint(wsize(rng), zs, rng);
            const auto gap = chain_rule_gap(joint);
            worst_chain = std::max(worst_chain, gap.per_sample_sum - gap.full);
            const int n = static_cast<int>(zs.size());
            const double ismi = sub_gaussian_ismi({gap.per_sample, gap.full}, 1.0).upper;
            worst_order = std::max(worst_order, ismi - full_mi_bound(gap.full, n, 1.0));
        }
        record("chain-rule-sum-le-full", joints, worst_chain, 1e-9);
        record("ismi-le-full-mi-bound", joints, worst_order, 1e-9);
    }
    {  // kd-tree against brute force
        Rng rng(seed + 1);
        std::uniform_int_distribution<int> size(10, 256), dim(1, 6);
        std::normal_distribution<double> normal;
        int mismatches = 0;
        for (int t = 0; t < 200; ++t) {
            PointMatrix pts(size(rng), dim(rng));
            for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = normal(rng);
            const KdTree tree(pts, 4);
            const int k = std::min<int>(7, static_cast<int>(pts.rows()) - 1);
            for (Eigen::Index q = 0; q < pts.rows(); q += 7) {
                const auto a = tree.knn(tree.point(q), k, q);
                const auto b = brute_force_knn(pts, tree.point(q), k, q);
                if (a != b) ++mismatches;
            }
        }
        record("kdtree-matches-brute-force", 200, mismatches, 0.0);
    }
    {  // closed-form mean-example MI against the covariance-block oracle
        double worst = 0.0;
        int cases = 0;
        for (int d : {1, 2, 5})
            for (int n : {2, 3, 10, 100, 1000}) {
                const mean::Params mp{d, 1.7, n};
                worst = std::max(worst, std::abs(mean::exact_per_sample_mi(mp) - gaussian_mi(mean::covariance_blocks(mp))));
                ++cases;
            }
        record("gaussian-mi-covariance-blocks", cases, worst, 1e-12);
    }
    return out;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"mean", "gp", "gp-noisy", "sgld", "logreg", "selftest"};
    return names;
}

json normalize_parameters(const std::string& experiment, const json& params) {
    json out = defaults_for(experiment);
    if (!params.is_null() && !params.is_object()) throw DomainError("parameters must be a JSON object");
    if (params.is_object()) {
        for (const auto& [key, value] : params.items()) {
            if (!out.contains(key)) throw DomainError("unknown parameter for " + experiment + ": " + key);
            if (!value.is_null()) out[key] = value;
        }
    }
    return out;
}

Outcome run_experiment(const std::string& experiment, const json& params, int threads) {
    const json p = normalize_parameters(experiment, params);
    try {
        if (experiment == "mean") return run_mean(p, threads);
        if (experiment == "gp" || experiment == "gp-noisy") return run_gp(p, threads);
        if (experiment == "sgld") return run_sgld(p, threads);
        if (experiment == "logreg") return run_logreg(p, threads);
        return run_selftest(p, threads);
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad parameter value: ") + e.what());
    }
}

WrittenRun run_and_write(const std::string& experiment, const json& params, int threads,
                         const std::filesystem::path& out_dir) {
    const json p = normalize_parameters(experiment, params);
    const auto start = std::chrono::steady_clock::now();
    const std::string started_at = iso_now();
    WrittenRun written{out_dir / (experiment + ".csv"), out_dir / (experiment + ".manifest.json"),
                       run_experiment(experiment, p, threads)};
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(written.csv, std::ios::binary);
        csv << written.outcome.table.to_csv();
        if (!csv) throw Error("cannot write " + written.csv.string());
    }
    json columns = json::array();
    for (const auto& c : written.outcome.table.columns) columns.push_back({{"name", c.name}, {"description", c.description}});
    const json manifest = {{"schema_version", kSchemaVersion},
                           {"tool_version", kToolVersion},
                           {"experiment", experiment},
                           {"parameters", p},
                           {"seed", p.at("seed")},
                           {"threads", threads},
                           {"started_at", started_at},
                           {"wall_clock_seconds", seconds},
                           {"validation_passed", written.outcome.valid},
                           {"outputs", {{"csv", written.csv.filename().string()},
                                        {"manifest", written.manifest.filename().string()}}},
                           {"columns", columns},
                           {"metadata", written.outcome.metadata}};
    std::ofstream mf(written.manifest, std::ios::binary);
    mf << manifest.dump(2) << '\n';
    if (!mf) throw Error("cannot write " + written.manifest.string());
    return written;
}

WrittenRun replay(const std::filesystem::path& manifest_path, int threads, const std::filesystem::path& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) throw Error("cannot read manifest " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (manifest.value("schema_version", 0) != kSchemaVersion) throw DomainError("unsupported manifest schema version");
    return run_and_write(manifest.at("experiment").get<std::string>(), manifest.at("parameters"), threads, out_dir);
}

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("ISMI_OUT_DIR"); env && *env) return env;
    return "out";
}

}  // namespace ismi::harness
