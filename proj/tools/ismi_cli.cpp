#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ismi/errors.hpp"
#include "ismi/harness.hpp"

namespace {

using nlohmann::json;

struct Common {
    std::vector<int> n_grid;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c, bool with_grid = true, bool with_trials = true) {
    if (with_grid) cmd->add_option("--n-grid", c.n_grid, "sample counts, comma separated")->delimiter(',');
    if (with_trials) cmd->add_option("--trials", c.trials, "Monte Carlo trials (paths for sgld)");
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--threads", c.threads, "worker threads; results do not depend on it")->check(CLI::Range(1, 256));
    cmd->add_option("--out-dir", c.out_dir, "output directory (default $ISMI_OUT_DIR or ./out)");
}

json common_params(const Common& c) {
    json p = json::object();
    if (!c.n_grid.empty()) p["n_grid"] = c.n_grid;
    if (c.trials) p["trials"] = *c.trials;
    if (c.seed) p["seed"] = *c.seed;
    return p;
}

template <class T>
void put(json& p, const char* key, const std::optional<T>& v) {
    if (v) p[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Individual-sample mutual information generalization bounds: experiments and checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ismi::harness::kToolVersion);

    Common mean_c, gp_c, noisy_c, sgld_c, logreg_c, self_c, replay_c;
    std::optional<int> mean_d;
    std::optional<double> mean_sigma_sq;
    auto* mean = app.add_subcommand("mean", "Gaussian mean estimation: exact gen, MI and ISMI bound");
    add_common(mean, mean_c);
    mean->add_option("--d", mean_d, "dimension");
    mean->add_option("--sigma-sq", mean_sigma_sq, "per-coordinate variance");

    std::optional<double> gp_eps, noisy_eps;
    auto* gp = app.add_subcommand("gp", "Gaussian process on the circle, ERM");
    add_common(gp, gp_c);
    gp->add_option("--epsilon", gp_eps, "noise atom mass (1 = noiseless)");
    auto* noisy = app.add_subcommand("gp-noisy", "Gaussian process on the circle, ERM with additive noise");
    add_common(noisy, noisy_c);
    noisy->add_option("--epsilon", noisy_eps, "noise atom mass");

    std::optional<double> sgld_cval, sgld_l, sgld_r;
    std::vector<int> sgld_epochs;
    auto* sgld = app.add_subcommand("sgld", "SGLD: ISMI bound versus the I(S;W) baseline");
    add_common(sgld, sgld_c);
    sgld->add_option("--c", sgld_cval, "step-size constant");
    sgld->add_option("--epochs", sgld_epochs, "epoch counts K, comma separated")->delimiter(',');
    sgld->add_option("--L", sgld_l, "gradient bound");
    sgld->add_option("--R", sgld_r, "sub-Gaussian parameter");

    std::optional<int> lr_k, lr_n, lr_test;
    std::optional<std::string> lr_variant;
    auto* logreg = app.add_subcommand("logreg", "Logistic regression: empirical gen error and estimated ISMI bound");
    add_common(logreg, logreg_c, true, false);
    logreg->add_option("--k", lr_k, "KSG neighbor count");
    logreg->add_option("--N", lr_n, "independent training runs");
    logreg->add_option("--test-size", lr_test, "held-out sample size for population risk");
    logreg->add_option("--variant", lr_variant, "ksg-revised or ksg-classic");

    std::optional<int> self_joints;
    auto* self = app.add_subcommand("selftest", "Oracle and property checks");
    add_common(self, self_c, false, false);
    self->add_option("--joints", self_joints, "random discrete joints for the chain-rule check");

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Re-run the experiment recorded in a manifest");
    replay->add_option("manifest", manifest_path, "manifest JSON written by a previous run")->required();
    replay->add_option("--threads", replay_c.threads, "worker threads")->check(CLI::Range(1, 256));
    replay->add_option("--out-dir", replay_c.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    auto out_dir = [](const Common& c) {
        return c.out_dir.empty() ? ismi::harness::default_out_dir() : std::filesystem::path(c.out_dir);
    };

    try {
        ismi::harness::WrittenRun run;
        if (mean->parsed()) {
            auto p = common_params(mean_c);
            put(p, "d", mean_d);
            put(p, "sigma_sq", mean_sigma_sq);
            run = ismi::harness::run_and_write("mean", p, mean_c.threads, out_dir(mean_c));
        } else if (gp->parsed()) {
            auto p = common_params(gp_c);
            put(p, "epsilon", gp_eps);
            run = ismi::harness::run_and_write("gp", p, gp_c.threads, out_dir(gp_c));
        } else if (noisy->parsed()) {
            auto p = common_params(noisy_c);
            put(p, "epsilon", noisy_eps);
            run = ismi::harness::run_and_write("gp-noisy", p, noisy_c.threads, out_dir(noisy_c));
        } else if (sgld->parsed()) {
            auto p = common_params(sgld_c);
            put(p, "c", sgld_cval);
            put(p, "L", sgld_l);
            put(p, "R", sgld_r);
            if (!sgld_epochs.empty()) p["epochs"] = sgld_epochs;
            run = ismi::harness::run_and_write("sgld", p, sgld_c.threads, out_dir(sgld_c));
        } else if (logreg->parsed()) {
            auto p = common_params(logreg_c);
            put(p, "k", lr_k);
            put(p, "N", lr_n);
            put(p, "test_size", lr_test);
            put(p, "variant", lr_variant);
            run = ismi::harness::run_and_write("logreg", p, logreg_c.threads, out_dir(logreg_c));
        } else if (self->parsed()) {
            auto p = common_params(self_c);
            put(p, "joints", self_joints);
            run = ismi::harness::run_and_write("selftest", p, self_c.threads, out_dir(self_c));
        } else {
            run = ismi::harness::replay(manifest_path, replay_c.threads, out_dir(replay_c));
        }
        for (const auto& line : run.outcome.summary) std::cout << line << '\n';
        std::cout << "wrote " << run.csv.string() << " and " << run.manifest.string() << '\n';
        return run.outcome.valid ? 0 : 2;
    } catch (const ismi::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
