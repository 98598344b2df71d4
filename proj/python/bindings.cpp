#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ismi/bounds.hpp"
#include "ismi/cgf_dual.hpp"
#include "ismi/errors.hpp"
#include "ismi/gp_example.hpp"
#include "ismi/harness.hpp"
#include "ismi/knn_mi.hpp"
#include "ismi/logreg.hpp"
#include "ismi/mean_example.hpp"
#include "ismi/mi_oracle.hpp"
#include "ismi/sgld.hpp"

namespace py = pybind11;

namespace {

ismi::KsgVariant variant_of(const std::string& s) { return ismi::ksg_variant_from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Generalization bounds from individual-sample mutual information";
    m.attr("__version__") = ismi::harness::kToolVersion;

    py::register_exception<ismi::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ismi::NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
    py::register_exception<ismi::DegenerateCloud>(m, "DegenerateCloud", PyExc_ValueError);
    py::register_exception<ismi::PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    m.def(
        "legendre_dual_inverse",
        [](const std::function<double(double)>& psi, double y, double upper) {
            ismi::CgfBound b;
            b.psi = psi;
            b.upper = upper;
            b.validate();
            return ismi::legendre_dual_inverse(b, y);
        },
        py::arg("psi"), py::arg("y"), py::arg("upper") = std::numeric_limits<double>::infinity(),
        "inf over lambda in (0, upper) of (y + psi(lambda)) / lambda, computed numerically.");
    m.def(
        "sub_gaussian_inverse", [](double R, double y) { return ismi::legendre_dual_inverse(ismi::sub_gaussian_cgf(R), y); },
        py::arg("R"), py::arg("y"));
    m.def(
        "chi_squared_neg_inverse",
        [](int d, double sigma_l_sq, double y) {
            return ismi::legendre_dual_inverse(ismi::chi_squared_neg_cgf(d, sigma_l_sq), y);
        },
        py::arg("d"), py::arg("sigma_l_sq"), py::arg("y"));

    m.def(
        "gaussian_mi",
        [](const Eigen::MatrixXd& cov_w, const Eigen::MatrixXd& cov_z, const Eigen::MatrixXd& cross) {
            return ismi::gaussian_mi({cov_w, cov_z, cross});
        },
        py::arg("cov_w"), py::arg("cov_z"), py::arg("cross"));

    m.def(
        "knn_mi",
        [](const ismi::PointMatrix& w, const ismi::PointMatrix& z, int k, const std::string& variant) {
            const auto r = ismi::knn_mi({w, z, k}, variant_of(variant));
            return py::make_tuple(r.estimate, r.std_error);
        },
        py::arg("w"), py::arg("z"), py::arg("k") = 5, py::arg("variant") = "ksg-revised",
        "KSG estimate of I(w; z) in nats and its per-row standard error.");

    m.def(
        "sub_gaussian_ismi",
        [](const std::vector<double>& mi, double R) { return ismi::sub_gaussian_ismi({mi, {}}, R).upper; },
        py::arg("per_sample_mi"), py::arg("R"));
    m.def("full_mi_bound", &ismi::full_mi_bound, py::arg("mi_full"), py::arg("n"), py::arg("R"));

    m.def(
        "mean_exact_gen", [](int d, double s2, int n) { return ismi::mean::exact_gen({d, s2, n}); }, py::arg("d"),
        py::arg("sigma_sq"), py::arg("n"));
    m.def(
        "mean_exact_per_sample_mi", [](int d, double s2, int n) { return ismi::mean::exact_per_sample_mi({d, s2, n}); },
        py::arg("d"), py::arg("sigma_sq"), py::arg("n"));
    m.def(
        "mean_ismi_bound", [](int d, double s2, int n) { return ismi::mean::ismi_bound_mean({d, s2, n}); },
        py::arg("d"), py::arg("sigma_sq"), py::arg("n"));
    m.def(
        "mean_monte_carlo_gen",
        [](int d, double s2, int n, int trials, std::uint64_t seed, int threads) {
            const auto r = ismi::mean::monte_carlo_gen({d, s2, n}, trials, seed, threads);
            return py::make_tuple(r.mean, r.se);
        },
        py::arg("d"), py::arg("sigma_sq"), py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);

    m.def("gp_exact_gen", &ismi::gp::exact_gen_noisy, py::arg("n"), py::arg("epsilon") = 1.0);
    m.def("ismi_gp", &ismi::gp::ismi_gp, py::arg("n"), py::arg("epsilon") = 1.0);
    m.def("ismi_bound_gp", &ismi::gp::ismi_bound_gp, py::arg("n"), py::arg("epsilon") = 1.0);
    m.def("cmi_reference", &ismi::gp::cmi_reference, py::arg("n"));

    m.def("analytic_ismi_bound", &ismi::sgld::analytic_ismi_bound, py::arg("n"), py::arg("epochs"), py::arg("c"),
          py::arg("L"), py::arg("R"));
    m.def("pensia_bound", &ismi::sgld::pensia_bound, py::arg("n"), py::arg("epochs"), py::arg("c"), py::arg("L"),
          py::arg("R"));

    m.def(
        "estimate_ismi_bound",
        [](int n, int runs, int k, std::uint64_t seed, int threads, const std::string& variant) {
            const auto e = ismi::logreg::estimate_ismi_bound(ismi::logreg::DataModel::reference(), n, runs, k, seed,
                                                             threads, variant_of(variant));
            return py::dict(py::arg("bound") = e.bound, py::arg("bound_se") = e.bound_se, py::arg("mi_hat") = e.mi_hat,
                            py::arg("mi_se") = e.mi_se, py::arg("k") = e.k, py::arg("runs") = e.runs,
                            py::arg("resampled") = e.resampled, py::arg("variant") = ismi::to_string(e.variant));
        },
        py::arg("n"), py::arg("runs") = 5000, py::arg("k") = 5, py::arg("seed") = 2019, py::arg("threads") = 1,
        py::arg("variant") = "ksg-revised",
        "Estimated ISMI bound for logistic regression on the reference Gaussian mixture.");

    m.def(
        "run_experiment",
        [](const std::string& name, const std::string& params_json, int threads) {
            const auto out = ismi::harness::run_experiment(name, nlohmann::json::parse(params_json), threads);
            return py::make_tuple(out.table.to_csv(), out.valid);
        },
        py::arg("name"), py::arg("params_json") = "{}", py::arg("threads") = 1,
        "Runs a CLI experiment in-process; returns (csv_text, validation_passed).");
}
