#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "scalemix/depfn.hpp"
#include "scalemix/estimators.hpp"
#include "scalemix/fitting.hpp"
#include "scalemix/harness.hpp"
#include "scalemix/processes.hpp"
#include "scalemix/theory.hpp"

namespace py = pybind11;
using namespace scalemix;

namespace {

// Models and experiments travel as the JSON objects the harness reads.
nlohmann::json to_json(const py::dict& d) {
    const auto text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
    return nlohmann::json::parse(text);
}

py::array_t<double> to_array(const SamplePath& p) {
    py::array_t<double> out({p.rows(), p.cols()});
    std::copy(p.data().begin(), p.data().end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

py::dict theta_dict(const ThetaResult& t) {
    py::dict d;
    d["value"] = t.value;
    d["value_se"] = t.value_se;
    d["method"] = t.method;
    return d;
}

}  // namespace

PYBIND11_MODULE(_scalemix, m) {
    m.doc() = "Scale-mixture heavy-tailed time series";
    m.attr("DEFAULT_SEED") = kDefaultSeed;

    m.def(
        "simulate",
        [](const py::dict& model, std::size_t n, std::uint64_t seed, std::uint64_t replication) {
            return to_array(simulate_x(seed, model_from_json(to_json(model)), n, replication));
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = kDefaultSeed, py::arg("replication") = 0);

    m.def(
        "theta",
        [](const py::dict& model, std::vector<double> tau) {
            const auto spec = model_from_json(to_json(model));
            if (tau.empty()) tau.assign(spec.dim(), 1.0);
            return theta_dict(theta_for_model(spec, tau));
        },
        py::arg("model"), py::arg("tau") = std::vector<double>{});
    m.def(
        "theta_armax_marginal",
        [](double c, double alpha) { return theta_armax_marginal(c, alpha, FactorLawSpec::degenerate()); },
        py::arg("c"), py::arg("alpha"));
    m.def(
        "theta_movingmax_frechet",
        [](double alpha, double xi) {
            return theta_movingmax_mixture(alpha, FactorLawSpec::frechet(1.0, xi), {1.0}).value;
        },
        py::arg("alpha"), py::arg("xi"));
    m.def(
        "eta",
        [](const py::dict& model, std::size_t lag, std::size_t offset) {
            return eta_mixture(model_from_json(to_json(model)), lag, offset).eta;
        },
        py::arg("model"), py::arg("lag"), py::arg("offset") = 0);

    m.def("hill", [](const py::array_t<double>& x, std::size_t k) { return hill(to_vector(x), k); });
    m.def("moments_estimator",
          [](const py::array_t<double>& x, std::size_t k) { return moments_estimator(to_vector(x), k); });
    m.def(
        "runs_extremal_index",
        [](const py::array_t<double>& x, double u, std::size_t run_gap) {
            return runs_extremal_index(to_vector(x), u, run_gap);
        },
        py::arg("x"), py::arg("u"), py::arg("run_gap") = 5);
    m.def("empirical_tdc", [](const py::array_t<double>& x, const py::array_t<double>& y, std::size_t k) {
        return empirical_tdc(to_vector(x), to_vector(y), k);
    });
    m.def("block_maxima",
          [](const py::array_t<double>& x, std::size_t block) { return block_maxima(to_vector(x), block); });

    m.def(
        "depfn",
        [](const py::array_t<double>& x, const py::array_t<double>& y, std::size_t points) {
            const auto e = depfn_estimate(to_vector(x), to_vector(y), w_grid(points));
            py::dict d;
            d["w"] = e.w;
            d["pickands"] = e.pickands;
            d["cfg"] = e.cfg;
            d["ht"] = e.ht;
            d["lr"] = e.lr;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("points") = 21);

    m.def(
        "fit_prarmax",
        [](const py::array_t<double>& x, double upsilon, std::size_t k) {
            FitConfig cfg;
            cfg.upsilon = upsilon;
            cfg.k = k;
            const auto f = fit_prarmax(to_vector(x), cfg);
            py::dict d;
            d["ok"] = f.ok;
            d["failed_step"] = f.failed_step;
            d["message"] = f.message;
            d["beta_hat"] = f.beta_hat;
            d["c_hat"] = f.c_hat;
            d["k"] = f.k;
            d["captured"] = f.capture.z.size();
            d["ks_D"] = f.ks.D;
            d["ks_p"] = f.ks.p;
            return d;
        },
        py::arg("x"), py::arg("upsilon") = 0.15, py::arg("k") = 0);

    m.def("run_experiment", [](const py::dict& experiment) {
        return py::module_::import("json").attr("loads")(
            report_to_json(run_experiment(experiment_from_json(to_json(experiment)))).dump());
    });
}
