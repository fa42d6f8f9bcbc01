#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "copulacpd/estimator.hpp"
#include "copulacpd/harness.hpp"
#include "copulacpd/inference.hpp"
#include "copulacpd/preprocess.hpp"
#include "copulacpd/scan.hpp"
#include "copulacpd/synth.hpp"

namespace py = pybind11;
using namespace copulacpd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a 1-d array");
    return std::vector<double>(a.data(), a.data() + a.size());
}

Dataset to_dataset(const Array& x, const Array& y, const Array& z) {
    Dataset d;
    d.x = to_vector(x);
    d.y = to_vector(y);
    if (z.ndim() == 1) {
        d.z = Matrix(static_cast<std::size_t>(z.shape(0)), 1, std::vector<double>(z.data(), z.data() + z.size()));
    } else if (z.ndim() == 2) {
        d.z = Matrix(static_cast<std::size_t>(z.shape(0)), static_cast<std::size_t>(z.shape(1)),
                     std::vector<double>(z.data(), z.data() + z.size()));
    } else {
        throw Error(ErrorCode::DimensionMismatch, "z must be 1-d or 2-d");
    }
    return d;
}

Array from_vector(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

EstimatorConfig estimator(std::size_t k, std::optional<double> gamma, unsigned threads) {
    EstimatorConfig cfg;
    cfg.k = k;
    cfg.gamma = gamma;
    cfg.threads = threads;
    return cfg;
}

py::dict stat_dict(const StatResult& r) {
    py::dict d;
    d["q_hat"] = r.q_hat;
    d["t1"] = r.t1;
    d["t2"] = r.t2;
    d["t3"] = r.t3;
    d["gamma"] = r.gamma;
    d["k"] = r.k;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Conditional-copula change point statistic, permutation tests and scans";

    static py::exception<Error> error(m, "CopulaError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "estimate_q",
        [](const Array& x, const Array& y, const Array& z, std::size_t eta, std::size_t k,
           std::optional<double> gamma, unsigned threads) {
            const Dataset data = to_dataset(x, y, z);
            validate(data);
            StatResult r;
            {
                py::gil_scoped_release release;
                r = estimate_q(split(data, eta), estimator(k, gamma, threads));
            }
            return stat_dict(r);
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("eta"), py::arg("k") = kDefaultNeighbors,
        py::arg("gamma") = py::none(), py::arg("threads") = 1);

    m.def(
        "permutation_test",
        [](const Array& x, const Array& y, const Array& z, std::size_t eta, std::size_t k, std::size_t perms,
           std::uint64_t seed, std::optional<double> gamma, unsigned threads) {
            const Dataset data = to_dataset(x, y, z);
            validate(data);
            PermutationPlan plan;
            plan.b = perms;
            plan.seed = seed;
            plan.threads = threads;
            TestOutcome t;
            {
                py::gil_scoped_release release;
                t = permutation_test(split(data, eta), estimator(k, gamma, threads), plan);
            }
            py::dict d = stat_dict(t.observed);
            d["p_value"] = t.p_value;
            d["q_perm"] = from_vector(t.q_perm);
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("eta"), py::arg("k") = kDefaultNeighbors,
        py::arg("perms") = kDefaultPermutations, py::arg("seed") = 0, py::arg("gamma") = py::none(),
        py::arg("threads") = 1);

    m.def(
        "scan",
        [](const Array& x, const Array& y, const Array& z, std::size_t window, std::size_t step, double p_bar,
           const std::string& correction, std::size_t perms, std::size_t k, std::uint64_t seed, unsigned threads) {
            const Dataset data = to_dataset(x, y, z);
            ScanConfig cfg;
            cfg.window = window;
            cfg.step = step;
            cfg.p_bar = p_bar;
            cfg.correction = parse_correction(correction);
            cfg.b = perms;
            cfg.estimator.k = k;
            cfg.seed = seed;
            cfg.threads = threads;
            ScanResult r;
            {
                py::gil_scoped_release release;
                r = scan(data, cfg);
            }
            std::vector<std::size_t> index;
            std::vector<double> q;
            for (const auto& p : r.trace) {
                index.push_back(p.index);
                q.push_back(p.q_hat);
            }
            py::dict d;
            d["trace_index"] = index;
            d["trace_q"] = from_vector(q);
            d["candidates"] = r.candidates;
            d["p_values"] = r.p_values;
            d["accepted"] = r.accepted;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("window"), py::arg("step") = 1, py::arg("p_bar") = 0.05,
        py::arg("correction") = "none", py::arg("perms") = kDefaultPermutations, py::arg("k") = kDefaultNeighbors,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("list_scenarios", [] {
        std::vector<std::string> ids;
        for (const auto& info : list_scenarios()) ids.push_back(info.id);
        return ids;
    });

    m.def(
        "simulate",
        [](const std::string& id, std::size_t n, std::optional<std::size_t> tau, std::uint64_t seed,
           const std::map<std::string, double>& params, bool twin) {
            ScenarioSpec spec;
            spec.id = id;
            spec.n = n;
            spec.tau = tau ? *tau : n / 2;
            spec.seed = seed;
            spec.params = params;
            spec.twin = twin;
            const ScenarioOutput out = generate(spec);
            py::dict d;
            d["x"] = from_vector(out.data.x);
            d["y"] = from_vector(out.data.y);
            py::array_t<double> z({static_cast<py::ssize_t>(out.data.n()), static_cast<py::ssize_t>(out.data.d())});
            std::copy(out.data.z.values().begin(), out.data.z.values().end(), z.mutable_data());
            d["z"] = z;
            d["is_null"] = out.is_null;
            d["true_tau"] = out.true_tau;
            d["driver_column"] = out.driver_column;
            d["params"] = out.params;
            return d;
        },
        py::arg("scenario"), py::arg("n") = 800, py::arg("tau") = py::none(), py::arg("seed") = 0,
        py::arg("params") = std::map<std::string, double>{}, py::arg("twin") = false);

    m.def(
        "to_returns",
        [](const Array& series, const std::string& kind) {
            return from_vector(to_returns(to_vector(series), parse_series_kind(kind)));
        },
        py::arg("series"), py::arg("kind"));

    m.def(
        "ewma_normalize",
        [](const Array& x, std::size_t span, double epsilon, const std::string& mean) {
            EwmaConfig cfg;
            cfg.span = span;
            cfg.epsilon = epsilon;
            cfg.mean = parse_ewma_mean(mean);
            return from_vector(ewma_normalize(to_vector(x), cfg));
        },
        py::arg("x"), py::arg("span") = kDailySpan, py::arg("epsilon") = 1e-6, py::arg("mean") = "ewma");

    m.def(
        "mann_whitney_auc", [](const Array& a, const Array& b) { return mann_whitney_auc(to_vector(a), to_vector(b)); },
        py::arg("a"), py::arg("b"));
}
