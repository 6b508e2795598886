#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metastab/arrhenius.hpp"
#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"
#include "metastab/kramers.hpp"
#include "metastab/ldp.hpp"
#include "metastab/potential_theory.hpp"
#include "metastab/randomwalk.hpp"
#include "metastab/sde.hpp"
#include "metastab/spde.hpp"

namespace py = pybind11;
using namespace metastab;

namespace {

RatePrediction quartic_prediction() {
    const auto v = quartic_double_well();
    return ek_finite(find_critical_point(v, Vector::Constant(1, -0.9)), find_critical_point(v, Vector::Constant(1, 0.1)),
                     v);
}

Interval interval(std::pair<double, double> p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of the metastab package";

    static py::exception<AllCensored> all_censored(m, "AllCensored", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const AllCensored& e) {
            all_censored(e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const InvalidArgument& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<RatePrediction>(m, "RatePrediction")
        .def_readonly("barrier", &RatePrediction::barrier)
        .def_readonly("prefactor", &RatePrediction::prefactor)
        .def_readonly("lambda_minus", &RatePrediction::lambda_minus)
        .def_readonly("determinant_factor", &RatePrediction::determinant_factor)
        .def_readonly("cutoff", &RatePrediction::cutoff)
        .def("predict", &RatePrediction::predict, py::arg("epsilon"))
        .def("log_predict", &RatePrediction::log_predict, py::arg("epsilon"))
        .def("__repr__", [](const RatePrediction& r) {
            return "RatePrediction(barrier=" + std::to_string(r.barrier) + ", prefactor=" + std::to_string(r.prefactor) +
                   ")";
        });

    py::class_<HittingTimeBatch>(m, "HittingTimes")
        .def_property_readonly("samples", [](const HittingTimeBatch& b) { return py::array(py::cast(b.samples)); })
        .def_property_readonly("all_times", [](const HittingTimeBatch& b) { return py::array(py::cast(b.all_times)); })
        .def_property_readonly("censored", [](const HittingTimeBatch& b) {
            std::vector<bool> c(b.censored.begin(), b.censored.end());
            return py::array(py::cast(c));
        })
        .def_readonly("n_attempted", &HittingTimeBatch::n_attempted)
        .def_readonly("n_censored", &HittingTimeBatch::n_censored)
        .def_readonly("mean", &HittingTimeBatch::mean)
        .def_readonly("stderr_mean", &HittingTimeBatch::stderr_mean);

    m.def("ek_quartic", &quartic_prediction, "Eyring-Kramers law for x^4/4 - x^2/2.");
    m.def("ek_allen_cahn_1d", &ek_allen_cahn_1d, py::arg("length"), py::arg("cutoff") = py::none());
    m.def("ek_allen_cahn_2d", &ek_allen_cahn_2d, py::arg("length"), py::arg("cutoff"));

    m.def("fredholm_det_1d", [](double L, int N) { return fredholm_det_1d(L, N).value; }, py::arg("length"),
          py::arg("cutoff"));
    m.def("fredholm_closed_form", &fredholm_closed_form, py::arg("length"));
    m.def("carleman_det_2d", [](double L, int N) { return carleman_det_2d(L, N).value; }, py::arg("length"),
          py::arg("cutoff"));
    m.def("counterterm_trace", &counterterm_trace, py::arg("length"), py::arg("cutoff"), py::arg("d") = 2);

    m.def("ou_density", &ou_density, py::arg("x"), py::arg("y"), py::arg("t"), py::arg("epsilon"));

    m.def(
        "sample_quartic_hitting_times",
        [](double eps, std::size_t n, double dt, double delta, std::uint64_t seed, double t_max, unsigned threads) {
            SdeRun run{quartic_double_well(), eps, dt, Vector::Constant(1, -1.0), seed, t_max};
            py::gil_scoped_release release;
            return sample_hitting_times(run, Vector::Constant(1, 1.0), delta, n, threads);
        },
        py::arg("epsilon"), py::arg("n"), py::arg("dt") = 1e-3, py::arg("delta") = 0.2, py::arg("seed") = 0,
        py::arg("t_max") = 0.0, py::arg("threads") = 1,
        "First times the quartic-well diffusion started at -1 comes within delta of +1.");

    m.def(
        "sample_ac_hitting_times",
        [](double eps, std::size_t n, double length, int cutoff, double dt, double delta, std::uint64_t seed,
           double t_max, unsigned threads) {
            SpdeRun run;
            run.field0 = SpectralField::constant(1, length, cutoff, -1.0);
            run.epsilon = eps;
            run.dt = dt;
            run.seed = seed;
            run.t_max = t_max;
            HittingTarget target;
            target.delta = delta;
            py::gil_scoped_release release;
            return sample_spde_hitting_times(run, target, n, threads);
        },
        py::arg("epsilon"), py::arg("n"), py::arg("length") = 2.0, py::arg("cutoff") = 16, py::arg("dt") = 1e-3,
        py::arg("delta") = 0.3, py::arg("seed") = 0, py::arg("t_max") = 0.0, py::arg("threads") = 1,
        "1D Allen-Cahn hitting times of the sup-norm ball around +1, started at -1.");

    m.def(
        "simulate_ac_1d",
        [](py::array_t<double> initial, double length, int cutoff, double eps, double dt, std::size_t steps,
           std::size_t stride, std::uint64_t seed) {
            const auto in = initial.unchecked<1>();
            std::vector<double> v(static_cast<std::size_t>(in.shape(0)));
            for (py::ssize_t i = 0; i < in.shape(0); ++i) v[static_cast<std::size_t>(i)] = in(i);
            SpdeRun run;
            run.field0 = SpectralField::from_grid(1, length, cutoff, static_cast<int>(v.size()), v);
            run.epsilon = eps;
            run.dt = dt;
            run.seed = seed;
            const auto tr = simulate_spde(run, steps, stride);
            const int m = static_cast<int>(v.size());
            py::array_t<double> out({static_cast<py::ssize_t>(tr.fields.size()), static_cast<py::ssize_t>(m)});
            auto o = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < tr.fields.size(); ++i) {
                const auto g = tr.fields[i].to_grid(m);
                for (int j = 0; j < m; ++j) o(static_cast<py::ssize_t>(i), j) = g[static_cast<std::size_t>(j)];
            }
            return py::make_tuple(py::array(py::cast(tr.times)), out);
        },
        py::arg("initial"), py::arg("length"), py::arg("cutoff"), py::arg("epsilon"), py::arg("dt"),
        py::arg("steps"), py::arg("stride") = 1, py::arg("seed") = 0,
        "Integrates the 1D Allen-Cahn equation from grid values; returns (times, grid values).");

    m.def(
        "mean_hitting_time_pde",
        [](double eps, std::pair<double, double> b_set, double a, double b, int m_nodes) {
            const Grid1D grid(a, b, m_nodes);
            const auto w = solve_poisson(grid, quartic_double_well(), eps, interval(b_set));
            std::vector<double> x(static_cast<std::size_t>(grid.node_count()));
            for (int i = 0; i < grid.node_count(); ++i) x[static_cast<std::size_t>(i)] = grid.node(i);
            return py::make_tuple(py::array(py::cast(x)), py::array(py::cast(w)));
        },
        py::arg("epsilon"), py::arg("b_set") = std::pair<double, double>{0.8, 1.2}, py::arg("a") = -2.0,
        py::arg("b") = 2.0, py::arg("m") = 3999, "Mean hitting time of B for the quartic well; returns (x, w).");

    m.def(
        "committor",
        [](double eps, std::pair<double, double> a_set, std::pair<double, double> b_set, double a, double b,
           int m_nodes) {
            const Grid1D grid(a, b, m_nodes);
            const auto c = solve_committor(grid, quartic_double_well(), eps, interval(a_set), interval(b_set));
            std::vector<double> x(static_cast<std::size_t>(grid.node_count()));
            for (int i = 0; i < grid.node_count(); ++i) x[static_cast<std::size_t>(i)] = grid.node(i);
            return py::make_tuple(py::array(py::cast(x)), py::array(py::cast(c.values)));
        },
        py::arg("epsilon"), py::arg("a_set") = std::pair<double, double>{-1.05, -0.95},
        py::arg("b_set") = std::pair<double, double>{0.8, 1.2}, py::arg("a") = -2.0, py::arg("b") = 2.0,
        py::arg("m") = 3999);

    m.def(
        "capacity",
        [](double eps, std::pair<double, double> a_set, std::pair<double, double> b_set, double a, double b,
           int m_nodes) {
            const Grid1D grid(a, b, m_nodes);
            const auto v = quartic_double_well();
            return capacity_dirichlet(grid, v, eps, solve_committor(grid, v, eps, interval(a_set), interval(b_set)));
        },
        py::arg("epsilon"), py::arg("a_set") = std::pair<double, double>{-1.05, -0.95},
        py::arg("b_set") = std::pair<double, double>{0.8, 1.2}, py::arg("a") = -2.0, py::arg("b") = 2.0,
        py::arg("m") = 3999);

    m.def(
        "rate_functional_quartic",
        [](std::vector<double> times, std::vector<double> xs) {
            EuclideanPath p;
            p.times = std::move(times);
            for (double x : xs) p.points.push_back(Vector::Constant(1, x));
            return rate_functional_sde(p, quartic_double_well());
        },
        py::arg("times"), py::arg("x"), "Freidlin-Wentzell cost of a 1D path in the quartic well.");

    m.def(
        "arrhenius_fit",
        [](const std::vector<double>& eps, const std::vector<double>& means) {
            if (eps.size() != means.size()) throw InvalidArgument("eps and means differ in length");
            std::vector<ArrheniusPoint> pts;
            for (std::size_t i = 0; i < eps.size(); ++i) pts.push_back({eps[i], means[i], 0.0, 0});
            const auto f = arrhenius_fit(pts);
            return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                            py::arg("r_squared") = f.r_squared);
        },
        py::arg("eps"), py::arg("means"));

    m.def(
        "rescaled_walks",
        [](std::size_t n, std::vector<double> t_grid, std::size_t walks, std::uint64_t seed, unsigned threads) {
            const auto rows = sample_rescaled_walks(n, t_grid, walks, seed, threads);
            py::array_t<double> out({static_cast<py::ssize_t>(walks), static_cast<py::ssize_t>(t_grid.size())});
            auto o = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                for (std::size_t j = 0; j < t_grid.size(); ++j) o(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = rows[i][j];
            }
            return out;
        },
        py::arg("n"), py::arg("t_grid"), py::arg("walks"), py::arg("seed") = 0, py::arg("threads") = 1);
}
