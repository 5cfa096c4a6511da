#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "mavar/error.hpp"
#include "mavar/fixtures.hpp"
#include "mavar/kernel.hpp"
#include "mavar/montecarlo.hpp"
#include "mavar/ordering.hpp"
#include "mavar/perturb.hpp"
#include "mavar/poisson.hpp"
#include "mavar/variational.hpp"

namespace py = pybind11;
using namespace mavar;

namespace {

// The Python surface is functional: kernels and observables are plain
// arrays, and pi is recomputed (or checked, when supplied) on every call.

struct Prepared {
  StochasticKernel p;
  StationaryDist pi;
};

Prepared prepare(const Matrix& matrix, const std::optional<Vector>& pi) {
  StochasticKernel p = validate_kernel(matrix);
  if (!pi) return {p, stationary_distribution(p)};
  StationaryDist given = StationaryDist::from_weights(*pi);
  require_stationary(p, given);
  return {p, given};
}

Observable observable(const Vector& f, const StationaryDist& pi, bool center) {
  Observable obs(f, pi);
  return center ? obs.centered(pi) : obs;
}

py::object witness_to_py(const std::optional<Witness>& w) {
  if (!w) return py::none();
  if (const auto* idx = std::get_if<IndexPair>(&*w)) return py::make_tuple(idx->first, idx->second);
  return py::cast(std::get<Vector>(*w));
}

py::dict order_to_py(const OrderReport& r) {
  py::dict d;
  d["relation"] = std::string(to_string(r.relation));
  d["holds"] = r.holds;
  d["margin"] = r.margin;
  d["witness"] = witness_to_py(r.witness);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymptotic variance of finite Markov chains (native core)";

  // Deliberately leaked: the type must outlive every translator call.
  static py::handle error_type =
      py::exception<Error>(m, "MavarError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // Raise an instance carrying the machine-readable code.
      py::object inst = error_type(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("value") = e.value() ? py::cast(*e.value()) : py::none();
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  const auto pi_arg = py::arg("pi") = py::none();

  m.def("stationary_distribution",
        [](const Matrix& p) { return stationary_distribution(validate_kernel(p)).weights(); },
        py::arg("p"));
  m.def("is_irreducible", [](const Matrix& p) { return is_irreducible(validate_kernel(p)); },
        py::arg("p"));
  m.def("is_reversible",
        [](const Matrix& p, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return is_reversible(c.p, c.pi);
        },
        py::arg("p"), pi_arg);
  m.def("adjoint",
        [](const Matrix& p, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return adjoint(c.p, c.pi).matrix();
        },
        py::arg("p"), pi_arg);
  m.def("reversibilization",
        [](const Matrix& p, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return reversibilization(c.p, c.pi).matrix();
        },
        py::arg("p"), pi_arg);

  m.def("sigma2",
        [](const Matrix& p, const Vector& f, bool center, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return sigma2(c.p, c.pi, observable(f, c.pi, center));
        },
        py::arg("p"), py::arg("f"), py::arg("center") = false, pi_arg,
        "<phi, f>_pi for the centered Poisson solution phi.");
  m.def("asymptotic_variance",
        [](const Matrix& p, const Vector& f, bool center, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return asymptotic_variance(c.p, c.pi, observable(f, c.pi, center));
        },
        py::arg("p"), py::arg("f"), py::arg("center") = false, pi_arg,
        "2 sigma^2 - <f, f>_pi.");
  m.def("solve_dual_pair",
        [](const Matrix& p, const Vector& f, bool center, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          const PoissonSolution s = solve_dual_pair(c.p, c.pi, observable(f, c.pi, center));
          py::dict d;
          d["phi"] = s.phi.values();
          d["phi_star"] = s.phi_star.values();
          d["sigma2"] = s.sigma2;
          d["avar"] = s.avar;
          return d;
        },
        py::arg("p"), py::arg("f"), py::arg("center") = false, pi_arg);
  m.def("operator_t",
        [](const Matrix& p, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          return operator_t(c.p, c.pi);
        },
        py::arg("p"), pi_arg);
  m.def("saddle_point",
        [](const Matrix& p, const Vector& f, bool center, const std::optional<Vector>& pi) {
          const Prepared c = prepare(p, pi);
          const SaddlePoint s = saddle_point(c.p, c.pi, observable(f, c.pi, center));
          py::dict d;
          d["xi"] = s.xi_star.values();
          d["eta"] = s.eta_star.values();
          d["value"] = s.value;
          return d;
        },
        py::arg("p"), py::arg("f"), py::arg("center") = false, pi_arg);

  auto pair = [](auto fn) {
    return [fn](const Matrix& p1, const Matrix& p2) {
      const StochasticKernel a = validate_kernel(p1);
      const StochasticKernel b = validate_kernel(p2);
      const StationaryDist pi = stationary_distribution(a);
      require_shared_stationary(a, b, pi);
      return fn(a, b, pi);
    };
  };
  m.def("peskun_order",
        pair([](const auto& a, const auto& b, const auto& pi) {
          return order_to_py(peskun_order(a, b, pi));
        }),
        py::arg("p1"), py::arg("p2"));
  m.def("dirichlet_order",
        pair([](const auto& a, const auto& b, const auto& pi) {
          return order_to_py(dirichlet_order(a, b, pi));
        }),
        py::arg("p1"), py::arg("p2"));
  m.def("fk_order",
        pair([](const auto& a, const auto& b, const auto& pi) {
          return order_to_py(fk_order(a, b, pi));
        }),
        py::arg("p"), py::arg("q"), "Tests P << Q in the Fill-Kahn sense.");
  m.def("uniform_variance_domination",
        pair([](const auto& a, const auto& b, const auto& pi) {
          const DominationReport r = uniform_variance_domination(a, b, pi);
          py::dict d;
          d["holds"] = r.holds;
          d["margin"] = r.margin;
          d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
          return d;
        }),
        py::arg("p1"), py::arg("p2"),
        "Holds iff sigma~^2(P2, f) <= sigma~^2(P1, f) for every f.");

  m.def("make_nonreversible",
        [](const Matrix& k, const Matrix& gamma, double alpha) {
          const Prepared c = prepare(k, std::nullopt);
          const VorticitySpec spec = validate_vorticity(c.p, c.pi, gamma);
          return family_alpha(c.p, c.pi, spec, alpha).matrix();
        },
        py::arg("k"), py::arg("gamma"), py::arg("alpha") = 1.0, "K + alpha Gamma.");
  m.def("apply_drift",
        [](const Matrix& k, const Matrix& lambda) {
          const Prepared c = prepare(k, std::nullopt);
          return apply_drift(c.p, c.pi, validate_drift(c.p, c.pi, lambda)).matrix();
        },
        py::arg("k"), py::arg("lambda_"), "K + D_pi^{-1} Lambda.");

  m.def("simulate",
        [](const Matrix& p, std::size_t n, std::uint64_t seed, std::optional<std::size_t> initial) {
          const Prepared c = prepare(p, std::nullopt);
          const Initial init = initial ? Initial(*initial) : Initial(c.pi.weights());
          const Trajectory t = simulate(c.p, init, n, seed);
          py::dict d;
          d["states"] = t.states;
          d["seed"] = t.seed;
          d["kernel_hash"] = t.kernel_hash;
          d["rng"] = t.rng;
          return d;
        },
        py::arg("p"), py::arg("n"), py::arg("seed") = 0, py::arg("initial") = py::none(),
        "Trajectory of n steps; starts from pi unless an initial state is given.");
  m.def("estimate_avar",
        [](const Matrix& p, const Vector& f, std::size_t n, std::uint64_t seed,
           std::optional<std::size_t> batch_len) {
          const Prepared c = prepare(p, std::nullopt);
          const Trajectory t = simulate(c.p, Initial(c.pi.weights()), n, seed);
          const AvarEstimate e = batch_means_avar(
              t, Observable(f, c.pi).centered(c.pi), batch_len.value_or(default_batch_len(n)));
          py::dict d;
          d["value"] = e.value;
          d["std_error"] = e.std_error;
          d["n_batches"] = e.n_batches;
          d["batch_len"] = e.batch_len;
          return d;
        },
        py::arg("p"), py::arg("f"), py::arg("n") = 100000, py::arg("seed") = 0,
        py::arg("batch_len") = py::none(), "Batch-means estimate of the asymptotic variance.");

  m.def("reproduce_examples",
        [](std::optional<std::string> only, double tol) {
          py::list out;
          for (const fixtures::Row& r : fixtures::reproduce(only, tol)) {
            py::dict d;
            d["group"] = r.group;
            d["name"] = r.name;
            d["published"] = py::make_tuple(r.published.num, r.published.den);
            d["computed"] = r.computed;
            d["delta"] = r.delta;
            d["verdict"] = std::string(fixtures::to_string(r.verdict));
            d["note"] = r.note;
            out.append(d);
          }
          return out;
        },
        py::arg("only") = py::none(), py::arg("tol") = 1e-9);
  m.def("fixture_kernels", [] {
    py::dict d;
    for (const auto& k : fixtures::kernels()) d[py::str(k.name)] = k.rows;
    return d;
  });
}
