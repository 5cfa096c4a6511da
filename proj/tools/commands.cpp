#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "io.hpp"
#include "mavar/montecarlo.hpp"
#include "mavar/ordering.hpp"
#include "mavar/perturb.hpp"
#include "mavar/poisson.hpp"
#include "mavar/variational.hpp"

namespace mavar::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Reducible: return kReducible;
    case ErrorCode::DegenerateKernel:
    case ErrorCode::SingularK:
    case ErrorCode::ZeroVariance: return kDegenerate;
    case ErrorCode::RouteDisagreement:
    case ErrorCode::NumericalFailure: return kVerificationFailed;
    case ErrorCode::StationaryMismatch:
    case ErrorCode::NotStationary: return kStationaryMismatch;
    case ErrorCode::NotCentered: return kNotCentered;
    default: return kInvalidInput;
  }
}

namespace {

struct Loaded {
  StochasticKernel p;
  StationaryDist pi;
};

Loaded load(const Settings& s, const Path& path) {
  const KernelFile file = read_kernel(path);
  StochasticKernel p = validate_kernel(file.rows, s.tol);
  if (file.pi) {
    StationaryDist pi = StationaryDist::from_weights(*file.pi, s.tol);
    if (pi.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "pi has wrong size");
    require_stationary(p, pi);
    return {std::move(p), std::move(pi)};
  }
  StationaryDist pi = stationary_distribution(p);
  return {std::move(p), std::move(pi)};
}

Observable load_observable(const Settings& s, const Path& path, const Loaded& k, bool center,
                           std::ostream& err) {
  const Vector values = read_observable(path);
  if (static_cast<std::size_t>(values.size()) != k.p.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observable has " + std::to_string(values.size()) + " entries, kernel has " +
                    std::to_string(k.p.size()) + " states");
  }
  Observable f(values, k.pi);
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (std::abs(f.pi_mean()) > s.tol * scale) {
    if (!center) {
      throw Error(ErrorCode::NotCentered,
                  "pi(f) = " + fmt(f.pi_mean()) + "; pass --center to subtract it",
                  f.pi_mean());
    }
    err << "warning: pi(f) = " << fmt(f.pi_mean()) << "; centering f\n";
    return f.centered(k.pi);
  }
  return f.centered(k.pi);
}

std::string join(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt(v(i));
  }
  return s;
}

void line(std::ostream& out, const std::string& key, const std::string& value) {
  out << key;
  for (std::size_t i = key.size(); i < 24; ++i) out << ' ';
  out << ' ' << value << '\n';
}

const char* yes(bool b) { return b ? "yes" : "no"; }

json variance_json(const Variance& v) {
  return v.is_finite() ? json(v.value()) : json("inf");
}

json witness_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  if (const auto* ij = std::get_if<IndexPair>(&*w)) {
    return {{"kind", "index"}, {"value", {ij->first, ij->second}}};
  }
  return {{"kind", "function"}, {"value", to_json(std::get<Vector>(*w))}};
}

std::string witness_text(const std::optional<Witness>& w) {
  if (!w) return "-";
  if (const auto* ij = std::get_if<IndexPair>(&*w)) {
    return "(" + std::to_string(ij->first) + ", " + std::to_string(ij->second) + ")";
  }
  return "f = [" + join(std::get<Vector>(*w)) + "]";
}

json order_json(const OrderReport& r) {
  return {{"relation", std::string(to_string(r.relation))},
          {"holds", r.holds},
          {"margin", r.margin},
          {"witness", witness_json(r.witness)}};
}

json domination_json(const DominationReport& r) {
  return {{"holds", r.holds},
          {"margin", r.margin},
          {"witness", r.witness ? to_json(*r.witness) : json(nullptr)}};
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int cmd_validate(const Settings& s, const Path& kernel, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Loaded k = load(s, kernel);
    const bool rev = is_reversible(k.p, k.pi, s.identity_tol);
    const double r = spectral_radius_l20(k.p, k.pi);
    const bool solvable = r < kRadiusGate || rev;
    if (s.json) {
      out << json{{"n", k.p.size()},
                  {"irreducible", true},
                  {"pi", to_json(k.pi.weights())},
                  {"reversible", rev},
                  {"spectral_radius", r},
                  {"poisson_solvable", solvable}}
                 .dump(2)
          << '\n';
    } else {
      line(out, "n", std::to_string(k.p.size()));
      line(out, "irreducible", "yes");
      line(out, "pi", join(k.pi.weights()));
      line(out, "reversible", yes(rev));
      line(out, "r(P)", fmt(r));
      line(out, "poisson solvable", yes(solvable));
    }
    return kOk;
  });
}

int cmd_analyze(const Settings& s, const Path& kernel, const Path& observable, bool center,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Loaded k = load(s, kernel);
    const Observable f = load_observable(s, observable, k, center, err);
    const double r = require_poisson_solvable(k.p, k.pi);
    const bool rev = is_reversible(k.p, k.pi, s.identity_tol);

    const PoissonSolution sol = solve_dual_pair(k.p, k.pi, f);
    const double via_t = avar_via_t(k.p, k.pi, f);
    std::optional<Variance> spectral;
    if (rev) spectral = avar_spectral(k.p, k.pi, f);
    const auto [avar_p, avar_star] = check_dual_equality(k.p, k.pi, f);

    const double agree_tol = 1e-9 * std::max(1.0, std::abs(sol.sigma2));
    bool agree = std::abs(via_t - sol.sigma2) <= agree_tol;
    if (spectral) {
      agree = agree && spectral->is_finite() &&
              std::abs(spectral->value() - sol.sigma2) <= agree_tol;
    }

    if (s.json) {
      out << json{{"n", k.p.size()},
                  {"pi", to_json(k.pi.weights())},
                  {"reversible", rev},
                  {"spectral_radius", r},
                  {"phi", to_json(sol.phi.values())},
                  {"phi_star", to_json(sol.phi_star.values())},
                  {"sigma2", sol.sigma2},
                  {"avar", sol.avar},
                  {"avar_adjoint", avar_star},
                  {"routes",
                   {{"dual_pair", sol.sigma2},
                    {"operator_t", via_t},
                    {"spectral", spectral ? variance_json(*spectral) : json(nullptr)}}},
                  {"routes_agree", agree}}
                 .dump(2)
          << '\n';
    } else {
      line(out, "n", std::to_string(k.p.size()));
      line(out, "pi", join(k.pi.weights()));
      line(out, "reversible", yes(rev));
      line(out, "r(P)", fmt(r));
      line(out, "phi", join(sol.phi.values()));
      line(out, "phi*", join(sol.phi_star.values()));
      line(out, "sigma2", fmt(sol.sigma2));
      line(out, "avar", fmt(sol.avar));
      line(out, "avar (adjoint)", fmt(avar_star));
      line(out, "route dual-pair", fmt(sol.sigma2));
      line(out, "route operator-T", fmt(via_t));
      line(out, "route spectral",
           !spectral ? "n/a (not reversible)"
                     : (spectral->is_finite() ? fmt(spectral->value()) : "inf"));
      line(out, "routes agree", yes(agree));
    }
    (void)avar_p;
    if (!agree) {
      err << "error: sigma2 routes disagree\n";
      return static_cast<int>(kVerificationFailed);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_compare(const Settings& s, const Path& kernel1, const Path& kernel2, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const Loaded a = load(s, kernel1);
    const Loaded b = load(s, kernel2);
    if (a.p.size() != b.p.size()) {
      throw Error(ErrorCode::StationaryMismatch, "kernels live on different state spaces");
    }
    require_shared_stationary(a.p, b.p, a.pi);

    const OrderReport peskun = peskun_order(a.p, b.p, a.pi);
    const OrderReport dirichlet = dirichlet_order(a.p, b.p, a.pi);
    const OrderReport fk12 = fk_order(a.p, b.p, a.pi);
    const OrderReport fk21 = fk_order(b.p, a.p, a.pi);
    const DominationReport dom12 = uniform_variance_domination(a.p, b.p, a.pi);
    const DominationReport dom21 = uniform_variance_domination(b.p, a.p, a.pi);

    if (s.json) {
      out << json{{"pi", to_json(a.pi.weights())},
                  {"peskun", order_json(peskun)},
                  {"dirichlet", order_json(dirichlet)},
                  {"fill_kahn", order_json(fk12)},
                  {"fill_kahn_reverse", order_json(fk21)},
                  {"domination", domination_json(dom12)},
                  {"domination_reverse", domination_json(dom21)}}
                 .dump(2)
          << '\n';
      return static_cast<int>(kOk);
    }
    auto order_line = [&](const std::string& label, const OrderReport& r) {
      line(out, label,
           std::string(yes(r.holds)) + "  margin " + fmt(r.margin) +
               (r.holds ? "" : "  witness " + witness_text(r.witness)));
    };
    line(out, "pi", join(a.pi.weights()));
    order_line("peskun P1 <= P2", peskun);
    order_line("dirichlet P1 <= P2", dirichlet);
    order_line("fill-kahn P1 << P2", fk12);
    order_line("fill-kahn P2 << P1", fk21);
    auto dom_line = [&](const std::string& label, const DominationReport& r) {
      line(out, label,
           std::string(yes(r.holds)) + "  margin " + fmt(r.margin) +
               (r.witness ? "  witness f = [" + join(*r.witness) + "]" : ""));
    };
    dom_line("avar(P2) <= avar(P1)", dom12);
    dom_line("avar(P1) <= avar(P2)", dom21);
    return static_cast<int>(kOk);
  });
}

int cmd_perturb(const Settings& s, const Path& kernel, const PerturbArgs& args,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.gamma.has_value() == args.lambda.has_value()) {
      throw Error(ErrorCode::InvalidArgument, "give exactly one of --gamma or --lambda");
    }
    const Loaded k = load(s, kernel);
    const bool vort = args.gamma.has_value();
    const PerturbationFile file = read_perturbation(vort ? *args.gamma : *args.lambda);
    const std::string expected = vort ? "vorticity" : "drift";
    if (!file.kind.empty() && file.kind != expected) {
      throw Error(ErrorCode::InvalidArgument,
                  "perturbation file has kind '" + file.kind + "', expected " + expected);
    }
    if (!vort && args.alpha != 1.0) {
      throw Error(ErrorCode::InvalidArgument, "--alpha applies to --gamma only");
    }

    StochasticKernel p = vort ? family_alpha(k.p, k.pi,
                                             validate_vorticity(k.p, k.pi, file.matrix, s.tol),
                                             args.alpha)
                              : apply_drift(k.p, k.pi, validate_drift(k.p, k.pi, file.matrix,
                                                                      s.tol));
    const bool rev = is_reversible(p, k.pi, s.identity_tol);
    const json kernel_doc = kernel_json(p.matrix(), k.pi.weights());
    if (args.out) write_text(*args.out, kernel_doc.dump(2) + "\n");

    if (s.json) {
      out << json{{"kind", expected},
                  {"alpha", vort ? json(args.alpha) : json(nullptr)},
                  {"reversible", rev},
                  {"kernel", kernel_doc}}
                 .dump(2)
          << '\n';
    } else {
      line(out, "kind", expected);
      if (vort) line(out, "alpha", fmt(args.alpha));
      line(out, "pi preserved", "yes");
      line(out, "reversible", yes(rev));
      for (Eigen::Index i = 0; i < p.matrix().rows(); ++i) {
        line(out, i == 0 ? "kernel" : "", join(p.matrix().row(i).transpose()));
      }
      if (args.out) line(out, "written", args.out->string());
    }
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const Settings& s, const Path& kernel, const Path& observable,
               const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Loaded k = load(s, kernel);
    const Observable f = load_observable(s, observable, k, args.center, err);
    require_poisson_solvable(k.p, k.pi);
    const double sig = sigma2(k.p, k.pi, f);
    const double target = 1.0 / sig;
    const double tol = 1e-9 * std::max(1.0, target);

    struct Check {
      std::string name;
      bool pass;
      double value;
    };
    std::vector<Check> checks;

    const SaddlePoint sp = saddle_point(k.p, k.pi, f);
    checks.push_back({"saddle value = 1/sigma2", std::abs(sp.value - target) <= tol, sp.value});
    const InnerSup at_star = inner_sup(k.p, k.pi, f, sp.xi_star);
    checks.push_back({"inner sup at xi* = 1/sigma2", std::abs(at_star.value - target) <= tol,
                      at_star.value});
    const TInf ti = t_inf(k.p, k.pi, f);
    checks.push_back({"T infimum = 1/sigma2", std::abs(ti.value - target) <= tol, ti.value});
    if (is_reversible(k.p, k.pi, s.identity_tol)) {
      const ReversibleInf ri = reversible_inf(k.p, k.pi, f);
      checks.push_back(
          {"Dirichlet infimum = 1/sigma2", std::abs(ri.value - target) <= tol, ri.value});
    }

    std::mt19937_64 rng(args.seed);
    const Observable zero(Vector::Zero(static_cast<Eigen::Index>(k.p.size())), k.pi);
    double worst_xi = std::numeric_limits<double>::infinity();
    double worst_eta = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < args.probes; ++t) {
      const Observable xi = random_in_constraint_set(sp.xi_star, f, k.pi, rng);
      worst_xi = std::min(worst_xi, inner_sup(k.p, k.pi, f, xi).value);
      const Vector eta = random_in_constraint_set(zero, f, k.pi, rng).values();
      const Vector plus = sp.xi_star.values() + eta;
      const Vector minus = sp.xi_star.values() - eta;
      worst_eta = std::max(worst_eta, bilinear_d(k.p, k.pi, plus, minus));
    }
    if (args.probes > 0) {
      checks.push_back({"min inner sup over random xi >= 1/sigma2", worst_xi >= target - tol,
                        worst_xi});
      checks.push_back({"max D(xi*+eta, xi*-eta) <= 1/sigma2", worst_eta <= target + tol,
                        worst_eta});
    }

    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    if (s.json) {
      json arr = json::array();
      for (const auto& c : checks) arr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
      out << json{{"sigma2", sig}, {"target", target}, {"checks", arr}, {"passed", all}}.dump(2)
          << '\n';
    } else {
      line(out, "sigma2", fmt(sig));
      line(out, "1/sigma2", fmt(target));
      for (const auto& c : checks) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  (" << fmt(c.value) << ")\n";
      }
    }
    return static_cast<int>(all ? kOk : kVerificationFailed);
  });
}

int cmd_simulate(const Settings& s, const Path& kernel, const Path& observable,
                 const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Loaded k = load(s, kernel);
    const Vector values = read_observable(observable);
    if (static_cast<std::size_t>(values.size()) != k.p.size()) {
      throw Error(ErrorCode::DimensionMismatch, "observable size does not match kernel");
    }
    const Observable f(values, k.pi);
    const Initial initial = args.initial_state ? Initial(*args.initial_state)
                                               : Initial(k.pi.weights());
    const Trajectory traj = simulate(k.p, initial, args.n, args.seed);
    const std::size_t batch = args.batch_len.value_or(default_batch_len(traj.states.size()));
    const AvarEstimate est = batch_means_avar(traj, f, batch);

    std::optional<double> analytic;
    try {
      require_poisson_solvable(k.p, k.pi);
      analytic = asymptotic_variance(k.p, k.pi, f.centered(k.pi));
    } catch (const Error&) {
    }

    if (args.dump) {
      std::ostringstream csv;
      for (std::size_t st : traj.states) csv << st << '\n';
      write_text(*args.dump, csv.str());
    }
    if (s.json) {
      out << json{{"value", est.value},
                  {"std_error", est.std_error},
                  {"n_batches", est.n_batches},
                  {"batch_len", est.batch_len},
                  {"seed", traj.seed},
                  {"rng", traj.rng},
                  {"kernel_hash", traj.kernel_hash},
                  {"analytic", analytic ? json(*analytic) : json(nullptr)}}
                 .dump(2)
          << '\n';
    } else {
      line(out, "estimate", fmt(est.value));
      line(out, "std error", fmt(est.std_error));
      line(out, "batches", std::to_string(est.n_batches) + " x " + std::to_string(est.batch_len));
      line(out, "seed", std::to_string(traj.seed));
      line(out, "rng", traj.rng);
      line(out, "kernel hash", traj.kernel_hash);
      line(out, "analytic avar", analytic ? fmt(*analytic) : "n/a");
    }
    return static_cast<int>(kOk);
  });
}

json rows_to_json(const std::vector<fixtures::Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"group", r.group},
                   {"name", r.name},
                   {"published", {{"num", r.published.num}, {"den", r.published.den}}},
                   {"published_value", r.published.value()},
                   {"computed", r.computed},
                   {"delta", r.delta},
                   {"verdict", std::string(fixtures::to_string(r.verdict))},
                   {"note", r.note}});
  }
  return arr;
}

std::vector<fixtures::Row> rows_from_json(const json& j) {
  std::vector<fixtures::Row> rows;
  try {
    for (const auto& r : j) {
      const auto verdict = fixtures::verdict_from_string(r.at("verdict").get<std::string>());
      if (!verdict) throw Error(ErrorCode::InvalidArgument, "unknown verdict");
      rows.push_back(fixtures::Row{r.at("group").get<std::string>(),
                                   r.at("name").get<std::string>(),
                                   {r.at("published").at("num").get<long long>(),
                                    r.at("published").at("den").get<long long>()},
                                   r.at("computed").get<double>(),
                                   r.at("delta").get<double>(),
                                   *verdict,
                                   r.at("note").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed row: ") + e.what());
  }
  return rows;
}

std::vector<Path> dump_fixtures(const Path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<Path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const Path p = dir / name;
    write_text(p, text);
    written.push_back(p);
  };
  for (const auto& k : fixtures::kernels()) {
    put(k.name + ".json", kernel_json(k.rows).dump(2) + "\n");
  }
  auto csv = [](const Vector& v) {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) os << v(i) << '\n';
    return os.str();
  };
  put("chen_f1.csv", csv(fixtures::chen_f1()));
  put("chen_f2.csv", csv(fixtures::chen_f2()));

  auto gamma_of = [](const Matrix& k, const Matrix& weighted) {
    const StationaryDist pi = stationary_distribution(validate_kernel(k));
    return Matrix(pi.weights().cwiseInverse().asDiagonal() * weighted);
  };
  auto perturbation = [](const std::string& kind, const Matrix& m) {
    return json{{"kind", kind}, {"matrix", to_json(m)}}.dump(2) + "\n";
  };
  put("uniform3_gamma.json",
      perturbation("vorticity", gamma_of(fixtures::uniform3_k(),
                                         fixtures::uniform3_weighted_vorticity())));
  put("cycle4_gamma.json",
      perturbation("vorticity",
                   gamma_of(fixtures::cycle4_k(), fixtures::cycle4_weighted_vorticity())));
  put("lambda1.json", perturbation("drift", fixtures::lambda1()));
  put("lambda2.json", perturbation("drift", fixtures::lambda2()));
  return written;
}

int cmd_reproduce(const Settings& s, const ReproduceArgs& args, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    if (args.dump_fixtures) {
      for (const auto& p : dump_fixtures(*args.dump_fixtures)) out << p.string() << '\n';
      return static_cast<int>(kOk);
    }
    const auto rows = fixtures::reproduce(args.only, s.tol);
    bool failed = false;
    for (const auto& r : rows) failed = failed || r.verdict == fixtures::Verdict::Fail;

    if (s.json) {
      out << json{{"rows", rows_to_json(rows)}, {"tol", s.tol}, {"passed", !failed}}.dump(2)
          << '\n';
    } else {
      for (const auto& r : rows) {
        out << r.group << " | " << r.name << " | published " << r.published.num << '/' << r.published.den
            << " = " << fmt(r.published.value()) << " | computed " << fmt(r.computed)
            << " | delta " << fmt(r.delta) << " | " << fixtures::to_string(r.verdict);
        if (!r.note.empty()) out << " | " << r.note;
        out << '\n';
      }
    }
    if (failed) {
      err << "error: fixture rows deviate beyond " << fmt(s.tol) << '\n';
      return static_cast<int>(kFixtureDeviation);
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace mavar::cli
