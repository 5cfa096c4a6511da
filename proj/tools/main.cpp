#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace mavar::cli;

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic variance of finite-state Markov chains"};
  app.require_subcommand(1);

  Settings settings;
  if (const char* env = std::getenv("MAVAR_TOL")) {
    try {
      std::size_t used = 0;
      settings.tol = std::stod(env, &used);
      if (used != std::string(env).size() || !(settings.tol > 0.0)) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "error: MAVAR_TOL must be a positive number, got '" << env << "'\n";
      return kInvalidInput;
    }
  }
  std::string format = "table";
  bool json_flag = false;
  app.add_option("--tol", settings.tol, "Stochasticity tolerance (default 1e-9, env MAVAR_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--identity-tol", settings.identity_tol,
                 "Tolerance for identity checks such as reversibility")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_flag("--json", json_flag, "Shorthand for --format json");

  std::string kernel, kernel2, observable;
  bool center = false;

  auto* validate = app.add_subcommand("validate", "Check a kernel and report pi, r(P)");
  validate->add_option("kernel", kernel)->required();

  auto* analyze = app.add_subcommand("analyze", "Poisson solutions and sigma2 by every route");
  analyze->add_option("kernel", kernel)->required();
  analyze->add_option("observable", observable)->required();
  analyze->add_flag("--center", center, "Subtract pi(f) instead of rejecting f");

  auto* compare = app.add_subcommand("compare", "Orders and variance domination of two kernels");
  compare->add_option("kernel1", kernel)->required();
  compare->add_option("kernel2", kernel2)->required();

  PerturbArgs perturb_args;
  std::string gamma, lambda, out_path;
  auto* perturb = app.add_subcommand("perturb", "Add a vorticity or drift perturbation");
  perturb->add_option("kernel", kernel)->required();
  auto* gamma_opt = perturb->add_option("--gamma", gamma, "Vorticity matrix file");
  auto* lambda_opt = perturb->add_option("--lambda", lambda, "Drift matrix file");
  gamma_opt->excludes(lambda_opt);
  perturb->add_option("--alpha", perturb_args.alpha, "Scale of the vorticity, in [-1, 1]");
  perturb->add_option("--out", out_path, "Write the perturbed kernel here");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the variational identities");
  verify->add_option("kernel", kernel)->required();
  verify->add_option("observable", observable)->required();
  verify->add_flag("--center", verify_args.center, "Subtract pi(f) instead of rejecting f");
  verify->add_option("--probes", verify_args.probes, "Random probes per constraint set");
  verify->add_option("--seed", verify_args.seed, "Seed for the probes");

  SimulateArgs sim_args;
  std::size_t batch_len = 0, initial = 0;
  std::string dump;
  auto* sim = app.add_subcommand("simulate", "Batch-means estimate from a simulated path");
  sim->add_option("kernel", kernel)->required();
  sim->add_option("observable", observable)->required();
  sim->add_option("--n", sim_args.n, "Number of transitions")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  auto* batch_opt = sim->add_option("--batch-len", batch_len, "Batch length (default sqrt(n))")
                        ->check(CLI::PositiveNumber);
  auto* initial_opt = sim->add_option("--initial", initial, "Start state (default: draw from pi)");
  sim->add_option("--dump", dump, "Write visited states as CSV");

  ReproduceArgs repro_args;
  std::string only, dump_dir;
  auto* repro = app.add_subcommand("reproduce-examples", "Recompute every built-in example");
  auto* only_opt = repro->add_option("--only", only, "Restrict to one group");
  auto* dump_opt = repro->add_option("--dump-fixtures", dump_dir,
                                     "Write the built-in fixtures as input files and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }
  settings.json = json_flag || format == "json";

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*validate) return cmd_validate(settings, kernel, out, err);
  if (*analyze) return cmd_analyze(settings, kernel, observable, center, out, err);
  if (*compare) return cmd_compare(settings, kernel, kernel2, out, err);
  if (*perturb) {
    if (*gamma_opt) perturb_args.gamma = gamma;
    if (*lambda_opt) perturb_args.lambda = lambda;
    if (!out_path.empty()) perturb_args.out = out_path;
    return cmd_perturb(settings, kernel, perturb_args, out, err);
  }
  if (*verify) return cmd_verify(settings, kernel, observable, verify_args, out, err);
  if (*sim) {
    if (*batch_opt) sim_args.batch_len = batch_len;
    if (*initial_opt) sim_args.initial_state = initial;
    if (!dump.empty()) sim_args.dump = dump;
    return cmd_simulate(settings, kernel, observable, sim_args, out, err);
  }
  if (*repro) {
    if (*only_opt) repro_args.only = only;
    if (*dump_opt) repro_args.dump_fixtures = dump_dir;
    return cmd_reproduce(settings, repro_args, out, err);
  }
  return kInvalidInput;
}
