#pragma once

// Subcommand implementations. Each returns the process exit code and writes
// only to the streams it is given, so tests can drive them in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mavar/error.hpp"
#include "mavar/fixtures.hpp"

namespace mavar::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInvalidInput = 2,
  kReducible = 3,
  kDegenerate = 4,
  kVerificationFailed = 5,
  kStationaryMismatch = 6,
  kFixtureDeviation = 7,
  kNotCentered = 8,
};

int exit_code_for(ErrorCode code);

struct Settings {
  double tol = kStochasticTol;
  double identity_tol = kIdentityTol;
  bool json = false;
};

using Path = std::filesystem::path;

int cmd_validate(const Settings& s, const Path& kernel, std::ostream& out, std::ostream& err);

int cmd_analyze(const Settings& s, const Path& kernel, const Path& observable, bool center,
                std::ostream& out, std::ostream& err);

int cmd_compare(const Settings& s, const Path& kernel1, const Path& kernel2, std::ostream& out,
                std::ostream& err);

struct PerturbArgs {
  std::optional<Path> gamma;
  std::optional<Path> lambda;
  double alpha = 1.0;
  std::optional<Path> out;
};

int cmd_perturb(const Settings& s, const Path& kernel, const PerturbArgs& args,
                std::ostream& out, std::ostream& err);

struct VerifyArgs {
  bool center = false;
  std::size_t probes = 20;
  std::uint64_t seed = 0;
};

int cmd_verify(const Settings& s, const Path& kernel, const Path& observable,
               const VerifyArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> batch_len;
  std::optional<std::size_t> initial_state;  // default: start from pi
  std::optional<Path> dump;
};

int cmd_simulate(const Settings& s, const Path& kernel, const Path& observable,
                 const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct ReproduceArgs {
  std::optional<std::string> only;
  std::optional<Path> dump_fixtures;
};

int cmd_reproduce(const Settings& s, const ReproduceArgs& args, std::ostream& out,
                  std::ostream& err);

/// JSON mirror of the reproduction table and its inverse.
nlohmann::json rows_to_json(const std::vector<fixtures::Row>& rows);
std::vector<fixtures::Row> rows_from_json(const nlohmann::json& j);

/// Writes every fixture kernel, observable and perturbation as input files.
std::vector<Path> dump_fixtures(const Path& dir);

}  // namespace mavar::cli
