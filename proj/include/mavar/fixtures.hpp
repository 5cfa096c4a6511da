#pragma once

// Worked examples compiled into the library, and the table that recomputes
// every published value from them.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mavar/kernel.hpp"

namespace mavar::fixtures {

/// Exact published value; converted to double only at comparison time.
struct Rational {
  long long num;
  long long den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Verdict { Pass, Fail, DiscrepancyDocumented };

std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view s);

struct Row {
  std::string group;
  std::string name;
  Rational published;
  double computed;
  double delta;  // |computed - published|
  Verdict verdict;
  std::string note;
  friend bool operator==(const Row&, const Row&) = default;
};

// Example with two lazy walks on the 6-cycle.
Matrix chen_p1();  // clockwise lazy cycle, 1/2 stay, 1/2 forward
Matrix chen_p2();  // simple symmetric walk
Vector chen_f1();  // (0, 0, 1, 0, 0, -1)
Vector chen_f2();  // (1, -1, 0, 0, 0, 0)
Vector chen_phi11_printed();

// Two non-reversible kernels on 3 states, pi = (3/14, 4/7, 3/14).
Matrix two_nonrev_p1();
Matrix two_nonrev_p2();

// Fill-Kahn counterexample.
Matrix fk_p();
Matrix fk_q();

// Acceleration examples.
Matrix cycle4_k();
Matrix cycle4_weighted_vorticity();  // +-1/8, multiplied by D_pi^{-1} to get Gamma
Matrix tridiag_k();
Matrix tridiag_perturbed_printed();
Matrix uniform3_k();
Matrix uniform3_weighted_vorticity();  // +-1/9 cyclic
Matrix lambda1();
Matrix lambda2();

struct NamedMatrix {
  std::string name;
  Matrix rows;
};

/// Every fixture kernel, for export.
std::vector<NamedMatrix> kernels();

std::vector<std::string> groups();

/// Recomputes the published values. `only` restricts to one group; rows off
/// by more than `tol` fail unless the deviation is a documented erratum.
std::vector<Row> reproduce(const std::optional<std::string>& only = std::nullopt,
                           double tol = 1e-9);

}  // namespace mavar::fixtures
