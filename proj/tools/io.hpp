#pragma once

// File formats understood by the command-line tool.
//
//   kernel       {"n": 3, "rows": [[...], ...], "pi": [...]?, "labels": [...]?}
//   observable   CSV, one value per line (commas also accepted), or a JSON array
//   perturbation {"kind": "vorticity" | "drift", "matrix": [[...], ...]}

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mavar/kernel.hpp"

namespace mavar::cli {

struct KernelFile {
  Matrix rows;
  std::optional<Vector> pi;
  std::vector<std::string> labels;
};

struct PerturbationFile {
  std::string kind;
  Matrix matrix;
};

/// All readers throw mavar::Error(InvalidArgument) on malformed input.
KernelFile read_kernel(const std::filesystem::path& path);
KernelFile parse_kernel(const nlohmann::json& doc);
Vector read_observable(const std::filesystem::path& path);
Vector parse_observable(const std::string& text);
PerturbationFile read_perturbation(const std::filesystem::path& path);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
nlohmann::json kernel_json(const Matrix& rows, const std::optional<Vector>& pi = std::nullopt);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);
Vector vector_from_json(const nlohmann::json& j, const std::string& what);

void write_text(const std::filesystem::path& path, const std::string& text);

/// 12 significant digits, the table-mode number format.
std::string fmt(double v);

}  // namespace mavar::cli
