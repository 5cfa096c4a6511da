#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mavar/error.hpp"

namespace mavar::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(origin + ": " + e.what());
  }
}

}  // namespace

Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      bad(what + ": row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) bad(what + ": non-numeric entry");
      m(i, c) = x.get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad(what + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

KernelFile parse_kernel(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rows")) bad("kernel file needs a \"rows\" field");
  KernelFile k;
  k.rows = matrix_from_json(doc["rows"], "rows");
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() != k.rows.rows()) {
      bad("\"n\" does not match the number of rows");
    }
  }
  if (doc.contains("pi") && !doc["pi"].is_null()) {
    k.pi = vector_from_json(doc["pi"], "pi");
    if (k.pi->size() != k.rows.rows()) bad("\"pi\" has the wrong length");
  }
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) bad("\"labels\" must be an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) bad("labels must be strings");
      k.labels.push_back(l.get<std::string>());
    }
    if (static_cast<Eigen::Index>(k.labels.size()) != k.rows.rows()) {
      bad("\"labels\" has the wrong length");
    }
  }
  return k;
}

KernelFile read_kernel(const std::filesystem::path& path) {
  return parse_kernel(parse_json(slurp(path), path.string()));
}

Vector parse_observable(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) bad("observable is empty");
  if (text[first] == '[') return vector_from_json(parse_json(text, "observable"), "observable");

  std::vector<double> values;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      if (tok[0] == '#') break;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        bad("observable: cannot parse '" + tok + "'");
      }
      if (used != tok.size()) bad("observable: cannot parse '" + tok + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) bad("observable is empty");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector read_observable(const std::filesystem::path& path) { return parse_observable(slurp(path)); }

PerturbationFile read_perturbation(const std::filesystem::path& path) {
  const auto doc = parse_json(slurp(path), path.string());
  if (!doc.is_object() || !doc.contains("matrix")) bad("perturbation file needs \"matrix\"");
  PerturbationFile p;
  p.kind = doc.value("kind", std::string{});
  p.matrix = matrix_from_json(doc["matrix"], "matrix");
  return p;
}

nlohmann::json to_json(const Vector& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::json to_json(const Matrix& m) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back(to_json(Vector(m.row(i).transpose())));
  return arr;
}

nlohmann::json kernel_json(const Matrix& rows, const std::optional<Vector>& pi) {
  nlohmann::json j = {{"n", rows.rows()}, {"rows", to_json(rows)}};
  if (pi) j["pi"] = to_json(*pi);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write '" + path.string() + "'");
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace mavar::cli
