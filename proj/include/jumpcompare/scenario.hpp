#pragma once

// Scenario files: one JSON document describing a pair of affine models, the
// initial states, and the simulation and checker settings.

#include "jumpcompare/model.hpp"
#include "jumpcompare/psdcone.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpcompare {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string pointer, std::optional<std::size_t> line, const std::string& what)
      : std::invalid_argument(what), pointer_(std::move(pointer)), line_(line) {}
  const std::string& pointer() const { return pointer_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::string pointer_;
  std::optional<std::size_t> line_;
};

enum class ScenarioKind { Vector, Matrix };

struct VectorModelBlock {
  AffineCoefficients affine;
  std::optional<RegularityBudget> budget;  // unset: certified from the coefficients
};

struct MatrixModelBlock {
  MatrixAffine affine;
  std::optional<RegularityBudget> budget;
};

struct McBlock {
  std::uint64_t paths = 10000;
  double step = 1.0 / 512.0;
  std::uint64_t seed = 1;
  std::optional<double> eps_path;
};

struct CheckBlock {
  std::size_t samples = 2000;
  double box = 2.0;
  std::optional<std::vector<double>> ladder;  // unset: default_ladder(box)
  std::uint64_t seed = 7;
  std::optional<double> eps_check;
  std::optional<double> cstar;
};

struct ScenarioConfig {
  std::string id;
  ScenarioKind kind = ScenarioKind::Vector;
  int m = 1;
  int d = 1;
  double t0 = 0.0;
  double horizon = 1.0;
  MarkMeasure marks;
  VectorModelBlock vector1;
  VectorModelBlock vector2;
  MatrixModelBlock matrix1;
  MatrixModelBlock matrix2;
  Mat x1;  // m x 1 (vector) or m x m (matrix)
  Mat x2;
  McBlock mc;
  CheckBlock check;

  ComparisonProblem vector_problem() const;
  MatrixComparisonProblem matrix_problem() const;

  friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);
};

std::string_view to_string(ScenarioKind kind);

//! Throws ParseError, SchemaError, OrderError; std::runtime_error if the file
//! cannot be read.
ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig from_json(const Json& doc, const std::string& source_text = {});

Json to_json(const ScenarioConfig& config);
std::string serialize(const ScenarioConfig& config);

}  // namespace jumpcompare
