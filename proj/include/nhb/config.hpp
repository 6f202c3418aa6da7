#pragma once

#include "nhb/berry.hpp"
#include "nhb/grid.hpp"

#include <optional>

namespace nhb::config {

enum class Command { Connection, Curvature, Chern, Holonomy, Adiabatic, Verify };

const char* command_name(Command c);

struct ModelRef {
  std::string name;                      // builtin name, or empty when file-backed
  std::map<std::string, double> params;  // fixed parameters for builtins
  std::string file;                      // NHGRID path for external models
};

enum class TransformType { None, DiagonalRescale, RandomGl };

struct TransformSpec {
  TransformType type = TransformType::None;
  uint64_t seed = 1;
  double log_scale = 1.0;
};

/// Loop or segment along one axis at fixed values of the others.
struct PathSpec {
  std::string axis;
  std::map<std::string, double> fixed;
  double from = 0.0;
  double to = 0.0;
  int points = 101;
  bool closed = false;
};

enum class OutputFormat { Json, Csv };

struct OutputSpec {
  std::string path;  // empty = stdout
  OutputFormat format = OutputFormat::Json;
};

struct AdiabaticSpec {
  double duration = 500.0;
  double dt = 0.0;  // 0 = auto
  int band = 0;
};

struct ChernSpec {
  std::string method = "link_plaquette";  // or "curvature_sum"
};

struct RunConfig {
  Command command = Command::Verify;
  ModelRef model;
  std::optional<ParamGrid> grid;
  std::optional<PathSpec> path;
  std::vector<int> bands;                              // empty = all
  std::vector<berry::Kind> kinds{berry::Kind::CBC};    // connection kinds
  TransformSpec transform;
  Tolerances tol;
  OutputSpec output;
  AdiabaticSpec adiabatic;
  ChernSpec chern;
  int workers = 0;   // 0 = NHBERRY_WORKERS or 1
  uint64_t seed = 1; // stream seed for seeded commands
};

/// Parse + validate a JSON run configuration. Unknown keys anywhere are
/// rejected with ValidationError naming the field; builtin-model semantic
/// checks (axis names, band bounds) run here as well.
RunConfig parse_config(const std::string& text);

/// Canonical JSON form (sorted keys, defaults materialized); parse_config of
/// the result reproduces the config.
std::string serialize(const RunConfig& cfg);

/// FNV-1a 64 over the canonical serialization, as 16 hex digits. Worker count
/// and output destination are excluded: runs that compute the same quantities
/// carry the same hash.
std::string config_hash(const RunConfig& cfg);

}  // namespace nhb::config
