#pragma once

#include "femnet/cpwl.hpp"
#include "femnet/mesh.hpp"
#include "femnet/relu_net.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace femnet::io {

using Json = nlohmann::json;

inline constexpr int kMeshSchema = 1;
inline constexpr int kCpwlSchema = 1;
inline constexpr int kLatticeSchema = 1;
inline constexpr int kNetSchema = 1;
inline constexpr int kReportSchema = 1;
inline constexpr const char* kVersion = "0.1.0";

/// {"mesh": 1, "cpwl": 1, ...}
Json schema_versions();

Json mesh_to_json(const SimplicialMesh& mesh);
SimplicialMesh mesh_from_json(const Json& j);

/// piece_of_region is written only when regions and pieces are not one-to-one.
Json cpwl_to_json(const CpwlPieces& f);
CpwlPieces cpwl_from_json(const Json& j);

Json lattice_to_json(const LatticeForm& f);
LatticeForm lattice_from_json(const Json& j);

/// Layers as sparse (row, col, value) triplets plus a dense bias.
Json net_to_json(const ReluNetwork& net);
ReluNetwork net_from_json(const Json& j);

/// Name of the artifact stored in j ("mesh", "cpwl", "lattice", "net"), from its "schema" field.
std::string schema_kind(const Json& j);

/// Reads IO errors as InvalidInput.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

/// One value per line, either "value" or "index,value"; '#' starts a comment.
std::vector<double> parse_coefficients(const std::string& text);
std::string format_coefficients(const std::vector<double>& c);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct RunReport {
  std::string command;
  Json inputs = Json::object();  // name -> {"path", "fnv1a"}
  Json config = Json::object();
  Json results = Json::object();
  std::optional<double> wall_time;  // left out by default so reports are byte-reproducible

  void add_input(const std::string& name, const std::string& path);
  Json to_json() const;
};

}  // namespace femnet::io
