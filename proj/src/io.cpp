#include "femnet/io.hpp"

#include "femnet/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace femnet::io {

namespace {

Json vec_to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec vec_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json affine_to_json(const AffineFunc& f) { return {{"gradient", vec_to_json(f.gradient)}, {"offset", f.offset}}; }

AffineFunc affine_from_json(const Json& j) { return {vec_from_json(j.at("gradient")), j.at("offset").get<double>()}; }

void expect_schema(const Json& j, const std::string& kind, int version) {
  if (!j.is_object() || j.value("schema", std::string()) != "femnet." + kind)
    throw Error(ErrorKind::InvalidInput, "expected a femnet." + kind + " document");
  if (j.value("version", 0) != version)
    throw Error(ErrorKind::InvalidInput, "unsupported femnet." + kind + " version " + j.value("version", Json()).dump());
}

// Runs fn, turning json access errors into InvalidInput.
template <class Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, what + ": " + e.what());
  }
}

}  // namespace

Json schema_versions() {
  return {{"mesh", kMeshSchema}, {"cpwl", kCpwlSchema}, {"lattice", kLatticeSchema}, {"net", kNetSchema},
          {"report", kReportSchema}};
}

Json mesh_to_json(const SimplicialMesh& mesh) {
  Json verts = Json::array();
  for (const auto& v : mesh.vertices()) verts.push_back(vec_to_json(v));
  return {{"schema", "femnet.mesh"}, {"version", kMeshSchema}, {"dim", mesh.dim()},
          {"vertices", verts},       {"simplices", mesh.simplices()}};
}

SimplicialMesh mesh_from_json(const Json& j) {
  expect_schema(j, "mesh", kMeshSchema);
  return guarded("mesh", [&] {
    std::vector<Vec> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vec_from_json(v));
    if (!verts.empty() && verts.front().size() != j.at("dim").get<int>())
      throw Error(ErrorKind::DimensionMismatch, "mesh dim disagrees with vertex length");
    return SimplicialMesh::build(std::move(verts), j.at("simplices").get<std::vector<std::vector<int>>>());
  });
}

Json cpwl_to_json(const CpwlPieces& f) {
  Json pieces = Json::array(), regions = Json::array();
  for (const auto& p : f.pieces) pieces.push_back(affine_to_json(p));
  for (const auto& r : f.regions) {
    Json hs = Json::array();
    for (const auto& h : r.halfspaces) hs.push_back({{"normal", vec_to_json(h.normal)}, {"offset", h.offset}});
    regions.push_back({{"halfspaces", hs}});
  }
  Json j = {{"schema", "femnet.cpwl"}, {"version", kCpwlSchema}, {"dim", f.dim}, {"pieces", pieces},
            {"regions", regions}};
  if (!f.region_piece.empty()) j["piece_of_region"] = f.region_piece;
  if (f.domain) j["domain_box"] = {{"lo", vec_to_json(f.domain->lo)}, {"hi", vec_to_json(f.domain->hi)}};
  return j;
}

CpwlPieces cpwl_from_json(const Json& j) {
  expect_schema(j, "cpwl", kCpwlSchema);
  return guarded("cpwl", [&] {
    CpwlPieces f;
    f.dim = j.at("dim").get<int>();
    for (const auto& p : j.at("pieces")) f.pieces.push_back(affine_from_json(p));
    for (const auto& r : j.at("regions")) {
      Polyhedron poly;
      for (const auto& h : r.at("halfspaces"))
        poly.halfspaces.push_back({vec_from_json(h.at("normal")), h.at("offset").get<double>()});
      f.regions.push_back(std::move(poly));
    }
    if (j.contains("piece_of_region")) f.region_piece = j.at("piece_of_region").get<std::vector<int>>();
    if (j.contains("domain_box"))
      f.domain = Box{vec_from_json(j.at("domain_box").at("lo")), vec_from_json(j.at("domain_box").at("hi"))};
    for (const auto& p : f.pieces)
      if (p.dim() != f.dim) throw Error(ErrorKind::DimensionMismatch, "piece dimension disagrees with dim");
    return f;
  });
}

Json lattice_to_json(const LatticeForm& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces) pieces.push_back(affine_to_json(p));
  return {{"schema", "femnet.lattice"}, {"version", kLatticeSchema}, {"dim", f.dim()}, {"pieces", pieces},
          {"clauses", f.clauses}};
}

LatticeForm lattice_from_json(const Json& j) {
  expect_schema(j, "lattice", kLatticeSchema);
  return guarded("lattice", [&] {
    LatticeForm f;
    for (const auto& p : j.at("pieces")) f.pieces.push_back(affine_from_json(p));
    f.clauses = j.at("clauses").get<std::vector<std::vector<int>>>();
    for (const auto& c : f.clauses)
      for (int i : c)
        if (i < 0 || i >= static_cast<int>(f.pieces.size()))
          throw Error(ErrorKind::InvalidInput, "clause index out of range");
    return f;
  });
}

Json net_to_json(const ReluNetwork& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    Json entries = Json::array();
    for (const auto& e : l.entries()) entries.push_back({e.row, e.col, e.value});
    layers.push_back({{"rows", l.rows}, {"cols", l.cols}, {"entries", entries}, {"bias", l.bias}});
  }
  return {{"schema", "femnet.net"}, {"version", kNetSchema}, {"input_dim", net.input_dim()}, {"layers", layers}};
}

ReluNetwork net_from_json(const Json& j) {
  expect_schema(j, "net", kNetSchema);
  return guarded("net", [&] {
    std::vector<Layer> layers;
    for (const auto& l : j.at("layers")) {
      const int rows = l.at("rows").get<int>(), cols = l.at("cols").get<int>();
      std::vector<Layer::Entry> entries;
      for (const auto& e : l.at("entries")) {
        const int r = e.at(0).get<int>(), c = e.at(1).get<int>();
        if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error(ErrorKind::InvalidInput, "layer entry out of range");
        entries.push_back({r, c, e.at(2).get<double>()});
      }
      auto bias = l.at("bias").get<std::vector<double>>();
      if (static_cast<int>(bias.size()) != rows) throw Error(ErrorKind::DimensionMismatch, "bias length != rows");
      layers.push_back(Layer::from_entries(rows, cols, std::move(entries), std::move(bias)));
    }
    return ReluNetwork(j.at("input_dim").get<int>(), std::move(layers));
  });
}

std::string schema_kind(const Json& j) {
  const std::string s = j.is_object() ? j.value("schema", std::string()) : std::string();
  if (s.rfind("femnet.", 0) != 0) throw Error(ErrorKind::InvalidInput, "document has no femnet schema tag");
  return s.substr(7);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path);
}

Json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(1) + "\n"); }

std::vector<double> parse_coefficients(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    const std::string value = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (value.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("trailing");
      if (comma != std::string::npos) {
        const int idx = std::stoi(line.substr(0, comma));
        if (idx != static_cast<int>(out.size()))
          throw Error(ErrorKind::InvalidInput, "coefficient index " + std::to_string(idx) + " out of order");
      }
      out.push_back(v);
    } catch (const std::logic_error&) {
      // A non-numeric first line is a header.
      if (lineno == 1 && out.empty()) continue;
      throw Error(ErrorKind::InvalidInput, "bad coefficient on line " + std::to_string(lineno));
    }
  }
  return out;
}

std::string format_coefficients(const std::vector<double>& c) {
  std::ostringstream os;
  os.precision(17);
  os << "index,value\n";
  for (std::size_t i = 0; i < c.size(); ++i) os << i << ',' << c[i] << '\n';
  return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunReport::add_input(const std::string& name, const std::string& path) {
  inputs[name] = {{"path", path}, {"fnv1a", fnv1a_hex(read_text(path))}};
}

Json RunReport::to_json() const {
  return {{"schema", "femnet.report"}, {"version", kReportSchema}, {"femnet_version", kVersion},
          {"command", command},        {"inputs", inputs},         {"config", config},
          {"results", results},        {"wall_time", wall_time ? Json(*wall_time) : Json()}};
}

}  // namespace femnet::io
