#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "normsurf/branched.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/genus.hpp"
#include "normsurf/hilbert.hpp"
#include "normsurf/json_io.hpp"
#include "normsurf/surface_topology.hpp"

namespace fs = std::filesystem;
using namespace normsurf;
using io::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string cache_dir;
  std::string out_path;
  std::string emit = "json";
  int workers = 1;
  std::int64_t max_weight = 10;
  std::size_t max_rays = 500000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

class Emitter {
 public:
  explicit Emitter(const Config& cfg) : cfg_(cfg) {}

  void single(const json& j) { lines_.push_back(io::dump(j)); }

  /// Streams as one line per item for jsonl, or one array for json.
  void stream(const std::vector<json>& items) {
    if (cfg_.emit == "jsonl") {
      for (const auto& j : items) lines_.push_back(io::dump(j));
    } else {
      json arr = json::array();
      for (const auto& j : items) arr.push_back(j);
      lines_.push_back(io::dump(arr));
    }
  }

  void flush() const {
    std::string text;
    for (const auto& l : lines_) text += l + "\n";
    if (cfg_.out_path.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream out(cfg_.out_path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + cfg_.out_path);
    out << text;
  }

 private:
  const Config& cfg_;
  std::vector<std::string> lines_;
};

EnumerationLimits limits_of(const Config& cfg) {
  EnumerationLimits lim;
  lim.max_rays = cfg.max_rays;
  lim.workers = cfg.workers;
  return lim;
}

/// Fundamental or vertex solutions, through the cache when one is configured.
std::vector<SurfaceVector> cached_solutions(const Config& cfg, const Triangulation& tri,
                                            const std::string& mode) {
  const auto lim = limits_of(cfg);
  auto compute = [&] {
    const auto sys = matching_system(tri);
    if (mode == "vertex") return enumerate_vertex_solutions(tri, sys, lim);
    return enumerate_fundamental(tri, sys, lim).members;
  };
  if (cfg.cache_dir.empty()) return compute();
  const json key{{"triangulation", json::parse(serialize_triangulation(tri))},
                 {"mode", mode},
                 {"max_rays", lim.max_rays},
                 {"max_basis_weight", lim.max_basis_weight}};
  const fs::path file = fs::path(cfg.cache_dir) / (sha256_hex(io::dump(key)) + ".json");
  if (fs::exists(file)) {
    try {
      return io::parse_vectors(read_file(file.string()));
    } catch (const Error&) {
      // A corrupt entry is recomputed and overwritten.
    }
  }
  auto result = compute();
  std::error_code ec;
  fs::create_directories(cfg.cache_dir, ec);
  json arr = json::array();
  for (const auto& v : result) arr.push_back(io::vector_json(v));
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (out) out << io::dump(arr);
  }
  fs::rename(tmp, file, ec);
  return result;
}

FundamentalSet fundamental_of(const Config& cfg, const Triangulation& tri) {
  FundamentalSet fund;
  fund.members = cached_solutions(cfg, tri, "fundamental");
  classify_fundamental(tri, fund);
  return fund;
}

Triangulation load_tri(const std::string& path) { return parse_triangulation(read_file(path)); }

SurfaceVector load_vector(const std::string& path, const Triangulation& tri) {
  auto v = io::parse_vector(read_file(path));
  if (v.num_tets() != tri.num_tets())
    throw DimensionMismatch(path + " has " + std::to_string(v.num_tets()) +
                            " rows, triangulation has " + std::to_string(tri.num_tets()) +
                            " tetrahedra");
  return v;
}

SurfaceVector load_admissible(const std::string& path, const Triangulation& tri) {
  auto v = load_vector(path, tri);
  const auto rep = check_admissible(v, matching_system(tri));
  if (!rep.admissible) throw NotAdmissible(path + ": " + rep.describe());
  return v;
}

std::vector<int> parse_support(const std::string& arg, const Triangulation& tri) {
  if (fs::exists(arg)) return support_of(load_vector(arg, tri));
  std::vector<int> cols;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      cols.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--support expects a vector file or comma-separated columns, got '" +
                       arg + "'");
    }
  }
  return cols;
}

json error_json(const std::string& command, const Error& e) {
  json err{{"command", command}, {"code", e.code()}, {"message", e.what()}};
  if (const auto* inc = dynamic_cast<const IncompatibleSummands*>(&e)) {
    err["tet"] = inc->tet();
    err["constraint"] = inc->constraint();
  }
  return json{{"error", err}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal and almost normal surface toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  if (const char* env = std::getenv("NORMSURF_CACHE")) cfg.cache_dir = env;
  app.add_option("--cache", cfg.cache_dir, "Enumeration cache directory");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-weight", cfg.max_weight, "Search weight bound")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-rays", cfg.max_rays, "Cap on intermediate rays")
      ->check(CLI::PositiveNumber);
  app.add_option("--emit", cfg.emit, "Output format")->check(CLI::IsMember({"json", "jsonl"}));
  app.add_option("--out", cfg.out_path, "Output file");

  std::string tri_path;
  std::vector<std::string> vec_paths;
  std::string mode = "fundamental";
  std::string support;
  std::string direction = "outward";
  std::string signs;
  int component = 0;
  std::int64_t genus = 1;
  std::int64_t coeff_bound = 3;
  bool all_links = false;
  std::vector<int> isolated;
  std::optional<std::int64_t> arc_budget;

  auto tri_cmd = [&](const std::string& name, const std::string& desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("triangulation", tri_path, "Triangulation JSON")->required();
    return sub;
  };
  tri_cmd("validate", "Check a triangulation");
  tri_cmd("skeleton", "Vertex, edge and face orbits");
  tri_cmd("vertex-link", "Vertex-linking surface")->add_flag("--all", all_links, "One link per vertex");
  tri_cmd("match-eqs", "Matching equations");
  tri_cmd("enum", "Enumerate vertex or fundamental solutions")
      ->add_option("--mode", mode)
      ->check(CLI::IsMember({"vertex", "fundamental"}));
  tri_cmd("classify", "Components of a surface")
      ->add_option("vector", vec_paths, "Surface vector JSON")
      ->required()
      ->expected(1);
  tri_cmd("sum", "Haken sum of two surfaces")
      ->add_option("vectors", vec_paths, "Surface vectors")
      ->required()
      ->expected(2);
  tri_cmd("decompose", "Decompose over the fundamental set")
      ->add_option("vector", vec_paths)
      ->required()
      ->expected(1);
  tri_cmd("carrier", "Branched surface on a support")
      ->add_option("--support", support, "Vector file or comma-separated columns")
      ->required();
  {
    auto* sub = tri_cmd("flare-check", "Bounded disk search at a vertical boundary component");
    sub->add_option("--support", support)->required();
    sub->add_option("--component", component)->check(CLI::NonNegativeNumber);
    sub->add_option("--direction", direction)->check(CLI::IsMember({"inward", "outward"}));
  }
  tri_cmd("intersect", "Intersection complexity of 2 or 3 surfaces")
      ->add_option("vectors", vec_paths)
      ->required()
      ->expected(2, 3);
  app.add_subcommand("balanced-reduce", "Rounds of balanced-arc reduction")
      ->add_option("--signs", signs, "Cyclic sequence over + and -")
      ->required();
  tri_cmd("regular-check", "Regular-set check of torus members")
      ->add_option("vectors", vec_paths)
      ->required()
      ->expected(1, 1 << 20);
  {
    auto* sub = tri_cmd("genus-scan", "Stream candidate decompositions");
    sub->add_option("--genus", genus)->check(CLI::NonNegativeNumber);
    sub->add_option("--coeff-bound", coeff_bound)->check(CLI::NonNegativeNumber);
    sub->add_option("--isolate", isolated, "Torus members to twist-normalize");
    sub->add_option("--arc-budget", arc_budget, "Associated-arc length bound to record")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  const std::string& cmd = cfg.command;
  Emitter out(cfg);

  try {
    if (cmd == "balanced-reduce") {
      const auto seq = BalancedSequence::parse(signs);
      out.single(json{{"signs", seq.str()}, {"k", balanced_reduce(seq)}});
      out.flush();
      return 0;
    }
    const Triangulation tri = load_tri(tri_path);
    if (cmd == "validate") {
      const Skeleton sk = compute_skeleton(tri);
      out.single(json{{"valid", true},
                      {"tets", tri.num_tets()},
                      {"vertices", sk.num_vertices()},
                      {"edges", sk.num_edges()},
                      {"faces", sk.num_faces()},
                      {"orientable", is_orientable(tri)},
                      {"one_vertex", sk.num_vertices() == 1},
                      {"euler_characteristic", sk.euler_characteristic()}});
    } else if (cmd == "skeleton") {
      out.single(io::skeleton_json(compute_skeleton(tri)));
    } else if (cmd == "vertex-link") {
      if (all_links) {
        std::vector<json> items;
        for (const auto& v : vertex_links(tri)) items.push_back(io::vector_json(v));
        out.stream(items);
      } else {
        out.single(io::vector_json(vertex_link(tri)));
      }
    } else if (cmd == "match-eqs") {
      out.single(io::matching_json(matching_system(tri)));
    } else if (cmd == "enum") {
      if (mode == "fundamental") {
        const auto fund = fundamental_of(cfg, tri);
        if (cfg.emit == "jsonl") {
          std::vector<json> items;
          for (const auto& m : fund.members) items.push_back(io::vector_json(m));
          out.stream(items);
        } else {
          out.single(io::fundamental_json(fund));
        }
      } else {
        std::vector<json> items;
        for (const auto& v : cached_solutions(cfg, tri, "vertex")) items.push_back(io::vector_json(v));
        out.stream(items);
      }
    } else if (cmd == "classify") {
      const auto v = load_admissible(vec_paths[0], tri);
      const auto s = reconstruct(tri, v);
      json comps = json::array();
      for (const auto& c : classify_components(tri, s)) comps.push_back(io::component_json(c));
      out.single(json{{"euler", euler_functional(tri).evaluate(v)},
                      {"weight", weight(v)},
                      {"components", std::move(comps)}});
    } else if (cmd == "sum") {
      const auto a = load_admissible(vec_paths[0], tri);
      const auto b = load_admissible(vec_paths[1], tri);
      const auto s = haken_sum(a, b);
      const auto f = euler_functional(tri);
      out.single(json{{"sum", io::vector_json(s)},
                      {"euler", f.evaluate(s)},
                      {"weight", weight(s)}});
    } else if (cmd == "decompose") {
      const auto v = load_admissible(vec_paths[0], tri);
      const auto fund = fundamental_of(cfg, tri);
      const auto terms = decompose(v, fund);
      json members = json::array();
      for (const auto& t : terms) members.push_back(io::vector_json(fund.members[t.member]));
      out.single(json{{"terms", io::decomposition_terms_json(terms)}, {"members", std::move(members)}});
    } else if (cmd == "carrier") {
      out.single(io::carrier_json(build_carrier(tri, parse_support(support, tri))));
    } else if (cmd == "flare-check") {
      const auto car = build_carrier(tri, parse_support(support, tri));
      const auto dir = direction == "inward" ? DiskDirection::inward : DiskDirection::outward;
      const auto r = disk_search(car, component, dir, cfg.max_weight, cfg.workers);
      json j = io::disk_result_json(r);
      if (r.disk) j["verified"] = verify_disk(car, component, dir, *r.disk, cfg.max_weight);
      out.single(j);
    } else if (cmd == "intersect") {
      std::vector<SurfaceVector> vs;
      for (const auto& p : vec_paths) vs.push_back(load_admissible(p, tri));
      out.single(io::intersection_json(intersection_complexity(tri, vs)));
    } else if (cmd == "regular-check") {
      std::vector<SurfaceVector> vs;
      for (const auto& p : vec_paths) vs.push_back(load_admissible(p, tri));
      out.single(io::regular_json(regular_set_check(tri, vs)));
    } else if (cmd == "genus-scan") {
      const auto fund = fundamental_of(cfg, tri);
      const std::set<int> iso(isolated.begin(), isolated.end());
      for (int m : iso)
        if (m < 0 || m >= static_cast<int>(fund.members.size()))
          throw UsageError("--isolate member " + std::to_string(m) + " out of range");
      auto stream = candidate_stream(tri, fund, genus, coeff_bound);
      std::vector<json> items;
      while (auto d = stream.next()) {
        if (!iso.empty()) *d = twist_normalize(tri, fund, *d, iso);
        d->arc_budget = arc_budget;
        items.push_back(io::decomposition_json(*d));
      }
      if (cfg.emit == "jsonl") {
        out.stream(items);
      } else {
        json arr = json::array();
        for (auto& j : items) arr.push_back(std::move(j));
        out.single(json{{"genus_bound", genus}, {"coeff_bound", coeff_bound}, {"candidates", arr}});
      }
    }
    out.flush();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "normsurf " << cmd << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    Emitter err(cfg);
    err.single(error_json(cmd, e));
    try {
      err.flush();
    } catch (const UsageError& u) {
      std::cerr << "normsurf " << cmd << ": " << u.what() << "\n";
      return 2;
    }
    return 1;
  }
}
