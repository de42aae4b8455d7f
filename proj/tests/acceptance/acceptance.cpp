// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "normsurf/branched.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/genus.hpp"
#include "normsurf/json_io.hpp"
#include "oracles.hpp"

#ifndef NORMSURF_CLI
#error "NORMSURF_CLI must be defined"
#endif

using namespace normsurf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool compatible(const SurfaceVector& a, const SurfaceVector& b) {
  try {
    haken_sum(a, b);
    return true;
  } catch (const IncompatibleSummands&) {
    return false;
  }
}

std::vector<SurfaceVector> pool_of(const Triangulation& tri, std::int64_t w) {
  std::vector<SurfaceVector> out;
  for (const auto& v : oracle::admissible_pool(tri, w)) out.push_back(oracle::to_surface(v));
  return out;
}

// ---------------------------------------------------------------- 1

Outcome fundamental_completeness() {
  Outcome o;
  std::ostringstream d;
  for (const char* name : {"one_tet.json", "two_tet.json", "two_tet_reducible.json", "three_tet.json"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto tri = fixtures::load(name);
    const auto fund = fixtures::fundamentals(tri);
    const auto pool = pool_of(tri, 20);
    int failures = 0;
    for (const auto& v : pool) {
      try {
        SurfaceVector s(tri.num_tets());
        for (const auto& t : decompose(v, fund)) s = s + fund.members[t.member].scaled(t.coefficient);
        if (!(s == v)) ++failures;
      } catch (const NotDecomposable&) {
        ++failures;
      }
    }
    const double secs = seconds_since(t0);
    if (failures != 0 || secs >= 60) o.pass = false;
    d << name << ": " << pool.size() << " vectors, " << failures << " failures, " << secs << "s; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 2

Outcome euler_additivity(std::mt19937_64& rng) {
  Outcome o;
  std::ostringstream d;
  for (const char* name : {"one_tet.json", "two_tet.json", "two_tet_reducible.json", "three_tet.json"}) {
    const auto tri = fixtures::load(name);
    const auto pool = pool_of(tri, 20);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    int pairs = 0, bad = 0, tries = 0;
    while (pairs < 200 && tries < 200000) {
      ++tries;
      const auto& a = pool[pick(rng)];
      const auto& b = pool[pick(rng)];
      if (!compatible(a, b)) continue;
      ++pairs;
      const auto s = haken_sum(a, b);
      if (euler_cellular(tri, s) != euler_cellular(tri, a) + euler_cellular(tri, b)) ++bad;
    }
    if (pairs < 200 || bad != 0) o.pass = false;
    d << name << ": " << pairs << " pairs, " << bad << " mismatches; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 3

Outcome euler_linear_vs_cellular(std::mt19937_64& rng) {
  Outcome o;
  std::ostringstream d;
  for (const char* name : {"one_tet.json", "two_tet.json", "two_tet_reducible.json", "three_tet.json"}) {
    const auto tri = fixtures::load(name);
    const auto fund = fixtures::fundamentals(tri);
    const auto f = euler_functional(tri);
    const auto pool = pool_of(tri, 20);
    int bad = 0;
    auto check = [&](const SurfaceVector& v) {
      const auto cell = euler_cellular(tri, v);
      if (f.evaluate(v) != cell || oracle::euler_by_counting(tri, oracle::to_vec(v)) != cell) ++bad;
    };
    for (const auto& m : fund.members) check(m);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> terms(1, 4);
    int randoms = 0;
    while (randoms < 500) {
      SurfaceVector v = pool[pick(rng)];
      for (int k = terms(rng); k > 1; --k) {
        const auto& w = pool[pick(rng)];
        if (compatible(v, w)) v = haken_sum(v, w);
      }
      check(v);
      ++randoms;
    }
    if (bad != 0) o.pass = false;
    d << name << ": " << fund.members.size() << " fundamentals + " << randoms << " random, " << bad
      << " mismatches; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 4

std::vector<SurfaceVector> normal_spheres(const Triangulation& tri, const FundamentalSet& fund) {
  std::vector<SurfaceVector> out;
  for (const auto& m : fund.members) {
    if (m.octagon_total() != 0) continue;
    const auto comps = classify_components(tri, reconstruct(tri, m));
    if (comps.size() == 1 && comps[0].kind == SurfaceKind::sphere) out.push_back(m);
  }
  return out;
}

Outcome zero_efficiency() {
  Outcome o;
  const auto eff = fixtures::load("two_tet.json");
  const auto eff_spheres = normal_spheres(eff, fixtures::fundamentals(eff));
  const bool eff_ok = eff_spheres.size() == 1 && eff_spheres[0] == vertex_link(eff);
  const auto red = fixtures::load("two_tet_reducible.json");
  const auto red_spheres = normal_spheres(red, fixtures::fundamentals(red));
  int extra = 0;
  for (const auto& s : red_spheres)
    if (!(s == vertex_link(red))) ++extra;
  o.pass = eff_ok && extra >= 1;
  o.detail = "two_tet.json: " + std::to_string(eff_spheres.size()) +
             " normal sphere(s), vertex link only: " + (eff_ok ? "yes" : "no") +
             "; two_tet_reducible.json: " + std::to_string(extra) + " extra sphere(s)";
  return o;
}

// ---------------------------------------------------------------- 5

Outcome balanced_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int count = 0, bad = 0, bound = 0, inconsistent = 0;
  for (int len = 0; len <= 12; len += 2)
    for (int mask = 0; mask < (1 << len); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != len / 2) continue;
      std::string s;
      for (int i = 0; i < len; ++i) s += (mask >> i & 1) ? '+' : '-';
      ++count;
      const auto k = balanced_reduce(BalancedSequence::parse(s));
      bool consistent = true;
      const int m = oracle::minimal_copies(s, &consistent);
      if (k != m) ++bad;
      if (!consistent) ++inconsistent;
      if (2 * k > len) ++bound;
    }
  const double secs = seconds_since(t0);
  o.pass = bad == 0 && bound == 0 && inconsistent == 0 && secs < 10;
  o.detail = std::to_string(count) + " sequences, " + std::to_string(bad) + " mismatches, " +
             std::to_string(bound) + " bound violations, " + std::to_string(inconsistent) +
             " inconsistent oracle runs, " + std::to_string(secs) + "s";
  return o;
}

// ---------------------------------------------------------------- 6

Outcome carried_cone_exactness() {
  Outcome o;
  std::ostringstream d;
  int carriers = 0, mismatches = 0, full_bad = 0;
  std::int64_t accepted = 0;
  for (const char* name : {"one_tet.json", "one_tet_klein.json", "two_tet.json", "two_tet_reducible.json"}) {
    const auto tri = fixtures::load(name);
    const auto fund = fixtures::fundamentals(tri);
    const auto rows = oracle::matching_rows(tri);
    std::set<std::vector<int>> supports;
    for (const auto& a : fund.members)
      for (const auto& b : fund.members)
        if (compatible(a, b)) supports.insert(support_of(a + b));
    for (const auto& support : supports) {
      const auto car = build_carrier(tri, support);
      const auto& cols = car.support();
      const int n = static_cast<int>(cols.size());
      ++carriers;
      std::vector<oracle::Vec> sub;
      for (const auto& r : rows) {
        oracle::Vec s;
        for (int c : cols) s.push_back(r[c]);
        sub.push_back(std::move(s));
      }
      std::set<oracle::Vec> brute;
      for (const auto& p : oracle::lattice_points(sub, n, 15)) {
        std::int64_t oct = 0;
        for (int i = 0; i < n; ++i)
          if (cols[i] % 10 >= 7) oct += p[i];
        if (oct <= 1) brute.insert(p);
      }
      std::set<oracle::Vec> accept;
      oracle::Vec x(n, 0);
      SurfaceVector v(tri.num_tets());
      std::function<void(int, std::int64_t)> scan = [&](int i, std::int64_t left) {
        if (i == n) {
          if (left == 15) return;
          for (int k = 0; k < n; ++k) v[cols[k]] = x[k];
          if (!carries(car, v)) return;
          accept.insert(x);
          bool positive = true;
          for (int k = 0; k < n; ++k) positive = positive && x[k] > 0;
          bool sectors = true;
          for (auto s : car.sector_values(v)) sectors = sectors && s > 0;
          if (fully_carries(car, v) != positive || sectors != positive) ++full_bad;
          return;
        }
        for (std::int64_t a = 0; a <= left; ++a) {
          x[i] = a;
          scan(i + 1, left - a);
        }
        x[i] = 0;
      };
      scan(0, 15);
      accepted += static_cast<std::int64_t>(accept.size());
      if (accept != brute) ++mismatches;
    }
  }
  o.pass = mismatches == 0 && full_bad == 0;
  d << carriers << " carriers, " << accepted << " carried vectors, " << mismatches
    << " set mismatches, " << full_bad << " fully-carried disagreements";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 7

Outcome disk_search_soundness(std::mt19937_64& rng) {
  Outcome o;
  struct Source {
    Triangulation tri;
    std::vector<std::vector<int>> supports;
  };
  std::vector<Source> sources;
  for (const char* name : {"one_tet.json", "one_tet_klein.json", "two_tet.json", "two_tet_reducible.json"}) {
    Source s{fixtures::load(name), {}};
    const auto fund = fixtures::fundamentals(s.tri);
    const auto& ms = fund.members;
    for (std::size_t a = 0; a < ms.size(); ++a)
      for (std::size_t b = a; b < ms.size(); ++b)
        if (compatible(ms[a], ms[b])) {
          const auto cols = support_of(ms[a] + ms[b]);
          if (!build_carrier(s.tri, cols).circuits().empty()) s.supports.push_back(cols);
        }
    sources.push_back(std::move(s));
  }
  int queries = 0, found = 0, not_found = 0, inconclusive = 0, unverified = 0, flips = 0;
  while (queries < 100) {
    auto& src = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
    if (src.supports.empty()) continue;
    const auto& cols =
        src.supports[std::uniform_int_distribution<std::size_t>(0, src.supports.size() - 1)(rng)];
    const auto car = build_carrier(src.tri, cols);
    const int comp =
        std::uniform_int_distribution<int>(0, static_cast<int>(car.circuits().size()) - 1)(rng);
    const auto dir = std::uniform_int_distribution<int>(0, 1)(rng) ? DiskDirection::outward
                                                                    : DiskDirection::inward;
    const std::int64_t bound = std::uniform_int_distribution<std::int64_t>(0, 12)(rng);
    ++queries;
    std::vector<DiskSearchResult> runs;
    for (int w : {1, 2, 8}) runs.push_back(disk_search(car, comp, dir, bound, w));
    for (const auto& r : runs)
      if (r.status != runs[0].status || r.disk != runs[0].disk) ++flips;
    const auto& r = runs[0];
    if (r.status == DiskStatus::found) {
      ++found;
      std::string why;
      bool ok = r.disk && verify_disk(car, comp, dir, *r.disk, bound, &why);
      if (ok) {
        // Test-side deficit recount from the circuit's arcs.
        std::map<int, std::int64_t> want;
        for (int a : car.circuits()[comp].arcs) {
          const auto& arc = car.branch_arcs()[a];
          const bool source = (arc.toward == 0) == (dir == DiskDirection::inward);
          want[arc.row] += source ? 1 : -1;
        }
        const auto& sys = car.system();
        for (int row = 0; row < static_cast<int>(sys.rows.size()); ++row)
          if (sys.evaluate(row, *r.disk) != (want.count(row) ? want[row] : 0)) ok = false;
        ok = ok && weight(*r.disk) <= bound;
      }
      if (!ok) ++unverified;
    } else if (r.status == DiskStatus::not_found) {
      ++not_found;
    } else {
      ++inconclusive;
    }
  }
  o.pass = unverified == 0 && flips == 0 && found > 0;
  o.detail = std::to_string(queries) + " queries: " + std::to_string(found) + " found, " +
             std::to_string(not_found) + " not found, " + std::to_string(inconclusive) +
             " inconclusive; " + std::to_string(unverified) + " unverified, " +
             std::to_string(flips) + " worker flips";
  return o;
}

// ---------------------------------------------------------------- 8

bool oracle_admissible(const std::vector<oracle::Vec>& rows, const oracle::Vec& v) {
  for (const auto& r : rows) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += r[i] * v[i];
    if (s != 0) return false;
  }
  std::int64_t oct = 0;
  for (std::size_t t = 0; t < v.size() / 10; ++t) {
    int types = 0;
    for (int c = 4; c < 10; ++c) types += v[10 * t + c] != 0;
    if (types > 1) return false;
    for (int c = 7; c < 10; ++c) oct += v[10 * t + c];
  }
  return oct <= 1;
}

Outcome candidate_stream_oracle() {
  Outcome o;
  std::ostringstream d;
  const std::int64_t g = 2, cb = 3;
  for (const char* name : {"one_tet.json", "three_tet.json"}) {
    const auto tri = fixtures::load(name);
    const auto fund = fixtures::fundamentals(tri);
    const int n = static_cast<int>(fund.members.size());
    const auto rows = oracle::matching_rows(tri);
    const auto [tori, rest] = split_fundamentals(fund);
    std::vector<std::int64_t> chi, bound;
    for (int i = 0; i < n; ++i) {
      chi.push_back(oracle::euler_by_counting(tri, oracle::to_vec(fund.members[i])));
      const bool torus = std::find(tori.begin(), tori.end(), i) != tori.end();
      bound.push_back(!torus && chi[i] < 0 ? std::max<std::int64_t>(0, (2 * g - 2) / -chi[i]) : cb);
    }
    std::vector<std::vector<std::int64_t>> expected;
    std::vector<std::int64_t> c(n, 0);
    std::function<void(int)> loop = [&](int i) {
      if (i == n) {
        std::int64_t e = 0;
        bool nonzero = false;
        oracle::Vec v(10 * tri.num_tets(), 0);
        for (int k = 0; k < n; ++k) {
          e += c[k] * chi[k];
          nonzero = nonzero || c[k] != 0;
          for (int j = 0; j < static_cast<int>(v.size()); ++j) v[j] += c[k] * fund.members[k][j];
        }
        if (nonzero && e % 2 == 0 && e <= 2 && e >= 2 - 2 * g && oracle_admissible(rows, v))
          expected.push_back(c);
        return;
      }
      for (c[i] = 0; c[i] <= bound[i]; ++c[i]) loop(i + 1);
      c[i] = 0;
    };
    loop(0);
    std::vector<std::vector<std::int64_t>> got;
    auto stream = candidate_stream(tri, fund, g, cb);
    while (auto dcmp = stream.next()) {
      std::vector<std::int64_t> t(n, 0);
      for (const auto& term : dcmp->base_terms) t[term.member] = term.coefficient;
      for (const auto& term : dcmp->torus_terms) t[term.member] = term.coefficient;
      got.push_back(t);
    }
    if (got != expected || n > 4) o.pass = false;
    d << name << ": " << n << " fundamentals, stream " << got.size() << " vs brute force "
      << expected.size() << (got == expected ? " (identical order)" : " (DIFFERENT)") << "; ";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- 9

Outcome twist_invariants(std::mt19937_64& rng) {
  Outcome o;
  int cases = 0, bad = 0, twisted = 0;
  struct Source {
    Triangulation tri;
    FundamentalSet fund;
  };
  std::vector<Source> sources;
  for (const char* name : {"two_tet.json", "three_tet.json", "two_tet_reducible.json"}) {
    auto tri = fixtures::load(name);
    auto fund = fixtures::fundamentals(tri);
    sources.push_back({std::move(tri), std::move(fund)});
  }
  int attempts = 0;
  while (cases < 100 && attempts < 100000) {
    ++attempts;
    auto& src = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
    const auto [tori, rest] = split_fundamentals(src.fund);
    if (tori.empty()) continue;
    const int t = tori[std::uniform_int_distribution<std::size_t>(0, tori.size() - 1)(rng)];
    const auto& T = src.fund.members[t];
    Decomposition dcmp;
    dcmp.base = SurfaceVector(src.tri.num_tets());
    for (int m : rest) {
      const auto c = std::uniform_int_distribution<std::int64_t>(0, 1)(rng);
      if (c == 0) continue;
      const auto& M = src.fund.members[m];
      if (!compatible(dcmp.base + T, M)) continue;
      dcmp.base = dcmp.base + M;
      dcmp.base_terms.push_back({1, m});
    }
    const auto chi = euler_functional(src.tri).evaluate(dcmp.base);
    if (chi > 2 || chi % 2 != 0) continue;
    const std::int64_t coeff = std::uniform_int_distribution<std::int64_t>(1, 40)(rng);
    dcmp.torus_terms.push_back({coeff, t});
    dcmp.euler = chi;
    dcmp.genus = (2 - chi) / 2;
    ++cases;
    const std::set<int> iso{t};
    const auto once = twist_normalize(src.tri, src.fund, dcmp, iso);
    const auto twice = twist_normalize(src.tri, src.fund, once, iso);
    const auto before = dcmp.resum(src.fund);
    const auto after = once.resum(src.fund);
    bool ok = euler_cellular(src.tri, before) == euler_cellular(src.tri, after);
    ok = ok && support_of(before) == support_of(after);
    ok = ok && (weight(before) - weight(after)) % weight(T) == 0;
    ok = ok && twice.torus_terms == once.torus_terms && twice.audit.size() == once.audit.size();
    const auto cap = twist_cap(src.tri, T, dcmp.base, dcmp.genus);
    const auto c1 = once.torus_terms[0].coefficient;
    ok = ok && c1 == std::min(coeff, cap);
    if (coeff > cap) {
      ++twisted;
      ok = ok && once.audit.size() == 1 && once.audit[0].twists == coeff - cap;
    } else {
      ok = ok && once.audit.empty();
    }
    if (!ok) ++bad;
  }
  o.pass = cases == 100 && bad == 0 && twisted > 0;
  o.detail = std::to_string(cases) + " decompositions, " + std::to_string(twisted) +
             " normalized, " + std::to_string(bad) + " violations";
  return o;
}

// ---------------------------------------------------------------- 10

std::pair<int, std::string> run_cli(const std::string& args) {
  const std::string cmd = std::string(NORMSURF_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void write_vector(const fs::path& p, const SurfaceVector& v) {
  std::ofstream out(p);
  out << io::dump(io::vector_json(v)) << "\n";
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("normsurf_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto two = fixtures::path("two_tet.json");
  const auto four = fixtures::path("four_tet_tori.json");
  const auto three = fixtures::path("three_tet.json");
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto ft = fixtures::load("four_tet_tori.json");
  const auto ffund = fixtures::fundamentals(ft);
  const auto t0 = fund.members[fund.tori[0]];
  const auto t1 = fund.members[fund.tori[1]];
  const auto vl = vertex_link(tri);
  write_vector(dir / "t0.json", t0);
  write_vector(dir / "t1.json", t1);
  write_vector(dir / "vl.json", vl);
  write_vector(dir / "sum.json", haken_sum(vl, t0));
  std::string regular_args;
  for (std::size_t i = 0; i < ffund.tori.size(); ++i) {
    const auto p = dir / ("ft" + std::to_string(i) + ".json");
    write_vector(p, ffund.members[ffund.tori[i]]);
    regular_args += " " + p.string();
  }
  const std::string d = dir.string() + "/";
  const std::vector<std::string> commands = {
      "validate " + two,
      "skeleton " + two,
      "vertex-link " + two,
      "match-eqs " + two,
      "enum " + two + " --mode fundamental",
      "classify " + two + " " + d + "t0.json",
      "sum " + two + " " + d + "vl.json " + d + "t0.json",
      "decompose " + two + " " + d + "sum.json",
      "carrier " + two + " --support " + d + "sum.json",
      "flare-check " + two + " --support " + d + "sum.json --component 0 --max-weight 8",
      "intersect " + two + " " + d + "t0.json " + d + "t1.json",
      "balanced-reduce --signs ++-+--",
      "regular-check " + four + regular_args,
      "genus-scan " + three + " --genus 2 --coeff-bound 2 --emit jsonl",
  };
  int differing = 0, failed = 0;
  std::string first_bad;
  for (const auto& c : commands) {
    std::vector<std::pair<int, std::string>> runs;
    for (int w : {1, 8})
      for (int rep = 0; rep < 2; ++rep) runs.push_back(run_cli(c + " --workers " + std::to_string(w)));
    bool same = true;
    for (const auto& r : runs) same = same && r == runs[0];
    if (!same) {
      ++differing;
      if (first_bad.empty()) first_bad = c;
    }
    if (runs[0].first != 0) {
      ++failed;
      if (first_bad.empty()) first_bad = c + " -> " + runs[0].second;
    }
  }
  fs::remove_all(dir);
  o.pass = differing == 0 && failed == 0;
  o.detail = std::to_string(commands.size()) + " commands x {workers 1, 8} x 2 runs, " +
             std::to_string(differing) + " differing, " + std::to_string(failed) + " failing" +
             (first_bad.empty() ? "" : " (first: " + first_bad + ")");
  return o;
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240611);
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"fundamental completeness", fundamental_completeness},
      {"euler additivity", [&] { return euler_additivity(rng); }},
      {"linear vs cellular euler", [&] { return euler_linear_vs_cellular(rng); }},
      {"0-efficiency sphere scan", zero_efficiency},
      {"balanced_reduce oracle", balanced_oracle},
      {"carried cone exactness", carried_cone_exactness},
      {"disk_search soundness", [&] { return disk_search_soundness(rng); }},
      {"candidate_stream oracle", candidate_stream_oracle},
      {"twist_normalize invariants", [&] { return twist_invariants(rng); }},
      {"cli determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
