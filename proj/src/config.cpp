#include "lightcone/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lightcone/errors.hpp"

namespace lightcone {

using json = nlohmann::json;

namespace {

struct Collector {
  std::vector<std::string>& errors;
  void add(const std::string& ptr, const std::string& msg) { errors.push_back(ptr + ": " + msg); }
};

bool expect_object(const json& j, const std::string& ptr, Collector& c) {
  if (j.is_object()) return true;
  c.add(ptr, "expected an object");
  return false;
}

std::optional<double> get_number(const json& j, const char* key, const std::string& ptr, Collector& c,
                                 std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return fallback;
    c.add(ptr + "/" + key, "missing required number");
    return std::nullopt;
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    c.add(ptr + "/" + key, "expected a number");
    return std::nullopt;
  }
  return v.get<double>();
}

std::optional<std::vector<double>> get_vector(const json& v, const std::string& ptr, Collector& c) {
  if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(max_dim)) {
    std::ostringstream os;
    os << "expected an array of 1 to " << max_dim << " numbers";
    c.add(ptr, os.str());
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      c.add(ptr + "/" + std::to_string(i), "expected a number");
      return std::nullopt;
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::optional<geom::Vec> get_vec(const json& j, const char* key, const std::string& ptr, Collector& c) {
  if (!j.contains(key)) {
    c.add(ptr + "/" + key, "missing required coordinate array");
    return std::nullopt;
  }
  auto v = get_vector(j.at(key), ptr + "/" + key, c);
  if (!v) return std::nullopt;
  return geom::make_vec(*v);
}

std::optional<geom::Primitive> parse_primitive(const json& j, const std::string& ptr, Collector& c) {
  if (!j.is_object() || j.size() != 1) {
    c.add(ptr, "expected a single-key tagged object (ball, halfspace, or box)");
    return std::nullopt;
  }
  const std::string tag = j.begin().key();
  const json& body = j.begin().value();
  const std::string bptr = ptr + "/" + tag;
  if (tag == "ball") {
    if (!expect_object(body, bptr, c)) return std::nullopt;
    auto center = get_vec(body, "center", bptr, c);
    auto radius = get_number(body, "radius", bptr, c);
    if (!center || !radius) return std::nullopt;
    if (!(*radius > 0.0)) {
      c.add(bptr + "/radius", "must be positive");
      return std::nullopt;
    }
    return geom::Primitive{geom::Ball{*center, *radius}};
  }
  if (tag == "halfspace") {
    if (!expect_object(body, bptr, c)) return std::nullopt;
    auto normal = get_vec(body, "normal", bptr, c);
    auto offset = get_number(body, "offset", bptr, c);
    if (!normal || !offset) return std::nullopt;
    if (!(geom::norm(*normal) > 0.0)) {
      c.add(bptr + "/normal", "must be nonzero");
      return std::nullopt;
    }
    std::vector<double> n(normal->v.begin(), normal->v.begin() + normal->dim);
    return geom::Primitive{geom::make_halfspace(n, *offset)};
  }
  if (tag == "box") {
    if (!expect_object(body, bptr, c)) return std::nullopt;
    auto lo = get_vec(body, "lo", bptr, c);
    auto hi = get_vec(body, "hi", bptr, c);
    if (!lo || !hi) return std::nullopt;
    if (lo->dim != hi->dim) {
      c.add(bptr, "lo and hi must have the same dimension");
      return std::nullopt;
    }
    for (int a = 0; a < lo->dim; ++a) {
      if (!((*lo)[a] <= (*hi)[a])) {
        c.add(bptr, "lo must be componentwise <= hi");
        return std::nullopt;
      }
    }
    return geom::Primitive{geom::AxisBox{*lo, *hi}};
  }
  c.add(ptr, "unknown region tag '" + tag + "', expected ball, halfspace, box, intersection, or union");
  return std::nullopt;
}

std::optional<geom::ConvexRegion> parse_convex(const json& j, const std::string& ptr, Collector& c) {
  if (j.is_object() && j.size() == 1 && j.begin().key() == "intersection") {
    const json& arr = j.begin().value();
    const std::string aptr = ptr + "/intersection";
    if (!arr.is_array() || arr.empty()) {
      c.add(aptr, "expected a nonempty array of primitives");
      return std::nullopt;
    }
    geom::ConvexRegion region;
    bool ok = true;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto p = parse_primitive(arr[i], aptr + "/" + std::to_string(i), c);
      if (p)
        region.parts.push_back(*p);
      else
        ok = false;
    }
    if (!ok) return std::nullopt;
    return region;
  }
  auto p = parse_primitive(j, ptr, c);
  if (!p) return std::nullopt;
  return geom::ConvexRegion{{*p}};
}

std::optional<geom::Region> parse_region(const json& j, const std::string& ptr, Collector& c) {
  if (j.is_object() && j.size() == 1 && j.begin().key() == "union") {
    const json& arr = j.begin().value();
    const std::string aptr = ptr + "/union";
    if (!arr.is_array() || arr.empty()) {
      c.add(aptr, "expected a nonempty array of convex regions");
      return std::nullopt;
    }
    geom::Region region;
    bool ok = true;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto cv = parse_convex(arr[i], aptr + "/" + std::to_string(i), c);
      if (cv)
        region.components.push_back(*cv);
      else
        ok = false;
    }
    if (!ok) return std::nullopt;
    return region;
  }
  auto cv = parse_convex(j, ptr, c);
  if (!cv) return std::nullopt;
  return geom::Region{{*cv}};
}

std::optional<PotentialSpec> parse_potential(const json& j, const std::string& ptr, Collector& c) {
  if (!j.is_object() || j.size() != 1) {
    c.add(ptr, "expected a single-key tagged object "
               "(zero, static_bump, moving_bump, oscillating_bump, or sum)");
    return std::nullopt;
  }
  const std::string tag = j.begin().key();
  const json& body = j.begin().value();
  const std::string bptr = ptr + "/" + tag;
  if (tag == "zero") return PotentialSpec{ZeroPotential{}};
  if (tag == "static_bump" || tag == "moving_bump" || tag == "oscillating_bump") {
    if (!expect_object(body, bptr, c)) return std::nullopt;
    auto amplitude = get_number(body, "amplitude", bptr, c);
    auto center = get_vec(body, "center", bptr, c);
    auto width = get_number(body, "width", bptr, c);
    if (!amplitude || !center || !width) return std::nullopt;
    if (!(*width > 0.0)) {
      c.add(bptr + "/width", "must be positive");
      return std::nullopt;
    }
    if (tag == "static_bump") return PotentialSpec{StaticBump{*amplitude, *center, *width}};
    if (tag == "moving_bump") {
      auto velocity = get_vec(body, "velocity", bptr, c);
      if (!velocity) return std::nullopt;
      return PotentialSpec{MovingBump{*amplitude, *center, *width, *velocity}};
    }
    auto omega = get_number(body, "omega", bptr, c);
    if (!omega) return std::nullopt;
    return PotentialSpec{OscillatingBump{*amplitude, *center, *width, *omega}};
  }
  if (tag == "sum") {
    if (!body.is_array()) {
      c.add(bptr, "expected an array of potential terms");
      return std::nullopt;
    }
    SumPotential sum;
    bool ok = true;
    for (std::size_t i = 0; i < body.size(); ++i) {
      auto term = parse_potential(body[i], bptr + "/" + std::to_string(i), c);
      if (term)
        sum.terms.push_back(*term);
      else
        ok = false;
    }
    if (!ok) return std::nullopt;
    return PotentialSpec{sum};
  }
  c.add(ptr, "unknown potential tag '" + tag + "'");
  return std::nullopt;
}

std::optional<std::vector<double>> parse_times(const json& j, const std::string& ptr, Collector& c,
                                               double dt, bool positive_only) {
  if (!j.is_array()) {
    c.add(ptr, "expected an array of times");
    return std::nullopt;
  }
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      c.add(ptr + "/" + std::to_string(i), "expected a number");
      return std::nullopt;
    }
    v.push_back(j[i].get<double>());
  }
  if (v.empty()) {
    c.add(ptr, "must not be empty");
    return std::nullopt;
  }
  double prev = positive_only ? 0.0 : -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = v[i];
    const std::string tptr = ptr + "/" + std::to_string(i);
    if (!std::isfinite(t) || (positive_only ? !(t > 0.0) : t < 0.0)) {
      c.add(tptr, positive_only ? "must be strictly positive" : "must be finite and nonnegative");
      return std::nullopt;
    }
    if (t < prev) {
      c.add(tptr, "times must be nondecreasing");
      return std::nullopt;
    }
    prev = t;
    if (dt > 0.0) {
      double steps = t / dt;
      if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
        c.add(tptr, "must be an integer multiple of /time/dt");
        return std::nullopt;
      }
    }
  }
  return v;
}

bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }

void parse_grid_block(const json& root, ExperimentConfig& cfg, Collector& c) {
  if (!root.contains("grid")) {
    c.add("/grid", "missing required block for kind '" + std::string(kind_name(cfg.kind)) + "'");
    return;
  }
  const json& g = root.at("grid");
  if (!expect_object(g, "/grid", c)) return;
  int dim = 0;
  if (!g.contains("dim") || !g.at("dim").is_number_integer()) {
    c.add("/grid/dim", "missing or non-integer");
    return;
  }
  dim = g.at("dim").get<int>();
  if (dim < 1 || dim > max_dim) {
    std::ostringstream os;
    os << "must be between 1 and " << max_dim;
    c.add("/grid/dim", os.str());
    return;
  }
  auto broadcast = [&](const char* key, auto probe) -> std::optional<std::vector<double>> {
    if (!g.contains(key)) {
      c.add(std::string("/grid/") + key, "missing");
      return std::nullopt;
    }
    const json& v = g.at(key);
    if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(dim), v.get<double>());
    if (v.is_array()) {
      if (v.size() != static_cast<std::size_t>(dim)) {
        c.add(std::string("/grid/") + key, "array length must equal /grid/dim");
        return std::nullopt;
      }
      std::vector<double> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!probe(v[i])) {
          c.add(std::string("/grid/") + key + "/" + std::to_string(i), "wrong type");
          return std::nullopt;
        }
        out.push_back(v[i].get<double>());
      }
      return out;
    }
    c.add(std::string("/grid/") + key, "expected a number or an array");
    return std::nullopt;
  };
  auto points = broadcast("points", [](const json& v) { return v.is_number_integer(); });
  auto lengths = broadcast("lengths", [](const json& v) { return v.is_number(); });
  if (!points || !lengths) return;
  std::vector<int> n;
  bool ok = true;
  std::size_t total = 1;
  for (std::size_t i = 0; i < points->size(); ++i) {
    long long p = static_cast<long long>(std::llround((*points)[i]));
    if (p < 8 || !is_pow2(p)) {
      c.add("/grid/points/" + std::to_string(i), "must be a power of two, at least 8");
      ok = false;
      continue;
    }
    n.push_back(static_cast<int>(p));
    total *= static_cast<std::size_t>(p);
  }
  for (std::size_t i = 0; i < lengths->size(); ++i) {
    if (!((*lengths)[i] > 0.0) || !std::isfinite((*lengths)[i])) {
      c.add("/grid/lengths/" + std::to_string(i), "must be positive and finite");
      ok = false;
    }
  }
  if (!ok) return;
  if (total > cfg.max_points) {
    std::ostringstream os;
    os << "total point count " << total << " exceeds the declared memory budget /budget/max_points = "
       << cfg.max_points;
    c.add("/grid/points", os.str());
    return;
  }
  cfg.grid = make_grid(dim, n, *lengths);
}

}  // namespace

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::VerifyBound: return "verify-bound";
    case ExperimentKind::Sharpness: return "sharpness";
    case ExperimentKind::CheckPotential: return "check-potential";
    case ExperimentKind::SymbolAudit: return "symbol-audit";
    case ExperimentKind::TilingConstant: return "tiling-constant";
    case ExperimentKind::ConeProfile: return "cone-profile";
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::Simulate, ExperimentKind::VerifyBound, ExperimentKind::Sharpness,
        ExperimentKind::CheckPotential, ExperimentKind::SymbolAudit, ExperimentKind::TilingConstant,
        ExperimentKind::ConeProfile}) {
    if (name == kind_name(k)) return k;
  }
  return std::nullopt;
}

ParseOutcome parse_config_text(const std::string& text, const std::string& source_name) {
  ParseOutcome outcome;
  Collector c{outcome.errors};

  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    c.add("", "not valid JSON");
    return outcome;
  }
  if (!root.is_object()) {
    c.add("", "top level must be an object");
    return outcome;
  }

  ExperimentConfig cfg;
  cfg.source_path = source_name;
  cfg.raw_text = text;

  if (!root.contains("schema_version") || !root.at("schema_version").is_number_integer()) {
    c.add("/schema_version", "missing or non-integer");
  } else {
    cfg.schema_version = root.at("schema_version").get<int>();
    if (cfg.schema_version != 1)
      c.add("/schema_version", "unrecognized version " + std::to_string(cfg.schema_version) +
                                   ", supported versions: 1");
  }

  if (!root.contains("kind") || !root.at("kind").is_string()) {
    c.add("/kind", "missing or non-string");
    return outcome;  // without a kind the required blocks are unknown
  }
  {
    auto k = kind_from_name(root.at("kind").get<std::string>());
    if (!k) {
      c.add("/kind", "unknown kind '" + root.at("kind").get<std::string>() +
                         "', supported kinds: simulate, verify-bound, sharpness, check-potential, "
                         "symbol-audit, tiling-constant, cone-profile");
      return outcome;
    }
    cfg.kind = *k;
  }

  if (root.contains("budget")) {
    const json& b = root.at("budget");
    if (expect_object(b, "/budget", c)) {
      if (b.contains("max_points")) {
        if (!b.at("max_points").is_number_integer() || b.at("max_points").get<long long>() <= 0)
          c.add("/budget/max_points", "must be a positive integer");
        else
          cfg.max_points = static_cast<std::size_t>(b.at("max_points").get<long long>());
      }
    }
  }

  if (root.contains("physics")) {
    const json& p = root.at("physics");
    if (expect_object(p, "/physics", c)) {
      auto m = get_number(p, "mass", "/physics", c, 1.0);
      auto s = get_number(p, "speed", "/physics", c, 1.0);
      if (m) {
        if (*m > 0.0 && std::isfinite(*m))
          cfg.mass = *m;
        else
          c.add("/physics/mass", "must be positive and finite");
      }
      if (s) {
        if (*s > 0.0 && std::isfinite(*s))
          cfg.speed = *s;
        else
          c.add("/physics/speed", "must be positive and finite");
      }
    }
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer() || root.at("seed").get<long long>() < 0)
      c.add("/seed", "must be a nonnegative integer");
    else
      cfg.seed = root.at("seed").get<std::uint64_t>();
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    if (expect_object(o, "/output", c)) {
      if (o.contains("directory")) {
        if (!o.at("directory").is_string())
          c.add("/output/directory", "must be a string");
        else
          cfg.output.directory = o.at("directory").get<std::string>();
      }
      if (o.contains("snapshots")) {
        if (!o.at("snapshots").is_boolean())
          c.add("/output/snapshots", "must be a boolean");
        else
          cfg.output.snapshots = o.at("snapshots").get<bool>();
      }
    }
  }

  const bool needs_grid = cfg.kind != ExperimentKind::TilingConstant;
  if (needs_grid) parse_grid_block(root, cfg, c);

  // time block: dt everywhere it steps; times for the measuring kinds
  const bool needs_times = cfg.kind == ExperimentKind::VerifyBound ||
                           cfg.kind == ExperimentKind::ConeProfile;
  if (root.contains("time")) {
    const json& t = root.at("time");
    if (expect_object(t, "/time", c)) {
      auto dt = get_number(t, "dt", "/time", c, 1e-3);
      if (dt) {
        if (*dt > 0.0 && std::isfinite(*dt))
          cfg.dt = *dt;
        else
          c.add("/time/dt", "must be positive and finite");
      }
      if (t.contains("t_final")) {
        auto tf = get_number(t, "t_final", "/time", c);
        if (tf) {
          if (*tf >= 0.0 && std::isfinite(*tf))
            cfg.t_final = *tf;
          else
            c.add("/time/t_final", "must be nonnegative and finite");
        }
      }
      if (t.contains("snapshot_every")) {
        if (!t.at("snapshot_every").is_number_integer() || t.at("snapshot_every").get<int>() < 0)
          c.add("/time/snapshot_every", "must be a nonnegative integer");
        else
          cfg.snapshot_every = t.at("snapshot_every").get<int>();
      }
      if (t.contains("times")) {
        auto times = parse_times(t.at("times"), "/time/times", c, cfg.dt, false);
        if (times) cfg.times = *times;
      }
    }
  } else if (needs_times || cfg.kind == ExperimentKind::Simulate) {
    c.add("/time", "missing required block for kind '" + std::string(kind_name(cfg.kind)) + "'");
  }
  if (needs_times && cfg.times.empty() && root.contains("time"))
    c.add("/time/times", "missing required sample times for kind '" +
                             std::string(kind_name(cfg.kind)) + "'");
  if (cfg.kind == ExperimentKind::Simulate && root.contains("time") &&
      (!root.at("time").is_object() || !root.at("time").contains("t_final")))
    c.add("/time/t_final", "missing required final time for kind 'simulate'");

  if (root.contains("potential")) {
    auto p = parse_potential(root.at("potential"), "/potential", c);
    if (p) cfg.potential = *p;
  }

  auto handle_region = [&](const char* key, geom::Region& dst, bool& flag) {
    if (!root.contains("regions")) return;
    const json& r = root.at("regions");
    if (!r.is_object()) return;
    if (!r.contains(key)) return;
    auto reg = parse_region(r.at(key), std::string("/regions/") + key, c);
    if (!reg) return;
    dst = *reg;
    flag = true;
    if (cfg.grid) {
      int rd = geom::region_dim(dst);
      if (rd != cfg.grid->dim()) {
        std::ostringstream os;
        os << "region dimension " << rd << " does not match /grid/dim = " << cfg.grid->dim();
        c.add(std::string("/regions/") + key, os.str());
        flag = false;
      } else {
        try {
          geom::validate(dst, rd);
        } catch (const std::exception& e) {
          c.add(std::string("/regions/") + key, e.what());
          flag = false;
        }
      }
    }
  };
  if (root.contains("regions") && !root.at("regions").is_object())
    c.add("/regions", "expected an object with x and/or y");
  handle_region("x", cfg.region_x, cfg.has_region_x);
  handle_region("y", cfg.region_y, cfg.has_region_y);

  if (root.contains("state")) {
    const json& s = root.at("state");
    if (expect_object(s, "/state", c)) {
      if (s.contains("center")) {
        auto cvec = get_vec(s, "center", "/state", c);
        if (cvec) cfg.state.center = *cvec;
      }
      auto w = get_number(s, "width", "/state", c, cfg.state.width);
      if (w) {
        if (*w > 0.0 && std::isfinite(*w))
          cfg.state.width = *w;
        else
          c.add("/state/width", "must be positive and finite");
      }
    }
  }
  if (cfg.grid && cfg.state.center.dim != 0 && cfg.state.center.dim != cfg.grid->dim()) {
    std::ostringstream os;
    os << "center dimension " << cfg.state.center.dim << " does not match /grid/dim = "
       << cfg.grid->dim();
    c.add("/state/center", os.str());
  }

  if (root.contains("tolerance")) {
    auto tol = get_number(root, "tolerance", "", c, cfg.tolerance);
    if (tol) {
      if (*tol >= 0.0 && std::isfinite(*tol))
        cfg.tolerance = *tol;
      else
        c.add("/tolerance", "must be nonnegative and finite");
    }
  }

  switch (cfg.kind) {
    case ExperimentKind::VerifyBound: {
      if (root.contains("mode")) {
        if (!root.at("mode").is_string()) {
          c.add("/mode", "must be a string");
        } else {
          const std::string m = root.at("mode").get<std::string>();
          if (m == "state-norm")
            cfg.mode = BoundCheckMode::StateNorm;
          else if (m == "operator-norm")
            cfg.mode = BoundCheckMode::OperatorNorm;
          else if (m == "union")
            cfg.mode = BoundCheckMode::Union;
          else if (m == "conjugated")
            cfg.mode = BoundCheckMode::Conjugated;
          else
            c.add("/mode", "unknown mode '" + m +
                               "', supported modes: state-norm, operator-norm, union, conjugated");
        }
      }
      if (cfg.mode == BoundCheckMode::Union && root.contains("tiling")) {
        const json& tl = root.at("tiling");
        if (expect_object(tl, "/tiling", c)) {
          auto e = get_number(tl, "edge", "/tiling", c, cfg.union_edge);
          if (e) {
            if (*e > 0.0 && std::isfinite(*e))
              cfg.union_edge = *e;
            else
              c.add("/tiling/edge", "must be positive and finite");
          }
        }
      }
      if (!cfg.has_region_x) c.add("/regions/x", "missing required region for kind 'verify-bound'");
      if (!cfg.has_region_y) c.add("/regions/y", "missing required region for kind 'verify-bound'");
      break;
    }
    case ExperimentKind::ConeProfile: {
      if (root.contains("cone")) {
        const json& cn = root.at("cone");
        if (expect_object(cn, "/cone", c)) {
          auto w = get_number(cn, "shell_width", "/cone", c, cfg.shell_width);
          if (w) {
            if (*w > 0.0 && std::isfinite(*w))
              cfg.shell_width = *w;
            else
              c.add("/cone/shell_width", "must be positive and finite");
          }
        }
      }
      if (!cfg.has_region_x) c.add("/regions/x", "missing required region for kind 'cone-profile'");
      break;
    }
    case ExperimentKind::Sharpness: {
      if (!root.contains("sharpness")) {
        c.add("/sharpness", "missing required block for kind 'sharpness'");
        break;
      }
      const json& sh = root.at("sharpness");
      if (!expect_object(sh, "/sharpness", c)) break;
      auto delta = get_number(sh, "delta", "/sharpness", c, cfg.sharpness.delta);
      auto eps = get_number(sh, "eps", "/sharpness", c, cfg.sharpness.eps);
      auto width = get_number(sh, "seed_width", "/sharpness", c, cfg.sharpness.seed_width);
      if (delta) {
        if (*delta > 0.0 && *delta < 1.0)
          cfg.sharpness.delta = *delta;
        else
          c.add("/sharpness/delta", "must lie strictly between 0 and 1");
      }
      if (eps) {
        if (*eps > 0.0 && *eps < 1.0)
          cfg.sharpness.eps = *eps;
        else
          c.add("/sharpness/eps", "must lie strictly between 0 and 1");
      }
      if (width) {
        if (*width > 0.0 && std::isfinite(*width))
          cfg.sharpness.seed_width = *width;
        else
          c.add("/sharpness/seed_width", "must be positive and finite");
      }
      if (!sh.contains("times")) {
        c.add("/sharpness/times", "missing required time list");
      } else {
        auto times = parse_times(sh.at("times"), "/sharpness/times", c, 0.0, true);
        if (times) cfg.sharpness.times = *times;
      }
      if (sh.contains("comparison_speeds")) {
        auto speeds = get_vector(sh.at("comparison_speeds"), "/sharpness/comparison_speeds", c);
        if (speeds) {
          cfg.sharpness.comparison_speeds.clear();
          for (std::size_t i = 0; i < speeds->size(); ++i) {
            double v = (*speeds)[i];
            if (!(v > 0.0) || !(v < cfg.speed)) {
              c.add("/sharpness/comparison_speeds/" + std::to_string(i),
                    "must lie strictly between 0 and /physics/speed");
            } else {
              cfg.sharpness.comparison_speeds.push_back(v);
            }
          }
        }
      }
      cfg.sharpness.mass = cfg.mass;
      cfg.sharpness.speed = cfg.speed;
      break;
    }
    case ExperimentKind::CheckPotential: {
      if (root.contains("admissibility")) {
        const json& ad = root.at("admissibility");
        if (expect_object(ad, "/admissibility", c)) {
          if (ad.contains("samples")) {
            if (!ad.at("samples").is_number_integer() || ad.at("samples").get<int>() < 1)
              c.add("/admissibility/samples", "must be a positive integer");
            else
              cfg.admissibility_samples = ad.at("samples").get<int>();
          }
          if (ad.contains("hint")) {
            if (!ad.at("hint").is_string()) {
              c.add("/admissibility/hint", "must be a string");
            } else {
              const std::string h = ad.at("hint").get<std::string>();
              if (h == "form-bounded")
                cfg.admissibility_hint = Decomposition::FormBounded;
              else if (h == "bounded")
                cfg.admissibility_hint = Decomposition::Bounded;
              else
                c.add("/admissibility/hint",
                      "unknown hint '" + h + "', supported hints: form-bounded, bounded");
            }
          }
        }
      }
      if (!root.contains("time") || !root.at("time").is_object() ||
          !root.at("time").contains("t_final"))
        c.add("/time/t_final", "missing required final time for kind 'check-potential'");
      break;
    }
    case ExperimentKind::SymbolAudit: {
      if (root.contains("audit")) {
        const json& au = root.at("audit");
        if (expect_object(au, "/audit", c)) {
          if (au.contains("directions")) {
            if (!au.at("directions").is_number_integer() || au.at("directions").get<int>() < 1)
              c.add("/audit/directions", "must be a positive integer");
            else
              cfg.audit_directions = au.at("directions").get<int>();
          }
        }
      }
      break;
    }
    case ExperimentKind::TilingConstant: {
      if (!root.contains("tiling")) {
        c.add("/tiling", "missing required block for kind 'tiling-constant'");
        break;
      }
      const json& tl = root.at("tiling");
      if (!expect_object(tl, "/tiling", c)) break;
      auto dist = get_number(tl, "dist", "/tiling", c);
      auto edge = get_number(tl, "edge", "/tiling", c, cfg.tiling.edge);
      if (dist) {
        if (*dist > 0.0 && std::isfinite(*dist))
          cfg.tiling.dist = *dist;
        else
          c.add("/tiling/dist", "must be positive and finite");
      }
      if (edge) {
        if (*edge > 0.0 && std::isfinite(*edge))
          cfg.tiling.edge = *edge;
        else
          c.add("/tiling/edge", "must be positive and finite");
      }
      if (tl.contains("dim")) {
        if (!tl.at("dim").is_number_integer())
          c.add("/tiling/dim", "must be an integer");
        else
          cfg.tiling.dim = tl.at("dim").get<int>();
      }
      if (cfg.tiling.dim < 1 || cfg.tiling.dim > max_dim) {
        std::ostringstream os;
        os << "must be between 1 and " << max_dim;
        c.add("/tiling/dim", os.str());
      } else if (dist && edge &&
                 !(cfg.tiling.dist > cfg.tiling.edge * std::sqrt(static_cast<double>(cfg.tiling.dim)))) {
        c.add("/tiling", "requires dist > edge * sqrt(dim)");
      }
      break;
    }
    case ExperimentKind::Simulate:
      break;
  }

  // potential dimensions against the grid
  if (cfg.grid) {
    try {
      validate(cfg.potential, cfg.grid->dim());
    } catch (const std::exception& e) {
      c.add("/potential", e.what());
    }
  }

  if (outcome.errors.empty()) outcome.config = std::move(cfg);
  return outcome;
}

ParseOutcome parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseOutcome outcome;
    outcome.errors.push_back(": cannot read config file '" + path + "'");
    return outcome;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ExperimentConfig parse_config_or_throw(const std::string& path) {
  ParseOutcome outcome = parse_config(path);
  if (outcome.config) return std::move(*outcome.config);
  std::ostringstream os;
  os << "invalid config " << path << ":";
  for (const std::string& e : outcome.errors) os << "\n  " << e;
  throw ConfigError(os.str());
}

}  // namespace lightcone
