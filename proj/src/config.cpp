#include "glueopt/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glueopt/format.hpp"

namespace glueopt::io {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string version_string() {
#ifdef GLUEOPT_VERSION
  return GLUEOPT_VERSION;
#else
  return "dev";
#endif
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& v, const std::string& where) {
  std::istringstream is(v);
  std::vector<double> out;
  double d;
  while (is >> d) out.push_back(d);
  std::string rest;
  if (is.clear(), is >> rest)
    throw ConfigError(where + ": expected numbers, got '" + rest + "'");
  return out;
}

double parse_double(const std::string& v, const std::string& where) {
  auto d = parse_doubles(v, where);
  if (d.size() != 1) throw ConfigError(where + ": expected a single number");
  return d[0];
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

DomainSpec parse_domain(const std::string& v, const std::string& where) {
  std::istringstream is(v);
  std::string kind;
  is >> kind;
  if (kind == "disc") {
    double cx, cy, r;
    if (!(is >> cx >> cy >> r))
      throw ConfigError(where + ": disc needs 'disc cx cy r'");
    return DomainSpec::disc({cx, cy}, r);
  }
  if (kind == "polygon") {
    std::vector<Point2> verts;
    double x, y;
    while (is >> x >> y) verts.push_back({x, y});
    if (verts.size() < 3)
      throw ConfigError(where + ": polygon needs at least 3 vertex pairs");
    return DomainSpec::polygon(std::move(verts));
  }
  throw ConfigError(where + ": unknown domain kind '" + kind + "'");
}

SourceSpec parse_source(const std::string& v, double p, const std::string& where) {
  std::istringstream is(v);
  std::string kind;
  is >> kind;
  if (kind == "constant") {
    double val;
    if (!(is >> val)) throw ConfigError(where + ": constant needs a value");
    return SourceSpec::constant(val, p);
  }
  if (kind == "gaussian") {
    std::vector<solver::GaussianBump> bumps;
    double cx, cy, amp, width;
    while (is >> cx >> cy >> amp >> width)
      bumps.push_back({{cx, cy}, amp, width});
    if (bumps.empty())
      throw ConfigError(where + ": gaussian needs 'cx cy amplitude width' groups");
    return SourceSpec::gaussians(std::move(bumps), p);
  }
  if (kind == "grid") {
    std::string path;
    if (!(is >> path)) throw ConfigError(where + ": grid needs a file path");
    return SourceSpec::grid_file(path, p);
  }
  throw ConfigError(where + ": unknown source kind '" + kind + "'");
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& name) {
  std::ostringstream whole;
  whole << is.rdbuf();
  std::string text = whole.str();

  RunConfig cfg;
  cfg.hash = fnv1a(text);
  std::string domain_line = "disc 0 0 1";
  std::string source_line = "constant 1";
  std::string domain_where = name + ": domain";
  std::string source_where = name + ": source";
  bool lambda_seen = false;

  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash_pos = line.find('#'); hash_pos != std::string::npos)
      line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = name + ":" + std::to_string(lineno);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(where + ": expected 'key = value'");

    if (key == "domain") { domain_line = val; domain_where = where + ": domain"; }
    else if (key == "source") { source_line = val; source_where = where + ": source"; }
    else if (key == "lambda") { cfg.lambda = parse_double(val, where); lambda_seen = true; }
    else if (key == "h") cfg.h = parse_double(val, where);
    else if (key == "cg_tol") cfg.cg_tol = parse_double(val, where);
    else if (key == "p") cfg.p = parse_double(val, where);
    else if (key == "seed") cfg.seed = (unsigned)parse_double(val, where);
    else if (key == "out") cfg.out = val;
    else if (key == "network") cfg.network_path = val;
    else if (key == "probe") {
      auto d = parse_doubles(val, where);
      if (d.size() != 2) throw ConfigError(where + ": probe needs 'x y'");
      cfg.probes.push_back({d[0], d[1]});
    } else if (key == "radii") cfg.radii = parse_doubles(val, where);
    else if (key == "omega") cfg.omega = parse_bool(val, where);
    else if (key == "max_iters") cfg.schedule.max_iters = (int)parse_double(val, where);
    else if (key == "step0") cfg.schedule.step0 = parse_double(val, where);
    else if (key == "shrink") cfg.schedule.shrink = parse_double(val, where);
    else if (key == "grow") cfg.schedule.grow = parse_double(val, where);
    else if (key == "step_min") cfg.schedule.step_min = parse_double(val, where);
    else if (key == "max_backtracks")
      cfg.schedule.max_backtracks = (int)parse_double(val, where);
    else if (key == "accept_margin")
      cfg.schedule.accept_margin = parse_double(val, where);
    else if (key == "grad_smooth")
      cfg.schedule.grad_smooth = (int)parse_double(val, where);
    else if (key == "topo_period") cfg.schedule.topo_period = (int)parse_double(val, where);
    else if (key == "probe_cap") cfg.schedule.probe_cap = (int)parse_double(val, where);
    else if (key == "probe_radius_factors")
      cfg.schedule.probe_radius_factors = parse_doubles(val, where);
    else if (key == "cut_radius_factors")
      cfg.schedule.cut_radius_factors = parse_doubles(val, where);
    else if (key == "stop_df") cfg.schedule.stop_df = parse_double(val, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  if (!lambda_seen) throw ConfigError(name + ": missing required key 'lambda'");
  if (!(cfg.h > 0)) throw ConfigError(name + ": h must be positive");
  if (!(cfg.p > 2)) throw ConfigError(name + ": p must exceed 2");

  cfg.domain = parse_domain(domain_line, domain_where);
  cfg.source = parse_source(source_line, cfg.p, source_where);
  cfg.schedule.seed = cfg.seed;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  return parse_config(is, path);
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "domain = ";
  if (cfg.domain.is_disc()) {
    os << "disc " << fmt17(cfg.domain.center().x) << " "
       << fmt17(cfg.domain.center().y) << " " << fmt17(cfg.domain.radius());
  } else {
    os << "polygon";
    for (const auto& v : cfg.domain.vertices())
      os << " " << fmt17(v.x) << " " << fmt17(v.y);
  }
  os << "\n";
  os << "source = " << cfg.source.describe() << "\n";
  os << "lambda = " << fmt17(cfg.lambda) << "\n";
  os << "h = " << fmt17(cfg.h) << "\n";
  os << "cg_tol = " << fmt17(cfg.cg_tol) << "\n";
  os << "p = " << fmt17(cfg.p) << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "out = " << cfg.out << "\n";
  if (!cfg.network_path.empty()) os << "network = " << cfg.network_path << "\n";
  for (const auto& pr : cfg.probes)
    os << "probe = " << fmt17(pr.x) << " " << fmt17(pr.y) << "\n";
  if (!cfg.radii.empty()) {
    os << "radii =";
    for (double r : cfg.radii) os << " " << fmt17(r);
    os << "\n";
  }
  os << "omega = " << (cfg.omega ? "1" : "0") << "\n";
  const Schedule& s = cfg.schedule;
  os << "max_iters = " << s.max_iters << "\n";
  os << "step0 = " << fmt17(s.step0) << "\n";
  os << "shrink = " << fmt17(s.shrink) << "\n";
  os << "grow = " << fmt17(s.grow) << "\n";
  os << "step_min = " << fmt17(s.step_min) << "\n";
  os << "max_backtracks = " << s.max_backtracks << "\n";
  os << "accept_margin = " << fmt17(s.accept_margin) << "\n";
  os << "grad_smooth = " << s.grad_smooth << "\n";
  os << "topo_period = " << s.topo_period << "\n";
  os << "probe_cap = " << s.probe_cap << "\n";
  os << "probe_radius_factors =";
  for (double f : s.probe_radius_factors) os << " " << fmt17(f);
  os << "\ncut_radius_factors =";
  for (double f : s.cut_radius_factors) os << " " << fmt17(f);
  os << "\n";
  os << "stop_df = " << fmt17(s.stop_df) << "\n";
  return os.str();
}

Problem RunConfig::make_problem() const {
  return Problem(domain, source, lambda, h, cg_tol);
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir + "/manifest.txt");
  if (!os) throw ConfigError("cannot write manifest in " + dir);
  char hash_hex[19];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                (unsigned long long)cfg.hash);
  os << "version = " << version_string() << "\n";
  os << "config_hash = " << hash_hex << "\n";
  os << "seed = " << cfg.seed << "\n";
  for (const auto& [k, v] : extra) os << k << " = " << v << "\n";
}

}  // namespace glueopt::io
