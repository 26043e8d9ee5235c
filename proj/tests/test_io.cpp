#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "glueopt/config.hpp"
#include "glueopt/render.hpp"

using namespace glueopt::io;
using doctest::Approx;

namespace fs = std::filesystem;

namespace {
const char* kSample =
    "# sample run\n"
    "domain = disc 0 0 1\n"
    "source = gaussian 0.2 0.1 3 0.15 -0.2 0 1 0.1\n"
    "lambda = 0.35\n"
    "h = 0.03125\n"
    "cg_tol = 1e-9\n"
    "p = 3\n"
    "seed = 7\n"
    "out = some_dir\n"
    "probe = 0.1 0.2\n"
    "probe = -0.3 0\n"
    "radii = 0.05 0.1 0.2\n"
    "omega = false\n"
    "max_iters = 41\n"
    "step0 = 0.015\n"
    "topo_period = 7\n";

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("config parsing covers every key and preserves values") {
  std::istringstream is(kSample);
  auto cfg = parse_config(is, "sample");
  CHECK(cfg.domain.is_disc());
  CHECK(cfg.domain.radius() == Approx(1.0));
  CHECK(cfg.lambda == Approx(0.35));
  CHECK(cfg.h == Approx(0.03125));
  CHECK(cfg.cg_tol == Approx(1e-9));
  CHECK(cfg.p == Approx(3.0));
  CHECK(cfg.seed == 7);
  CHECK(cfg.out == "some_dir");
  REQUIRE(cfg.probes.size() == 2);
  CHECK(cfg.probes[1].x == Approx(-0.3));
  REQUIRE(cfg.radii.size() == 3);
  CHECK(cfg.radii[2] == Approx(0.2));
  CHECK_FALSE(cfg.omega);
  CHECK(cfg.schedule.max_iters == 41);
  CHECK(cfg.schedule.step0 == Approx(0.015));
  CHECK(cfg.schedule.topo_period == 7);
  CHECK(cfg.schedule.seed == 7);  // seed propagates into the schedule
  CHECK(cfg.hash == fnv1a(kSample));
  CHECK(cfg.hash != 0);

  // the source keeps the gaussian parameters and the exponent p
  CHECK(cfg.source.p() == Approx(3.0));
  CHECK(cfg.source.eval({0.2, 0.1}) > 2.9);  // at the first bump peak
  CHECK(cfg.source.eval({5, 5}) < 1e-6);     // far from every bump
}

TEST_CASE("echoed config reparses to the same semantic state") {
  std::istringstream is(kSample);
  auto cfg = parse_config(is, "sample");
  std::string echoed = echo_config(cfg);
  std::istringstream is2(echoed);
  auto cfg2 = parse_config(is2, "echoed");
  CHECK(cfg2.lambda == cfg.lambda);
  CHECK(cfg2.h == cfg.h);
  CHECK(cfg2.p == cfg.p);
  CHECK(cfg2.seed == cfg.seed);
  CHECK(cfg2.probes.size() == cfg.probes.size());
  CHECK(cfg2.radii == cfg.radii);
  CHECK(cfg2.omega == cfg.omega);
  CHECK(cfg2.schedule.max_iters == cfg.schedule.max_iters);
  CHECK(cfg2.schedule.step0 == cfg.schedule.step0);
  CHECK(cfg2.source.describe() == cfg.source.describe());
  // echo is idempotent once canonical
  CHECK(echo_config(cfg2) == echoed);
}

TEST_CASE("polygon domains parse from vertex pair lists") {
  std::istringstream is(
      "domain = polygon 0 0 2 0 2 1 0 1\n"
      "lambda = 1\n");
  auto cfg = parse_config(is);
  CHECK_FALSE(cfg.domain.is_disc());
  CHECK(cfg.domain.area() == Approx(2.0));
}

TEST_CASE("config errors name the file and line") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream is(text);
    try {
      parse_config(is, "bad.cfg");
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find("bad.cfg") != std::string::npos);
      CHECK(std::string(err.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("h = 0.1\n", "lambda");                   // lambda is required
  expect_error("lambda = 1\nwibble = 3\n", "wibble");    // unknown key
  expect_error("lambda = 1\ndomain = disc 0 0\n", "domain");  // short args
  expect_error("lambda = 1\nh = -0.5\n", "h");           // bad value
  expect_error("lambda = 1\np = 2\n", "p");              // p must exceed 2
  expect_error("lambda = 1\nsource = circus 1\n", "source");
}

TEST_CASE("content hash is stable and sensitive") {
  CHECK(fnv1a("") == 14695981039346656037ull);  // FNV-1a offset basis
  CHECK(fnv1a("a") == 12638187200555641996ull);  // published reference value
  CHECK(fnv1a("lambda = 1\n") != fnv1a("lambda = 2\n"));
}

TEST_CASE("manifest records version, hash and extras") {
  std::istringstream is(kSample);
  auto cfg = parse_config(is, "sample");
  fs::path dir = fs::temp_directory_path() / "glueopt_manifest_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_manifest(dir.string(), cfg, {{"final_value", "1.25"}});
  auto text = read_file(dir / "manifest.txt");
  CHECK(text.find("version") != std::string::npos);
  CHECK(text.find(version_string()) != std::string::npos);
  CHECK(text.find("config_hash") != std::string::npos);
  CHECK(text.find("seed = 7") != std::string::npos);
  CHECK(text.find("final_value = 1.25") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("svg rendering emits a well-formed drawing with the network") {
  auto dom = glueopt::geometry::DomainSpec::disc({0, 0}, 1.0);
  glueopt::geometry::CurveNetwork net;
  net.nodes = {{-1, 0}, {1, 0}};
  net.edges.push_back({0, 1, {{-1, 0}, {1, 0}}});
  std::ostringstream os;
  render_svg(os, dom, &net, nullptr, nullptr, {{0.25, 0.25}});
  auto svg = os.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);    // the network edge
  CHECK(svg.find("<circle") != std::string::npos);  // probe marker + outline
  CHECK(svg.find("viewBox") != std::string::npos);

  std::ostringstream os2;
  render_svg(os2, dom, &net, nullptr, nullptr, {{0.25, 0.25}});
  CHECK(os2.str() == svg);  // deterministic
}

#ifdef GLUEOPT_CLI_PATH
TEST_CASE("command line solve runs end to end on a temp instance") {
  fs::path dir = fs::temp_directory_path() / "glueopt_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "domain = disc 0 0 1\nsource = constant 1\nlambda = 0.25\n"
        << "h = 0.03125\nout = " << (dir / "out").string() << "\n";
    std::ofstream net(dir / "net.txt");
    net << "nodes 2 edges 1\n-1 0\n1 0\nedge 0 1 0\n";
  }
  std::string cmd = std::string(GLUEOPT_CLI_PATH) + " solve -c " +
                    (dir / "run.cfg").string() + " -n " + (dir / "net.txt").string() +
                    " > " + (dir / "stdout.txt").string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "out" / "manifest.txt"));
  CHECK(fs::exists(dir / "out" / "u.txt"));
  CHECK(fs::exists(dir / "out" / "solve.json"));
  auto svg = read_file(dir / "out" / "solve.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  auto out = read_file(dir / "stdout.txt");
  CHECK(out.find("compliance") != std::string::npos);

  // the stored field file parses back on the expected grid
  auto u = glueopt::solver::read_grid_file((dir / "out" / "u.txt").string());
  CHECK(u.grid.nx == 65);
  CHECK(u.grid.ny == 65);
  CHECK(u.interp({0, 0.5}) > 0.0);

  // a bad invocation fails loudly
  std::string bad = std::string(GLUEOPT_CLI_PATH) + " solve -c " +
                    (dir / "missing.cfg").string() + " > /dev/null 2>&1";
  CHECK(std::system(bad.c_str()) != 0);
  fs::remove_all(dir);
}
#endif
