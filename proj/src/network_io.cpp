#include "glueopt/network_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "glueopt/format.hpp"

namespace glueopt::geometry {

using io::fmt17;

void write_network(std::ostream& os, const CurveNetwork& net) {
  os << "nodes " << net.nodes.size() << " edges " << net.edges.size() << "\n";
  for (const auto& p : net.nodes) os << fmt17(p.x) << " " << fmt17(p.y) << "\n";
  for (const auto& e : net.edges) {
    os << "edge " << e.a << " " << e.b << " " << e.pts.size() - 2 << "\n";
    for (size_t k = 1; k + 1 < e.pts.size(); ++k)
      os << fmt17(e.pts[k].x) << " " << fmt17(e.pts[k].y) << "\n";
  }
}

void write_network_file(const std::string& path, const CurveNetwork& net) {
  std::ofstream os(path);
  if (!os) throw NetworkParseError("cannot open for writing: " + path);
  write_network(os, net);
  if (!os) throw NetworkParseError("write failed: " + path);
}

CurveNetwork read_network(std::istream& is) {
  auto fail = [](const std::string& what) -> void { throw NetworkParseError(what); };
  std::string kw;
  size_t n = 0, m = 0;
  if (!(is >> kw) || kw != "nodes" || !(is >> n)) fail("expected 'nodes <N>'");
  if (!(is >> kw) || kw != "edges" || !(is >> m)) fail("expected 'edges <M>'");
  CurveNetwork net;
  net.nodes.resize(n);
  for (auto& p : net.nodes)
    if (!(is >> p.x >> p.y)) fail("bad node line");
  net.edges.reserve(m);
  for (size_t e = 0; e < m; ++e) {
    int a = 0, b = 0;
    size_t k = 0;
    if (!(is >> kw) || kw != "edge" || !(is >> a >> b >> k))
      fail("expected 'edge <i> <j> <K>'");
    if (a < 0 || b < 0 || (size_t)a >= n || (size_t)b >= n)
      fail("edge references missing node");
    Edge edge;
    edge.a = a;
    edge.b = b;
    edge.pts.resize(k + 2);
    edge.pts.front() = net.nodes[a];
    for (size_t i = 0; i < k; ++i)
      if (!(is >> edge.pts[i + 1].x >> edge.pts[i + 1].y)) fail("bad vertex line");
    edge.pts.back() = net.nodes[b];
    net.edges.push_back(std::move(edge));
  }
  try {
    net.validate();
  } catch (const std::runtime_error& err) {
    fail(err.what());
  }
  return net;
}

CurveNetwork read_network_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw NetworkParseError("cannot open: " + path);
  try {
    return read_network(is);
  } catch (const std::runtime_error& err) {
    throw NetworkParseError(path + ": " + err.what());
  }
}

}  // namespace glueopt::geometry
