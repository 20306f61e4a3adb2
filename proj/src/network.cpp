#include "qoe/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "qoe/rng.hpp"

namespace qoe {

namespace {

void compute_degree_stats(ConnectivityGraph& g) {
  const std::vector<int> deg = degrees(g);
  g.degree_min = *std::min_element(deg.begin(), deg.end());
  g.degree_max = *std::max_element(deg.begin(), deg.end());
  g.degree_mean = 2.0 * static_cast<double>(g.edges.size()) / g.n;
}

} // namespace

SiteSet generate_sites(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_sites: n must be >= 2");
  SiteSet sites;
  sites.n = n;
  sites.seed = seed;
  sites.positions.reserve(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_double();
    const double y = rng.next_double();
    sites.positions.push_back({x, y});
  }
  return sites;
}

std::vector<std::vector<int>> k_nearest_pools(const SiteSet& sites,
                                              int pool_size) {
  const int n = sites.n;
  if (pool_size <= 0 || pool_size >= n)
    throw std::invalid_argument(
        "k_nearest_pools: pool_size must be in [1, n-1]");

  std::vector<std::vector<int>> pools(n);
  // (distance^2, index) pairs; the index component breaks exact ties.
  std::vector<std::pair<double, int>> order(n - 1);
  for (int k = 0; k < n; ++k) {
    int m = 0;
    const auto& pk = sites.positions[k];
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double dx = sites.positions[j][0] - pk[0];
      const double dy = sites.positions[j][1] - pk[1];
      order[m++] = {dx * dx + dy * dy, j};
    }
    std::partial_sort(order.begin(), order.begin() + pool_size, order.end());
    auto& pool = pools[k];
    pool.resize(pool_size);
    for (int i = 0; i < pool_size; ++i) pool[i] = order[i].second;
  }
  return pools;
}

ConnectivityGraph build_connectivity(const SiteSet& sites, int passes,
                                     int pool_size, std::uint64_t seed) {
  if (passes <= 0)
    throw std::invalid_argument("build_connectivity: passes must be >= 1");
  const auto pools = k_nearest_pools(sites, pool_size);
  const int n = sites.n;

  Rng rng(seed);
  std::set<std::pair<int, int>> edge_set;
  auto has_edge = [&edge_set](int a, int b) {
    return edge_set.count({std::min(a, b), std::max(a, b)}) != 0;
  };

  for (int pass = 0; pass < passes; ++pass) {
    for (int k = 0; k < n; ++k) {
      const auto& pool = pools[k];
      // A pick that lands on an existing edge is redrawn; each (pass, site)
      // therefore contributes one new edge. Only when the whole pool is
      // exhausted (possible at toy sizes) does the site skip its turn.
      const bool exhausted = std::all_of(
          pool.begin(), pool.end(), [&](int j) { return has_edge(k, j); });
      if (exhausted) continue;
      for (;;) {
        const int partner =
            pool[static_cast<int>(rng.next_below(pool.size()))];
        if (!has_edge(k, partner)) {
          edge_set.insert({std::min(k, partner), std::max(k, partner)});
          break;
        }
      }
    }
  }

  ConnectivityGraph g;
  g.n = n;
  g.edges.assign(edge_set.begin(), edge_set.end());
  compute_degree_stats(g);
  // Every site initiates `passes` picks, so degree 0 cannot happen; check
  // anyway so a future change to the pass scheme fails loudly.
  if (g.degree_min < 1)
    throw std::runtime_error("build_connectivity: isolated site in graph");
  return g;
}

std::vector<int> degrees(const ConnectivityGraph& graph) {
  std::vector<int> deg(graph.n, 0);
  for (const auto& [a, b] : graph.edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

Hamiltonian assemble_hamiltonian(const ConnectivityGraph& graph, double e0,
                                 double gamma0) {
  if (gamma0 <= 0)
    throw std::invalid_argument("assemble_hamiltonian: gamma0 must be > 0");
  Hamiltonian h;
  h.n = graph.n;
  h.e0 = e0;
  h.gamma0 = gamma0;
  h.matrix = Eigen::MatrixXd::Zero(graph.n, graph.n);
  h.matrix.diagonal().setConstant(e0);
  for (const auto& [a, b] : graph.edges) {
    h.matrix(a, b) = -gamma0;
    h.matrix(b, a) = -gamma0;
  }
  return h;
}

void save_network_json(const std::string& path, const SiteSet& sites,
                       const ConnectivityGraph& graph, int passes,
                       int pool_size) {
  nlohmann::json doc;
  doc["n"] = sites.n;
  doc["seed"] = sites.seed;
  doc["passes"] = passes;
  doc["pool_size"] = pool_size;
  auto& positions = doc["positions"] = nlohmann::json::array();
  for (const auto& p : sites.positions) positions.push_back({p[0], p[1]});
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedNetwork load_network_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json doc;
  in >> doc;

  LoadedNetwork net;
  net.sites.n = doc.at("n").get<int>();
  net.sites.seed = doc.at("seed").get<std::uint64_t>();
  net.passes = doc.at("passes").get<int>();
  net.pool_size = doc.at("pool_size").get<int>();
  for (const auto& p : doc.at("positions"))
    net.sites.positions.push_back({p.at(0).get<double>(),
                                   p.at(1).get<double>()});
  if (static_cast<int>(net.sites.positions.size()) != net.sites.n)
    throw std::runtime_error("network json: positions/n mismatch in " + path);

  net.graph.n = net.sites.n;
  for (const auto& e : doc.at("edges")) {
    const int a = e.at(0).get<int>();
    const int b = e.at(1).get<int>();
    if (a == b || a < 0 || b < 0 || a >= net.graph.n || b >= net.graph.n)
      throw std::runtime_error("network json: bad edge in " + path);
    net.graph.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(net.graph.edges.begin(), net.graph.edges.end());
  compute_degree_stats(net.graph);
  return net;
}

std::uint64_t graph_content_hash(const ConnectivityGraph& graph, double e0,
                                 double gamma0) {
  // FNV-1a over the fields that determine the Hamiltonian. Positions do not
  // enter: two graphs with identical edges give identical matrices.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&](double d) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof d);
    std::memcpy(&bits, &d, sizeof bits);
    mix(bits);
  };
  mix(static_cast<std::uint64_t>(graph.n));
  mix_double(e0);
  mix_double(gamma0);
  for (const auto& [a, b] : graph.edges) {
    mix(static_cast<std::uint64_t>(a));
    mix(static_cast<std::uint64_t>(b));
  }
  return h;
}

} // namespace qoe
