#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qoe {

// n random sites on the unit square.
struct SiteSet {
  std::vector<std::array<double, 2>> positions;
  std::uint64_t seed = 0;
  int n = 0;
};

// Undirected simple graph over the sites. Edges are stored once, (a, b)
// with a < b, sorted lexicographically.
struct ConnectivityGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  int degree_min = 0;
  int degree_max = 0;
  double degree_mean = 0.0;
};

// Tight-binding Hamiltonian on the graph: off-diagonal -gamma0 per edge,
// e0 on the diagonal.
struct Hamiltonian {
  int n = 0;
  Eigen::MatrixXd matrix;
  double e0 = 0.0;
  double gamma0 = 1.0;
};

SiteSet generate_sites(int n, std::uint64_t seed);

// pools[i] = indices of the pool_size sites nearest to site i (self excluded),
// distance ties broken by ascending index. Requires pool_size < n.
std::vector<std::vector<int>> k_nearest_pools(const SiteSet& sites,
                                              int pool_size);

// For each of `passes` sweeps over all sites, connect each site to one
// partner drawn uniformly from its pool, redrawing while the sampled pair is
// already an edge. A site whose whole pool is already connected to it
// contributes nothing that pass (this only triggers at toy sizes where the
// pool is smaller than the requested degree). Self-loops cannot occur since
// pools exclude the site itself.
ConnectivityGraph build_connectivity(const SiteSet& sites, int passes,
                                     int pool_size, std::uint64_t seed);

Hamiltonian assemble_hamiltonian(const ConnectivityGraph& graph, double e0,
                                 double gamma0);

std::vector<int> degrees(const ConnectivityGraph& graph);

// Round-trip the network through JSON: {n, seed, passes, pool_size,
// positions, edges}. This is the persisted form for reproducing a
// configuration without replaying the RNG.
void save_network_json(const std::string& path, const SiteSet& sites,
                       const ConnectivityGraph& graph, int passes,
                       int pool_size);
struct LoadedNetwork {
  SiteSet sites;
  ConnectivityGraph graph;
  int passes = 0;
  int pool_size = 0;
};
LoadedNetwork load_network_json(const std::string& path);

// Content hash of everything that determines the Hamiltonian (n, e0, gamma0,
// edge list). Keys the on-disk spectrum cache.
std::uint64_t graph_content_hash(const ConnectivityGraph& graph, double e0,
                                 double gamma0);

} // namespace qoe
