#include "hs/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace hs {

namespace {

std::string point_str(int i) { return "point " + std::to_string(i); }

}  // namespace

Space::Space(std::vector<double> metric, std::vector<double> measure,
             std::vector<Edge> edges, std::vector<std::array<double, 2>> coords,
             double spacing)
    : metric_(std::move(metric)),
      measure_(std::move(measure)),
      edges_(std::move(edges)),
      coords_(std::move(coords)),
      spacing_(spacing) {
  n_ = int(measure_.size());
  if (n_ <= 0) throw ValidationError("space needs at least one point");
  if (metric_.size() != size_t(n_) * n_)
    throw ValidationError("metric table is not n x n");
  if (!coords_.empty() && coords_.size() != size_t(n_))
    throw ValidationError("coords length mismatch");

  for (int i = 0; i < n_; ++i) {
    if (!(measure_[i] > 0) || !std::isfinite(measure_[i]))
      throw ValidationError("nonpositive weight at " + point_str(i));
    if (dist(i, i) != 0)
      throw ValidationError("nonzero diagonal at " + point_str(i));
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      double dij = dist(i, j), dji = dist(j, i);
      if (dij != dji)
        throw ValidationError("non-symmetric metric at pair (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      if (!(dij > 0) || !std::isfinite(dij))
        throw ValidationError("degenerate distance at pair (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
    }

  // Triangle inequality on all ordered triples, with a tiny relative slack
  // for metrics assembled from floating-point coordinates.
  long long bad_triple = -1;
#pragma omp parallel for schedule(static) reduction(max : bad_triple)
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double dij = dist(i, j);
      for (int k = 0; k < n_; ++k) {
        if (k == i || k == j) continue;
        if (dij > (dist(i, k) + dist(k, j)) * (1 + 1e-12))
          bad_triple = std::max(bad_triple,
                                ((static_cast<long long>(i) * n_ + j) * n_ + k));
      }
    }
  }
  if (bad_triple >= 0) {
    int k = int(bad_triple % n_);
    int j = int((bad_triple / n_) % n_);
    int i = int(bad_triple / n_ / n_);
    throw ValidationError("triangle violation at triple (" + std::to_string(i) +
                          "," + std::to_string(j) + "," + std::to_string(k) +
                          ")");
  }

  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.a < 0 || e.b >= n_ || e.a == e.b)
      throw ValidationError("bad edge endpoints");
    e.length = dist(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  edges_.erase(std::unique(edges_.begin(), edges_.end(),
                           [](const Edge& x, const Edge& y) {
                             return x.a == y.a && x.b == y.b;
                           }),
               edges_.end());

  // CSR adjacency
  std::vector<int> deg(n_, 0);
  for (const auto& e : edges_) ++deg[e.a], ++deg[e.b];
  adj_off_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) adj_off_[i + 1] = adj_off_[i] + deg[i];
  adj_.assign(adj_off_[n_], 0);
  std::vector<int> pos(adj_off_.begin(), adj_off_.end() - 1);
  for (int e = 0; e < int(edges_.size()); ++e) {
    adj_[pos[edges_[e].a]++] = e;
    adj_[pos[edges_[e].b]++] = e;
  }
  max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());

  // connectivity over the edge graph
  std::vector<char> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int e : incident_edges(x)) {
      int y = other_end(e, x);
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  if (reached != n_) {
    int missing = int(std::find(seen.begin(), seen.end(), 0) - seen.begin());
    throw ValidationError("edge graph disconnected: " + point_str(missing) +
                          " unreachable from point 0");
  }

  total_measure_ = std::accumulate(measure_.begin(), measure_.end(), 0.0);
  nearest_.assign(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_; ++j)
      if (j != i) best = std::min(best, dist(i, j));
    nearest_[i] = (n_ == 1) ? 0.0 : best;
    for (int j = 0; j < n_; ++j) diameter_ = std::max(diameter_, dist(i, j));
  }
}

double Space::dist_to_set(int x, std::span<const int> F) const {
  double best = std::numeric_limits<double>::infinity();
  for (int y : F) best = std::min(best, dist(x, y));
  return best;
}

Space build_path(int n, double spacing) {
  if (n < 1 || !(spacing > 0)) throw ValidationError("bad path parameters");
  std::vector<double> metric(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) metric[size_t(i) * n + j] = std::abs(i - j) * spacing;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, spacing});
  std::vector<std::array<double, 2>> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = {i * spacing, 0.0};
  return Space(std::move(metric), std::vector<double>(n, 1.0), std::move(edges),
               std::move(coords), spacing);
}

Space build_cycle(int n) {
  if (n < 3) throw ValidationError("cycle needs n >= 3");
  const double step = 2.0 * M_PI / n;  // unit circle, arc-length metric
  std::vector<double> metric(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = std::abs(i - j);
      k = std::min(k, n - k);
      metric[size_t(i) * n + j] = k * step;
    }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, step});
  std::vector<std::array<double, 2>> coords(n);
  for (int i = 0; i < n; ++i)
    coords[i] = {std::cos(i * step), std::sin(i * step)};
  return Space(std::move(metric), std::vector<double>(n, 1.0), std::move(edges),
               std::move(coords), step);
}

Space build_grid(int k) {
  if (k < 2) throw ValidationError("grid needs k >= 2");
  const int n = k * k;
  std::vector<std::array<double, 2>> coords(n);
  for (int i = 0; i < n; ++i)
    coords[i] = {double(i % k), double(i / k)};
  std::vector<double> metric(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      metric[size_t(i) * n + j] =
          std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
  std::vector<Edge> edges;  // lattice edges
  for (int i = 0; i < n; ++i) {
    if ((i % k) + 1 < k) edges.push_back({i, i + 1, 1.0});
    if (i + k < n) edges.push_back({i, i + k, 1.0});
  }
  return Space(std::move(metric), std::vector<double>(n, 1.0), std::move(edges),
               std::move(coords), 1.0);
}

Space build_cloud(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("cloud needs n >= 2");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    // explicit bit mapping keeps the stream identical across platforms
    return double(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<std::array<double, 2>> coords(n);
  for (int i = 0; i < n; ++i) {
    double x = uniform(), y = uniform();
    coords[i] = {x, y};
  }
  std::vector<double> metric(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      metric[size_t(i) * n + j] =
          std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
  const double spacing = 1.0 / std::sqrt(double(n));  // density spacing
  const double eps = 2.0 * spacing;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (metric[size_t(i) * n + j] <= eps) edges.push_back({i, j, 0.0});
  return Space(std::move(metric), std::vector<double>(n, 1.0), std::move(edges),
               std::move(coords), spacing);
}

DoublingProfile doubling_profile(const Space& space) {
  const int n = space.n();
  double c_d = 1.0;
#pragma omp parallel for schedule(static) reduction(max : c_d)
  for (int x = 0; x < n; ++x) {
    std::vector<double> d(n);
    for (int y = 0; y < n; ++y) d[y] = space.dist(x, y);
    std::vector<double> sorted(d);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cummass(n);
    {
      // measure of B(x,r) = prefix mass over the distance-sorted order
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return d[a] < d[b]; });
      double acc = 0;
      for (int k = 0; k < n; ++k) {
        acc += space.measure(order[k]);
        cummass[k] = acc;
      }
    }
    auto mass_at = [&](double r) {
      // mu(B(x,r)) with closed balls
      int idx = int(std::upper_bound(sorted.begin(), sorted.end(), r) -
                    sorted.begin());
      return idx == 0 ? 0.0 : cummass[idx - 1];
    };
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (double r : {space.dist(x, y), space.dist(x, y) / 2}) {
        double lo = mass_at(r);
        if (lo <= 0) continue;
        c_d = std::max(c_d, mass_at(2 * r) / lo);
      }
    }
  }
  return {c_d, std::log2(c_d)};
}

GradientField discrete_gradient(const Space& space, const ScalarField& f) {
  GradientField g(space.n(), 0.0);
#pragma omp parallel for schedule(static)
  for (int x = 0; x < space.n(); ++x) {
    double best = 0;
    for (int e : space.incident_edges(x)) {
      const Edge& ed = space.edges()[e];
      best = std::max(best, std::abs(f[ed.a] - f[ed.b]) / ed.length);
    }
    g[x] = best;
  }
  return g;
}

}  // namespace hs
