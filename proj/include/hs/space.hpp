#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hs {

/// One real value per point id.
using ScalarField = std::vector<double>;

/// Pointwise slope field: values(x) = max over incident edges of |df|/d.
using GradientField = std::vector<double>;

struct Edge {
  int a, b;       // a < b
  double length;  // d(a,b) > 0
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Finite metric measure space with an edge graph for gradients.
/// Immutable after construction; all queries are const and thread-safe.
class Space {
 public:
  /// Validates metric symmetry, zero diagonal, triangle inequality,
  /// positive weights and edge-graph connectivity. Throws ValidationError
  /// naming the offending point/pair/triple.
  Space(std::vector<double> metric, std::vector<double> measure,
        std::vector<Edge> edges, std::vector<std::array<double, 2>> coords = {},
        double spacing = 1.0);

  int n() const { return n_; }
  double dist(int i, int j) const { return metric_[size_t(i) * n_ + j]; }
  double measure(int i) const { return measure_[i]; }
  double total_measure() const { return total_measure_; }
  double diameter() const { return diameter_; }
  /// Nominal inter-point spacing of the generator (1 for explicit files).
  double spacing() const { return spacing_; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge indices incident to point i, ascending.
  std::span<const int> incident_edges(int i) const {
    return {adj_.data() + adj_off_[i], adj_.data() + adj_off_[i + 1]};
  }
  int other_end(int edge, int from) const {
    const Edge& e = edges_[edge];
    return e.a == from ? e.b : e.a;
  }
  int max_degree() const { return max_degree_; }

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::array<double, 2>>& coords() const { return coords_; }

  /// Distance from x to the nearest point of the (nonempty) set F.
  double dist_to_set(int x, std::span<const int> F) const;

  /// Smallest positive distance from i to another point; 0 when n == 1.
  double nearest_distance(int i) const { return nearest_[i]; }

 private:
  int n_ = 0;
  std::vector<double> metric_;   // row-major n*n
  std::vector<double> measure_;
  std::vector<Edge> edges_;
  std::vector<int> adj_;         // incident edge ids, CSR
  std::vector<int> adj_off_;
  std::vector<std::array<double, 2>> coords_;
  std::vector<double> nearest_;
  double total_measure_ = 0;
  double diameter_ = 0;
  double spacing_ = 1;
  int max_degree_ = 0;
};

// Deterministic generators. Same parameters (and seed) give bit-identical
// spaces.
Space build_path(int n, double spacing);
Space build_cycle(int n);
Space build_grid(int k);
Space build_cloud(int n, std::uint64_t seed);

struct DoublingProfile {
  double c_d;  // measured doubling constant, >= 1
  double s;    // log2(c_d)
};

/// Measured doubling constant: sup over centers and critical radii
/// r in {d(x,y)} u {d(x,y)/2} of mu(B(x,2r))/mu(B(x,r)).
DoublingProfile doubling_profile(const Space& space);

GradientField discrete_gradient(const Space& space, const ScalarField& f);

struct PoincareResult {
  double constant;        // smallest admissible C; +inf on violation
  int witness_center;     // ball center witnessing the max ratio / violation
  double witness_radius;
};

}  // namespace hs
