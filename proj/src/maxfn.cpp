#include "hs/maxfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "hs/simplex.hpp"

namespace hs {

namespace {

// Per-point sup over incident balls of precomputed per-ball values, with an
// optional degenerate point-mass floor. Incident lists are ascending, so the
// result is independent of the schedule.
ScalarField sup_incident(const BallFamily& fam, int n,
                         const std::vector<double>& ball_vals,
                         const ScalarField* floor_vals) {
  ScalarField out(n, 0.0);
#pragma omp parallel for schedule(static)
  for (int x = 0; x < n; ++x) {
    double best = floor_vals ? (*floor_vals)[x] : 0.0;
    for (int bi : fam.incident[x]) best = std::max(best, ball_vals[bi]);
    out[x] = best;
  }
  return out;
}

}  // namespace

ScalarField hl_maximal(const Space& space, const BallFamily& balls,
                       const ScalarField& f) {
  const int n = space.n();
  std::vector<double> vals(balls.size());
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi) {
    const Ball& B = balls.balls[bi];
    double acc = 0;
    for (int y : B.members) acc += std::abs(f[y]) * space.measure(y);
    vals[bi] = acc / B.mass;
  }
  ScalarField floor_vals(n);
  for (int x = 0; x < n; ++x) floor_vals[x] = std::abs(f[x]);
  return sup_incident(balls, n, vals, &floor_vals);
}

ScalarField hl_maximal_q(const Space& space, const BallFamily& balls,
                         const ScalarField& f, double r) {
  if (!(r > 0) || r > 1)
    throw ValidationError("hl_maximal_q needs 0 < r <= 1");
  const int n = space.n();
  ScalarField fr(n);
  for (int i = 0; i < n; ++i) fr[i] = std::pow(std::abs(f[i]), r);
  ScalarField m = hl_maximal(space, balls, fr);
  for (int i = 0; i < n; ++i) m[i] = std::pow(m[i], 1.0 / r);
  return m;
}

ScalarField sobolev_sharp(const Space& space, const BallFamily& balls,
                          const ScalarField& f) {
  std::vector<double> vals(balls.size());
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi) {
    const Ball& B = balls.balls[bi];
    double fB = 0;
    for (int y : B.members) fB += f[y] * space.measure(y);
    fB /= B.mass;
    double osc = 0;
    for (int y : B.members) osc += std::abs(f[y] - fB) * space.measure(y);
    vals[bi] = osc / (B.mass * B.radius);
  }
  return sup_incident(balls, space.n(), vals, nullptr);
}

ScalarField calderon_star(const Space& space, const BallFamily& balls,
                          const ScalarField& f) {
  const int n = space.n();
  // Balls of one center are nested in radius order; a value-sorted
  // (f, weight) array grown ball by ball answers every
  // avg_B |f - f(x)| query through prefix sums.
  ScalarField out(n, 0.0);
  std::vector<int> first(n + 1, 0);
  for (const Ball& b : balls.balls) ++first[b.center + 1];
  for (int c = 0; c < n; ++c) first[c + 1] += first[c];

#pragma omp parallel
  {
    ScalarField local(n, 0.0);
    std::vector<double> vals, wsum, vwsum, W, S;
    std::vector<char> inserted(n, 0);
#pragma omp for schedule(dynamic)
    for (int c = 0; c < n; ++c) {
      vals.clear();
      wsum.clear();
      vwsum.clear();
      std::fill(inserted.begin(), inserted.end(), 0);
      for (int bi = first[c]; bi < first[c + 1]; ++bi) {
        const Ball& B = balls.balls[bi];
        for (int y : B.members) {
          if (inserted[y]) continue;
          inserted[y] = 1;
          double v = f[y];
          size_t pos =
              std::lower_bound(vals.begin(), vals.end(), v) - vals.begin();
          vals.insert(vals.begin() + pos, v);
          wsum.insert(wsum.begin() + pos, space.measure(y));
          vwsum.insert(vwsum.begin() + pos, v * space.measure(y));
        }
        W.assign(vals.size() + 1, 0.0);
        S.assign(vals.size() + 1, 0.0);
        for (size_t i = 0; i < vals.size(); ++i) {
          W[i + 1] = W[i] + wsum[i];
          S[i + 1] = S[i] + vwsum[i];
        }
        const double inv = 1.0 / (B.mass * B.radius);
        for (int x : B.members) {
          double t = f[x];
          size_t k =
              std::upper_bound(vals.begin(), vals.end(), t) - vals.begin();
          double below = t * W[k] - S[k];
          double above = (S.back() - S[k]) - t * (W.back() - W[k]);
          local[x] = std::max(local[x], (below + above) * inv);
        }
      }
    }
#pragma omp critical
    for (int x = 0; x < n; ++x) out[x] = std::max(out[x], local[x]);
  }
  return out;
}

GrandMode default_grand_mode(int n) {
  return n <= 128 ? GrandMode::ExactLp : GrandMode::Tent;
}

namespace {

double tent_value(const Space& space, const Ball& B, const ScalarField& f) {
  double acc = 0;
  for (int y : B.members) {
    double t = 1.0 - space.dist(B.center, y) / B.radius;
    if (t > 0) acc += f[y] * t * space.measure(y);
  }
  return std::abs(acc) / B.mass;
}

// All-pairs shortest paths along the edge graph (edge lengths as weights).
std::vector<double> graph_geodesics(const Space& space) {
  const int n = space.n();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(size_t(n) * n, inf);
  for (int i = 0; i < n; ++i) d[size_t(i) * n + i] = 0;
  for (const Edge& e : space.edges()) {
    d[size_t(e.a) * n + e.b] = e.length;
    d[size_t(e.b) * n + e.a] = e.length;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double dik = d[size_t(i) * n + k];
      if (dik == inf) continue;
      const double* dk = &d[size_t(k) * n];
      double* di = &d[size_t(i) * n];
      for (int j = 0; j < n; ++j)
        if (dik + dk[j] < di[j]) di[j] = dik + dk[j];
    }
  return d;
}

}  // namespace

namespace detail {

// Exact T1 polytope optimum on one ball via the flow dual: rows are the
// members (equality, rhs w), columns are within-edge flows and per-member
// disposals at the box bound. Row multipliers recover the optimal psi.
// The problem skeleton is fixed per ball; only the rhs moves between
// solves, so alternation rounds reuse it.
class T1Solver {
 public:
  T1Solver(const Space& space, const Ball& ball) : ball_(ball) {
    const auto& S = ball.members;
    const int k = int(S.size());
    std::vector<int> pos(space.n(), -1);
    for (int i = 0; i < k; ++i) pos[S[i]] = i;
    const double lip = 1.0 / (ball.radius * ball.mass);
    std::vector<double> beta(k, 1.0 / ball.mass);
    struct InEdge {
      int u, v;
      double c;
    };
    std::vector<InEdge> inner;
    for (const Edge& e : space.edges()) {
      int pu = pos[e.a], pv = pos[e.b];
      if (pu >= 0 && pv >= 0) {
        inner.push_back({pu, pv, e.length * lip});
      } else if (pu >= 0) {
        beta[pu] = std::min(beta[pu], e.length * lip);
      } else if (pv >= 0) {
        beta[pv] = std::min(beta[pv], e.length * lip);
      }
    }
    p_.maximize = false;
    for (int i = 0; i < k; ++i) p_.add_row(0.0, true);
    for (const InEdge& e : inner) {
      p_.add_col({{{e.u, 1.0}, {e.v, -1.0}}, e.c, lp::kInf});
      p_.add_col({{{e.u, -1.0}, {e.v, 1.0}}, e.c, lp::kInf});
    }
    zp_.resize(k);
    zm_.resize(k);
    for (int i = 0; i < k; ++i) {
      zp_[i] = p_.add_col({{{i, 1.0}}, beta[i], lp::kInf});
      zm_[i] = p_.add_col({{{i, -1.0}}, beta[i], lp::kInf});
    }
    hint_.resize(k);
  }

  std::vector<double> argmax(const std::vector<double>& w, double* value) {
    const int k = int(w.size());
    for (int i = 0; i < k; ++i) {
      p_.rhs[i] = w[i];
      hint_[i] = (w[i] >= 0) ? zp_[i] : zm_[i];
    }
    lp::Solution sol = lp::solve(p_, &hint_);
    if (sol.status != lp::Status::Optimal)
      throw std::runtime_error("t1 polytope LP failed on ball center " +
                               std::to_string(ball_.center));
    if (value) *value = std::max(sol.objective, 0.0);
    return sol.dual;  // psi on the members, in member order
  }

 private:
  const Ball& ball_;
  lp::Problem p_;
  std::vector<int> zp_, zm_, hint_;
};

std::vector<double> t1_polytope_argmax(const Space& space, const Ball& ball,
                                       const std::vector<double>& w,
                                       double* value) {
  return T1Solver(space, ball).argmax(w, value);
}

// Exact value when the objective touches few members: contract the
// difference-constraint system to its metric closure on the support plus a
// ground node (box escapes), then solve the small flow dual. Projection of
// the polytope onto the support coordinates is exactly the closure system,
// so the optimum is unchanged.
double t1_polytope_max_sparse(const Space& space, const Ball& ball,
                              const std::vector<int>& support,
                              const std::vector<double>& wsup) {
  const auto& S = ball.members;
  const int k = int(S.size());
  const int ks = int(support.size());
  if (ks == 0) return 0.0;

  std::vector<int> pos(space.n(), -1);
  for (int i = 0; i < k; ++i) pos[S[i]] = i;
  const double lip = 1.0 / (ball.radius * ball.mass);
  std::vector<double> beta(k, 1.0 / ball.mass);
  struct Arc {
    int to;
    double c;
  };
  std::vector<std::vector<Arc>> adj(k + 1);  // node k = ground
  for (const Edge& e : space.edges()) {
    int pu = pos[e.a], pv = pos[e.b];
    if (pu >= 0 && pv >= 0) {
      adj[pu].push_back({pv, e.length * lip});
      adj[pv].push_back({pu, e.length * lip});
    } else if (pu >= 0) {
      beta[pu] = std::min(beta[pu], e.length * lip);
    } else if (pv >= 0) {
      beta[pv] = std::min(beta[pv], e.length * lip);
    }
  }
  for (int i = 0; i < k; ++i) {
    adj[i].push_back({k, beta[i]});
    adj[k].push_back({i, beta[i]});
  }

  // Dijkstra from each support member over members + ground
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(ks);
  std::vector<double> d(k + 1);
  std::priority_queue<std::pair<double, int>,
                      std::vector<std::pair<double, int>>,
                      std::greater<>> pq;
  for (int si = 0; si < ks; ++si) {
    std::fill(d.begin(), d.end(), inf);
    int src = pos[support[si]];
    d[src] = 0;
    pq.push({0.0, src});
    while (!pq.empty()) {
      auto [dd, u] = pq.top();
      pq.pop();
      if (dd > d[u]) continue;
      for (const Arc& a : adj[u])
        if (dd + a.c < d[a.to]) {
          d[a.to] = dd + a.c;
          pq.push({d[a.to], a.to});
        }
    }
    dist[si] = d;
  }

  lp::Problem p;
  p.maximize = false;
  for (int i = 0; i < ks; ++i) p.add_row(wsup[i], true);
  for (int i = 0; i < ks; ++i)
    for (int j = i + 1; j < ks; ++j) {
      double c = dist[i][pos[support[j]]];
      if (c == inf) continue;
      p.add_col({{{i, 1.0}, {j, -1.0}}, c, lp::kInf});
      p.add_col({{{i, -1.0}, {j, 1.0}}, c, lp::kInf});
    }
  std::vector<int> hint(ks);
  for (int i = 0; i < ks; ++i) {
    double c = dist[i][k];
    int zp = p.add_col({{{i, 1.0}}, c, lp::kInf});
    int zm = p.add_col({{{i, -1.0}}, c, lp::kInf});
    hint[i] = (wsup[i] >= 0) ? zp : zm;
  }
  lp::Solution sol = lp::solve(p, &hint);
  if (sol.status != lp::Status::Optimal)
    throw std::runtime_error("t1 contracted LP failed on ball center " +
                             std::to_string(ball.center));
  return std::max(sol.objective, 0.0);
}

double t1_polytope_max(const Space& space, const Ball& ball,
                       const std::vector<double>& w) {
  double v = 0;
  t1_polytope_argmax(space, ball, w, &v);
  return v;
}

}  // namespace detail

ScalarField grand_maximal(const Space& space, const BallFamily& balls,
                          const ScalarField& f, GrandMode mode) {
  const int n = space.n();
  std::vector<double> vals(balls.size());
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi)
    vals[bi] = tent_value(space, balls.balls[bi], f);

  ScalarField floor_vals(n);
  for (int x = 0; x < n; ++x) floor_vals[x] = std::abs(f[x]);

  if (mode == GrandMode::Tent)
    return sup_incident(balls, n, vals, &floor_vals);

  // Exact mode. The tent value is feasible, hence a lower bound; sound
  // upper bounds prune balls that cannot win anywhere, progressively as
  // exact values accumulate. Three caps per ball: the plain box, the
  // edge-tightened box (boundary edges shrink the test-function room), and
  // the recentred Lipschitz bound through graph geodesics.
  ScalarField lb = sup_incident(balls, n, vals, &floor_vals);
  std::vector<double> geo = graph_geodesics(space);

  std::vector<double> ub(balls.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi) {
    const Ball& B = balls.balls[bi];
    const double lip = 1.0 / (B.radius * B.mass);
    double tight_box = 0, mean = 0, lipsum = 0;
    for (int y : B.members) {
      double beta = 1.0 / B.mass;
      for (int ei : space.incident_edges(y)) {
        const Edge& ed = space.edges()[ei];
        int z = ed.a == y ? ed.b : ed.a;
        if (space.dist(B.center, z) > B.radius)
          beta = std::min(beta, ed.length * lip);
      }
      tight_box += std::abs(f[y]) * space.measure(y) * beta;
      mean += f[y] * space.measure(y);
      lipsum += std::abs(f[y]) * geo[size_t(B.center) * n + y] *
                space.measure(y) / B.radius;
    }
    ub[bi] = std::min(tight_box, (std::abs(mean) + lipsum) / B.mass);
  }

  std::vector<int> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ub[a] != ub[b]) return ub[a] > ub[b];
    return a < b;
  });

  const int wave = std::max<int>(64, balls.size() / 16);
  for (size_t wstart = 0; wstart < order.size(); wstart += wave) {
    std::vector<int> active;
    for (size_t oi = wstart; oi < std::min(order.size(), wstart + wave);
         ++oi) {
      int bi = order[oi];
      for (int y : balls.balls[bi].members)
        if (ub[bi] > lb[y] * (1 + 1e-12)) {
          active.push_back(bi);
          break;
        }
    }
#pragma omp parallel for schedule(dynamic)
    for (size_t t = 0; t < active.size(); ++t) {
      int bi = active[t];
      const Ball& B = balls.balls[bi];
      std::vector<int> support;
      std::vector<double> wsup;
      for (int y : B.members)
        if (f[y] != 0) {
          support.push_back(y);
          wsup.push_back(f[y] * space.measure(y));
        }
      if (support.size() * 3 <= B.members.size()) {
        vals[bi] = detail::t1_polytope_max_sparse(space, B, support, wsup);
      } else {
        std::vector<double> w(B.members.size());
        for (size_t i = 0; i < B.members.size(); ++i)
          w[i] = f[B.members[i]] * space.measure(B.members[i]);
        vals[bi] = detail::t1_polytope_max(space, B, w);
      }
    }
    for (int bi : active)
      for (int y : balls.balls[bi].members)
        lb[y] = std::max(lb[y], vals[bi]);
  }
  return sup_incident(balls, n, vals, &floor_vals);
}

ConvolutionResult discrete_convolution(const Space& space, const ScalarField& f,
                                       double r) {
  if (!(r > 0)) throw ValidationError("discrete_convolution needs r > 0");
  const int n = space.n();
  ConvolutionResult res;
  res.radius = r;
  for (int x = 0; x < n; ++x) {
    bool separated = true;
    for (int c : res.centers)
      if (space.dist(x, c) <= r) {
        separated = false;
        break;
      }
    if (separated) res.centers.push_back(x);
  }
  const int m = int(res.centers.size());
  std::vector<double> avg3(m, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) {
    double acc = 0, mass = 0;
    for (int y = 0; y < n; ++y)
      if (space.dist(res.centers[j], y) <= 3 * r) {
        acc += f[y] * space.measure(y);
        mass += space.measure(y);
      }
    avg3[j] = acc / mass;
  }
  res.field.assign(n, 0.0);
  int overlap = 0;
#pragma omp parallel for schedule(static) reduction(max : overlap)
  for (int x = 0; x < n; ++x) {
    double num = 0, den = 0;
    int count = 0;
    for (int j = 0; j < m; ++j) {
      double d = space.dist(x, res.centers[j]);
      if (d <= 6 * r) ++count;
      double psi = 1.0 - d / (6 * r);
      if (psi > 0) {
        num += psi * avg3[j];
        den += psi;
      }
    }
    res.field[x] = num / den;
    overlap = std::max(overlap, count);
  }
  res.overlap = overlap;
  return res;
}

ScalarField grad_maximal_star(const Space& space, const ScalarField& f,
                              std::span<const double> radii) {
  if (radii.empty())
    throw ValidationError("grad_maximal_star needs at least one radius");
  ScalarField out(space.n(), 0.0);
  for (double r : radii) {
    ConvolutionResult u = discrete_convolution(space, f, r);
    GradientField g = discrete_gradient(space, u.field);
    for (int x = 0; x < space.n(); ++x) out[x] = std::max(out[x], g[x]);
  }
  return out;
}

namespace {

// Best edge field for fixed psi: maximize sum_e q_e Phi_e subject to
// |Phi_e| <= 1 and |div Phi| <= 1/r everywhere (ranged rows). Phi is split
// into positive and negative parts so the zero field is a feasible slack
// start. One skeleton per thread; costs and the divergence budget are
// rewritten per solve.
struct PhiStep {
  double value = 0;
  std::vector<double> phi;  // oriented a->b values per edge
};

class PhiSolver {
 public:
  explicit PhiSolver(const Space& space) : space_(space) {
    const auto& edges = space.edges();
    const int ne = int(edges.size());
    auto div_coeff = [&](int e, int x) {
      const Edge& ed = edges[e];
      double v = 1.0 / (ed.length * space.measure(x));
      return ed.a == x ? v : -v;
    };
    for (int x = 0; x < space.n(); ++x) p_.add_ranged_row(-1.0, 1.0);
    for (int e = 0; e < ne; ++e) {
      const Edge& ed = edges[e];
      double ca = div_coeff(e, ed.a), cb = div_coeff(e, ed.b);
      p_.add_col({{{ed.a, ca}, {ed.b, cb}}, 0.0, 1.0});
      p_.add_col({{{ed.a, -ca}, {ed.b, -cb}}, 0.0, 1.0});
    }
  }

  PhiStep solve(double radius, const std::vector<double>& q) {
    const int ne = int(space_.edges().size());
    for (int x = 0; x < space_.n(); ++x) {
      p_.rhs[x] = 1.0 / radius;
      p_.range[x] = 2.0 / radius;
    }
    for (int e = 0; e < ne; ++e) {
      p_.cols[2 * e].cost = q[e];
      p_.cols[2 * e + 1].cost = -q[e];
    }
    lp::Solution sol = lp::solve(p_);
    if (sol.status != lp::Status::Optimal)
      throw std::runtime_error("edge-field LP failed");
    PhiStep out;
    out.value = sol.objective;
    out.phi.assign(ne, 0.0);
    for (int e = 0; e < ne; ++e) out.phi[e] = sol.x[2 * e] - sol.x[2 * e + 1];
    return out;
  }

 private:
  const Space& space_;
  lp::Problem p_;
};

}  // namespace

GradPlusResult grad_plus(const Space& space, const BallFamily& balls,
                         const ScalarField& f) {
  const auto& edges = space.edges();
  const int ne = int(edges.size());
  std::vector<double> gradf(ne);
  for (int e = 0; e < ne; ++e)
    gradf[e] = (f[edges[e].b] - f[edges[e].a]) / edges[e].length;

  // Sound per-ball cap from the pairing identity: after recentering f by
  // its ball mean, |objective| <= sum over touching edges of the mean
  // oscillation times the edge Lipschitz room, plus the divergence term
  // (1/(r mu B)) sum_B |f - f_B| mu. Balls that cannot beat
  // already-achieved values anywhere are skipped; the pointwise sup is
  // unchanged because the cap dominates the alternation value.
  std::vector<double> caps(balls.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi) {
    const Ball& B = balls.balls[bi];
    std::vector<double> beta(space.n(), 0.0);
    const double lip = 1.0 / (B.radius * B.mass);
    for (int y : B.members) beta[y] = 1.0 / B.mass;
    for (const Edge& e : edges) {
      bool ina = beta[e.a] > 0, inb = beta[e.b] > 0;
      if (ina && !inb) beta[e.a] = std::min(beta[e.a], e.length * lip);
      if (inb && !ina) beta[e.b] = std::min(beta[e.b], e.length * lip);
    }
    double fB = 0;
    for (int y : B.members) fB += f[y] * space.measure(y);
    fB /= B.mass;
    double cap = 0;
    for (int e = 0; e < ne; ++e) {
      double ba = beta[edges[e].a], bb = beta[edges[e].b];
      if (ba == 0 && bb == 0) continue;
      double osc =
          0.5 * (std::abs(f[edges[e].a] - fB) + std::abs(f[edges[e].b] - fB));
      cap += osc * std::min(lip, (ba + bb) / edges[e].length);
    }
    double divterm = 0;
    for (int y : B.members)
      divterm += std::abs(f[y] - fB) * space.measure(y);
    caps[bi] = cap + divterm * lip;
  }
  std::vector<int> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (caps[a] != caps[b]) return caps[a] > caps[b];
    return a < b;
  });

  std::vector<double> lb(space.n(), 0.0);
  std::vector<double> seed_vals(balls.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < balls.size(); ++bi) {
    const Ball& B = balls.balls[bi];
    // tent psi and the largest feasible multiple of sign(q): both sides
    // feasible, so the pairing value is an honest floor
    std::vector<double> q(ne, 0.0);
    bool any = false;
    for (int e = 0; e < ne; ++e) {
      double pa = 0, pb = 0;
      double ta = 1.0 - space.dist(B.center, edges[e].a) / B.radius;
      double tb = 1.0 - space.dist(B.center, edges[e].b) / B.radius;
      if (ta > 0 && space.dist(B.center, edges[e].a) <= B.radius)
        pa = ta / B.mass;
      if (tb > 0 && space.dist(B.center, edges[e].b) <= B.radius)
        pb = tb / B.mass;
      if (pa != 0 || pb != 0) {
        q[e] = gradf[e] * 0.5 * (pa + pb);
        any = any || q[e] != 0;
      }
    }
    if (!any) continue;
    double worst_div = 0;
    for (int x = 0; x < space.n(); ++x) {
      double div = 0;
      for (int ei : space.incident_edges(x)) {
        const Edge& ed = edges[ei];
        double sgn = (ed.a == x) ? 1.0 : -1.0;
        double phi_e = q[ei] > 0 ? 1.0 : (q[ei] < 0 ? -1.0 : 0.0);
        div += sgn * phi_e / (ed.length * space.measure(x));
      }
      worst_div = std::max(worst_div, std::abs(div));
    }
    double t = worst_div > 0 ? std::min(1.0, 1.0 / (B.radius * worst_div))
                             : 1.0;
    double val = 0;
    for (int e = 0; e < ne; ++e) val += std::abs(q[e]);
    seed_vals[bi] = t * val;
  }
  for (int bi = 0; bi < balls.size(); ++bi)
    for (int y : balls.balls[bi].members)
      lb[y] = std::max(lb[y], seed_vals[bi]);
  std::vector<double> vals(seed_vals);  // pruned balls keep their floor
  bool certified = true;
  bool failed = false;
  const int wave = std::max<int>(64, balls.size() / 16);
  for (size_t wstart = 0; wstart < order.size(); wstart += wave) {
    std::vector<int> active;
    for (size_t oi = wstart; oi < std::min(order.size(), wstart + wave); ++oi) {
      int bi = order[oi];
      for (int y : balls.balls[bi].members)
        if (caps[bi] > lb[y] * (1 + 1e-12)) {
          active.push_back(bi);
          break;
        }
    }
#pragma omp parallel reduction(&& : certified) reduction(|| : failed)
  {
    PhiSolver phi_solver(space);
    std::vector<int> pos(space.n(), -1);
#pragma omp for schedule(dynamic)
    for (size_t ai = 0; ai < active.size(); ++ai) {
      const int bi = active[ai];
      if (failed) continue;
      try {
        const Ball& B = balls.balls[bi];
        for (size_t i = 0; i < B.members.size(); ++i)
          pos[B.members[i]] = int(i);
        detail::T1Solver t1(space, B);

        // start from the normalized tent, which lies in the T1 polytope
        std::vector<double> psi(B.members.size());
        for (size_t i = 0; i < B.members.size(); ++i) {
          double t = 1.0 - space.dist(B.center, B.members[i]) / B.radius;
          psi[i] = std::max(t, 0.0) / B.mass;
        }

        double best = 0;
        bool stationary = false;
        std::vector<double> q(ne), w(B.members.size());
        for (int round = 0; round < 50; ++round) {
          // fixed psi: objective per edge is grad f(e) * mean psi over ends
          for (int e = 0; e < ne; ++e) {
            double pa = pos[edges[e].a] >= 0 ? psi[pos[edges[e].a]] : 0.0;
            double pb = pos[edges[e].b] >= 0 ? psi[pos[edges[e].b]] : 0.0;
            q[e] = (pa != 0 || pb != 0) ? gradf[e] * 0.5 * (pa + pb) : 0.0;
          }
          PhiStep phi = phi_solver.solve(B.radius, q);
          // fixed Phi: weight on psi_y is half the incident pairing mass
          std::fill(w.begin(), w.end(), 0.0);
          for (int e = 0; e < ne; ++e) {
            if (phi.phi[e] == 0 || gradf[e] == 0) continue;
            double contrib = 0.5 * gradf[e] * phi.phi[e];
            if (pos[edges[e].a] >= 0) w[pos[edges[e].a]] += contrib;
            if (pos[edges[e].b] >= 0) w[pos[edges[e].b]] += contrib;
          }
          double value = 0;
          std::vector<double> next = t1.argmax(w, &value);
          if (value <= best * (1 + 3e-8) + 1e-13) {
            best = std::max(best, value);
            stationary = true;
            break;
          }
          best = value;
          psi = std::move(next);
        }
        vals[bi] = best;
        certified = certified && stationary;
        for (int y : balls.balls[bi].members) pos[y] = -1;
      } catch (...) {
        failed = true;
      }
    }
  }
  if (failed) break;
  for (int bi : active)
    for (int y : balls.balls[bi].members)
      lb[y] = std::max(lb[y], vals[bi]);
  }
  if (failed) throw std::runtime_error("grad_plus: an LP step failed");

  GradPlusResult res;
  res.certified = certified;
  res.field = sup_incident(balls, space.n(), vals, nullptr);
  return res;
}

}  // namespace hs
