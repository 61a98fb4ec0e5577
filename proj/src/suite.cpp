#include "hs/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "hs/atomic.hpp"
#include "hs/balls.hpp"
#include "hs/czd.hpp"
#include "hs/fields.hpp"
#include "hs/hajlasz.hpp"
#include "hs/io.hpp"
#include "hs/maxfn.hpp"
#include "hs/simplex.hpp"

namespace hs {

Space build_fixture(const FixtureSpec& spec) {
  if (spec.kind == "path") return build_path(spec.n, spec.spacing);
  if (spec.kind == "cycle") return build_cycle(spec.n);
  if (spec.kind == "grid") return build_grid(spec.n);
  if (spec.kind == "cloud") return build_cloud(spec.n, spec.seed);
  throw ValidationError("unknown fixture kind: " + spec.kind);
}

SuiteConfig SuiteConfig::defaults() {
  SuiteConfig cfg;
  cfg.fixtures = {
      {"p4", "path", 4, 0, 1.0},      {"cycle8", "cycle", 8, 0, 1.0},
      {"grid4x4", "grid", 4, 0, 1.0}, {"cloud64", "cloud", 64, 7, 1.0},
      {"cloud256", "cloud", 256, 11, 1.0},
  };
  cfg.a2_clouds = {
      {"cloud16", "cloud", 16, 7, 1.0},
      {"cloud64", "cloud", 64, 7, 1.0},
      {"cloud256", "cloud", 256, 11, 1.0},
  };
  cfg.fields = {"linear", "bump", "random-lipschitz", "indicator-smoothed"};
  cfg.criteria = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
  return cfg;
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
  SuiteConfig cfg = defaults();
  auto parse_fixtures = [](const nlohmann::json& arr) {
    std::vector<FixtureSpec> out;
    for (const auto& f : arr) {
      FixtureSpec spec;
      spec.name = f.at("name").get<std::string>();
      spec.kind = f.at("kind").get<std::string>();
      spec.n = f.at("n").get<int>();
      if (f.contains("seed")) spec.seed = f["seed"].get<std::uint64_t>();
      if (f.contains("spacing")) spec.spacing = f["spacing"].get<double>();
      out.push_back(spec);
    }
    return out;
  };
  if (j.contains("fixtures")) cfg.fixtures = parse_fixtures(j["fixtures"]);
  if (j.contains("a2_clouds")) cfg.a2_clouds = parse_fixtures(j["a2_clouds"]);
  if (j.contains("fields"))
    cfg.fields = j["fields"].get<std::vector<std::string>>();
  if (j.contains("criteria"))
    cfg.criteria = j["criteria"].get<std::vector<std::string>>();
  if (j.contains("field_seed"))
    cfg.field_seed = j["field_seed"].get<std::uint64_t>();
  if (j.contains("atom_corpus")) cfg.atom_corpus = j["atom_corpus"].get<int>();
  return cfg;
}

bool SuiteReport::all_pass() const { return fail_count() == 0; }

int SuiteReport::fail_count() const {
  int n = 0;
  for (const auto& r : rows)
    if (!r.pass) ++n;
  return n;
}

namespace {

struct FixtureData {
  FixtureSpec spec;
  Space space;
  BallFamily balls;
  DoublingProfile prof;
  double q = 0;
  std::map<std::string, ScalarField> fields;
  std::map<std::string, ScalarField> nf;  // sobolev sharp per field
  bool big = false;                       // n > 128: tent grand maximal
};

double linf(const ScalarField& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l1(const Space& s, const ScalarField& v) {
  double acc = 0;
  for (int x = 0; x < s.n(); ++x) acc += std::abs(v[x]) * s.measure(x);
  return acc;
}

class Runner {
 public:
  Runner(const SuiteConfig& cfg) : cfg_(cfg) {}

  SuiteReport run() {
    load_fixtures();
    for (const std::string& c : cfg_.criteria) {
      auto t0 = std::chrono::steady_clock::now();
      if (c == "A1") a1();
      else if (c == "A2") a2();
      else if (c == "A3") a3();
      else if (c == "A4") a4();
      else if (c == "A5") a5();
      else if (c == "A6") a6();
      else if (c == "A7") a7();
      else if (c == "A8") a8();
      else
        row(c, "unknown-criterion", "-", "-", 1, 0, false,
            "unrecognized criterion id");
      double dt = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      rep_.timings.push_back({c, dt});
    }
    return std::move(rep_);
  }

 private:
  const SuiteConfig& cfg_;
  SuiteReport rep_;
  std::vector<FixtureData> fx_;
  std::map<std::string, FixtureData> a2fx_;

  void row(const std::string& criterion, const std::string& check,
           const std::string& fixture, const std::string& field, double value,
           double ceiling, bool pass, const std::string& note = "") {
    rep_.rows.push_back({criterion, check, fixture, field, value, ceiling,
                         pass, note});
  }

  FixtureData make_fixture(const FixtureSpec& spec) {
    FixtureData d{spec, build_fixture(spec), {}, {}, 0, {}, {}, false};
    d.balls = enumerate_balls(d.space);
    d.prof = doubling_profile(d.space);
    d.q = default_q(d.prof);
    d.big = d.space.n() > 128;
    for (const std::string& kind : cfg_.fields) {
      d.fields[kind] = generate_field(d.space, kind, cfg_.field_seed);
      d.nf[kind] = sobolev_sharp(d.space, d.balls, d.fields[kind]);
    }
    return d;
  }

  void load_fixtures() {
    for (const FixtureSpec& spec : cfg_.fixtures) {
      try {
        fx_.push_back(make_fixture(spec));
        const FixtureData& d = fx_.back();
        rep_.env.push_back({spec.name, d.space.n(), spec.seed, d.q, d.prof.s,
                            d.prof.c_d});
      } catch (const std::exception& e) {
        row("setup", "fixture-build", spec.name, "-", 1, 0, false, e.what());
      }
    }
    for (const FixtureSpec& spec : cfg_.a2_clouds) {
      try {
        if (a2fx_.count(spec.name)) continue;
        bool in_main = false;
        for (const FixtureData& d : fx_)
          if (d.spec.name == spec.name) {
            in_main = true;
            break;
          }
        if (!in_main) a2fx_.emplace(spec.name, make_fixture(spec));
      } catch (const std::exception& e) {
        row("setup", "fixture-build", spec.name, "-", 1, 0, false, e.what());
      }
    }
  }

  const FixtureData* a2_fixture(const std::string& name) {
    for (const FixtureData& d : fx_)
      if (d.spec.name == name) return &d;
    auto it = a2fx_.find(name);
    if (it != a2fx_.end()) return &it->second;
    return nullptr;
  }

  template <class F>
  void guarded(const std::string& criterion, const std::string& check,
               const std::string& fixture, const std::string& field, F&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      row(criterion, check, fixture, field, std::nan(""), 0, false, e.what());
    }
  }

  // ---- A1: pointwise two-sided comparison of N and the Calderon maximal
  void a1() {
    for (const FixtureData& d : fx_) {
      double c2 = 1 + 16 * d.prof.c_d * d.prof.c_d;
      for (const auto& [kind, f] : d.fields) {
        guarded("A1", "N<=2star", d.spec.name, kind, [&] {
          const ScalarField& nf = d.nf.at(kind);
          ScalarField fs = calderon_star(d.space, d.balls, f);
          double r1 = 0, r2 = 0;
          for (int x = 0; x < d.space.n(); ++x) {
            if (fs[x] > 0) r1 = std::max(r1, nf[x] / (2 * fs[x]));
            else if (nf[x] > 0) r1 = std::numeric_limits<double>::infinity();
            if (nf[x] > 0) r2 = std::max(r2, fs[x] / (c2 * nf[x]));
            else if (fs[x] > 0) r2 = std::numeric_limits<double>::infinity();
          }
          row("A1", "N<=2star", d.spec.name, kind, r1, 1 + 1e-12,
              r1 <= 1 + 1e-12);
          row("A1", "star<=(1+16cd^2)N", d.spec.name, kind, r2, 1 + 1e-9,
              r2 <= 1 + 1e-9);
        });
      }
    }
  }

  // ---- A2: Hajlasz seminorm versus the Sobolev sharp mass
  void a2() {
    std::map<std::string, std::vector<double>> ratios;  // field -> per cloud
    auto check_one = [&](const FixtureData& d, const std::string& kind,
                         bool scaling_cloud) {
      guarded("A2", "ratio", d.spec.name, kind, [&] {
        const ScalarField& f = d.fields.at(kind);
        const ScalarField& nf = d.nf.at(kind);
        HajlaszCertificate cert = hajlasz_norm_lp(d.space, f);
        double nf1 = l1(d.space, nf);
        double ratio = nf1 / cert.value;
        row("A2", "ratio", d.spec.name, kind, ratio, 1e2,
            ratio >= 1e-2 && ratio <= 1e2, "floor 1e-2");
        double mind = std::numeric_limits<double>::infinity();
        for (int x = 0; x < d.space.n(); ++x)
          mind = std::min(mind, d.space.nearest_distance(x));
        double scale = (1 + linf(f)) / mind;
        row("A2", "cert-slack", d.spec.name, kind,
            std::max(0.0, -cert.slack) / scale, 1e-9,
            cert.slack >= -1e-9 * scale);
        double mn = mn_constant(d.space, d.balls, f);
        row("A2", "feasible<=2mn||Nf||", d.spec.name, kind,
            cert.value / (2 * mn * nf1), 1.0,
            cert.value <= 2 * mn * nf1 * (1 + 1e-9));
        if (scaling_cloud) ratios[kind].push_back(ratio);
      });
    };
    for (const FixtureData& d : fx_) {
      bool is_scaling = false;
      for (const FixtureSpec& c : cfg_.a2_clouds)
        if (c.name == d.spec.name) is_scaling = true;
      for (const auto& [kind, f] : d.fields) check_one(d, kind, is_scaling);
    }
    for (const FixtureSpec& spec : cfg_.a2_clouds) {
      bool already = false;
      for (const FixtureData& d : fx_)
        if (d.spec.name == spec.name) already = true;
      if (already) continue;
      const FixtureData* d = a2_fixture(spec.name);
      if (!d) continue;
      for (const auto& [kind, f] : d->fields) check_one(*d, kind, true);
    }
    for (const auto& [kind, rs] : ratios) {
      if (rs.size() < 2) continue;
      double lo = *std::min_element(rs.begin(), rs.end());
      double hi = *std::max_element(rs.begin(), rs.end());
      row("A2", "ratio-spread", "clouds", kind, hi / lo, 10.0,
          hi / lo <= 10.0);
    }
  }

  // ---- A3: Calderon-Zygmund postconditions across flavors and levels
  void a3() {
    // per (flavor, constant name): fixture -> max over fields/alphas
    std::map<std::string, std::map<std::string, double>> spread_data;
    for (const FixtureData& d : fx_) {
      for (CzFlavor flavor :
           {CzFlavor::Homogeneous, CzFlavor::Tilde, CzFlavor::M11}) {
        for (const auto& [kind, f] : d.fields) {
          guarded("A3", std::string("cz-") + to_string(flavor), d.spec.name,
                  kind, [&] {
            ScalarField integrand;
            ScalarField h = cz_level_function(d.space, d.balls, f, d.q,
                                              flavor, d.big, &integrand);
            double lo = *std::min_element(h.begin(), h.end());
            double hi = *std::max_element(h.begin(), h.end());
            double fscale = 1 + linf(f);
            double rec_max = 0, cg = 0, cb1 = 0, cbq = 0, cB = 0;
            double m11c = 0, m11f = 0;
            bool support = true;
            int kmax = 0;
            for (int i = 0; i < 5; ++i) {
              double alpha =
                  lo * std::pow(hi / lo, i / 4.0);  // geometric grid
              std::vector<int> omega;
              for (int x = 0; x < d.space.n(); ++x)
                if (h[x] > alpha) omega.push_back(x);
              CzDecomposition dec = cz_decompose_with_omega(
                  d.space, d.balls, f, d.q, alpha, flavor, std::move(omega),
                  h, d.big);
              dec.integrand = integrand;
              CzReport r =
                  verify_cz(d.space, d.balls, dec, f, d.nf.at(kind));
              rec_max = std::max(rec_max, r.reconstruction_inf / fscale);
              support = support && r.support_exact;
              kmax = std::max(kmax, r.overlap);
              cg = std::max(cg, r.c_g);
              cb1 = std::max(cb1, r.c_b1);
              cbq = std::max(cbq, r.c_bq);
              cB = std::max(cB, r.c_B);
              m11c = std::max(m11c, r.m11_center_bound);
              m11f = std::max(m11f, r.m11_fstar_bound);
            }
            std::string fl = to_string(flavor);
            row("A3", fl + "-reconstruction", d.spec.name, kind, rec_max,
                1e-9, rec_max <= 1e-9);
            row("A3", fl + "-support", d.spec.name, kind, support ? 0 : 1, 0,
                support);
            row("A3", fl + "-overlap", d.spec.name, kind, kmax, 64,
                kmax <= 64);
            row("A3", fl + "-C_g", d.spec.name, kind, cg, 1e3, cg <= 1e3);
            row("A3", fl + "-C_b1", d.spec.name, kind, cb1, 1e3, cb1 <= 1e3);
            row("A3", fl + "-C_bq", d.spec.name, kind, cbq, 1e3, cbq <= 1e3);
            row("A3", fl + "-C_B", d.spec.name, kind, cB, 1e3, cB <= 1e3);
            if (flavor == CzFlavor::M11) {
              row("A3", "m11-center<=2alpha", d.spec.name, kind, m11c, 1.0,
                  m11c <= 1.0);
              row("A3", "m11-fstar<=cq-alpha", d.spec.name, kind, m11f, 1.0,
                  m11f <= 1.0);
            }
            for (auto [name, v] : std::initializer_list<
                     std::pair<const char*, double>>{
                     {"C_g", cg}, {"C_b1", cb1}, {"C_bq", cbq}, {"C_B", cB}})
              spread_data[fl + "-" + name][d.spec.name] =
                  std::max(spread_data[fl + "-" + name][d.spec.name], v);
          });
        }
      }
    }
    for (const auto& [name, per_fixture] : spread_data) {
      std::vector<double> vals;
      for (const auto& [fixture, v] : per_fixture)
        if (v > 0) vals.push_back(v);
      double spread = 1.0;
      if (vals.size() >= 2)
        spread = *std::max_element(vals.begin(), vals.end()) /
                 *std::min_element(vals.begin(), vals.end());
      row("A3", name + "-spread", "matrix", "-", spread, 10.0, spread <= 10.0,
          "positive per-fixture maxima");
    }
  }

  // ---- A4: atomic decomposition identities, validation, l1 control
  void a4() {
    std::map<std::string, std::map<std::string, double>> spread_data;
    for (const FixtureData& d : fx_) {
      for (AtomFlavor flavor : {AtomFlavor::HsMoment, AtomFlavor::HsSize,
                                AtomFlavor::HsNonhomog, AtomFlavor::Ls}) {
        for (const auto& [kind, f] : d.fields) {
          guarded("A4", std::string("atomic-") + to_string(flavor),
                  d.spec.name, kind, [&] {
            AtomicDecomposition dec =
                atomic_decompose(d.space, d.balls, f, flavor, d.q, d.big);
            double fscale = 1 + linf(f);
            int bad_atoms = 0;
            for (const Atom& a : dec.atoms)
              if (!validate_atom(d.space, a.values, a.ball, flavor, dec.t)
                       .pass)
                ++bad_atoms;
            double sum_err = 0, ckl_err = 0;
            for (double e : dec.level_sum_err) sum_err = std::max(sum_err, e);
            for (double e : dec.level_ckl_err) ckl_err = std::max(ckl_err, e);
            ReconstructionReport rec = reconstruct(d.space, dec, f);
            const ScalarField& nf = d.nf.at(kind);
            double nf1 = l1(d.space, nf);
            double denom =
                flavor == AtomFlavor::Ls ? l1(d.space, f) + nf1 : nf1;
            double c_l1 = denom > 0 ? dec.l1_sum / denom : 0.0;
            GradientField gr = discrete_gradient(d.space, dec.residual);
            double c_res =
                linf(ScalarField(gr.begin(), gr.end())) /
                std::ldexp(1.0, dec.j_min);

            std::string fl = to_string(flavor);
            row("A4", fl + "-atoms-valid", d.spec.name, kind, bad_atoms, 0,
                bad_atoms == 0,
                std::to_string(dec.atoms.size()) + " atoms");
            row("A4", fl + "-level-sum", d.spec.name, kind, sum_err / fscale,
                1e-12, sum_err <= 1e-12 * fscale);
            row("A4", fl + "-ckl-sum", d.spec.name, kind, ckl_err / fscale,
                1e-12, ckl_err <= 1e-12 * fscale);
            double mu = d.space.total_measure();
            double rec_err = std::max(
                {rec.sup_err / fscale, rec.l1_err / (fscale * mu),
                 rec.w11_err / (fscale * mu)});
            row("A4", fl + "-reconstruction", d.spec.name, kind, rec_err,
                1e-9, rec_err <= 1e-9);
            row("A4", fl + "-l1-control", d.spec.name, kind, c_l1, 1e3,
                c_l1 <= 1e3);
            row("A4", fl + "-residual-grad", d.spec.name, kind, c_res, 1e3,
                c_res <= 1e3);
            spread_data[fl]["" + d.spec.name] =
                std::max(spread_data[fl][d.spec.name], c_l1);
          });
        }
      }
    }
    for (const auto& [fl, per_fixture] : spread_data) {
      std::vector<double> vals;
      for (const auto& [fixture, v] : per_fixture)
        if (v > 0) vals.push_back(v);
      double spread = 1.0;
      if (vals.size() >= 2)
        spread = *std::max_element(vals.begin(), vals.end()) /
                 *std::min_element(vals.begin(), vals.end());
      row("A4", fl + "-l1-spread", "matrix", "-", spread, 10.0,
          spread <= 10.0, "positive per-fixture maxima");
    }
  }

  // ---- A5: grand maximal mass of seeded H1 atoms
  void a5() {
    for (const FixtureData& d : fx_) {
      guarded("A5", "atom-plus-mass", d.spec.name, "-", [&] {
        double worst = 0;
        for (int i = 0; i < cfg_.atom_corpus; ++i) {
          SeededAtom atom = make_h1_atom(d.space, d.balls, 2.0,
                                         cfg_.field_seed * 1000 + i);
          AtomReport rep = validate_atom(d.space, atom.values, atom.ball,
                                         AtomFlavor::H1, 2.0);
          if (!rep.pass)
            throw std::runtime_error("seeded atom failed validation");
          worst = std::max(
              worst, h1_atom_grand_maximal_norm(d.space, d.balls, atom.values));
        }
        row("A5", "atom-plus-mass", d.spec.name, "-", worst, 1e2,
            worst <= 1e2,
            std::to_string(cfg_.atom_corpus) + " seeded (1,2)-atoms");
      });
    }
  }

  // ---- A6: edge-gradient pairing dominated by N
  void a6() {
    for (const FixtureData& d : fx_) {
      if (d.space.n() > 64) continue;
      double ce = 1.0 + d.space.max_degree();
      for (const auto& [kind, f] : d.fields) {
        guarded("A6", "gradplus<=CE-N", d.spec.name, kind, [&] {
          GradPlusResult gp = grad_plus(d.space, d.balls, f);
          const ScalarField& nf = d.nf.at(kind);
          double r = 0;
          for (int x = 0; x < d.space.n(); ++x) {
            if (nf[x] > 0) r = std::max(r, gp.field[x] / (ce * nf[x]));
            else if (gp.field[x] > 0)
              r = std::numeric_limits<double>::infinity();
          }
          row("A6", "gradplus<=CE-N", d.spec.name, kind, r, 1 + 1e-9,
              r <= 1 + 1e-9,
              gp.certified ? "certified" : "alternation cap hit");
        });
      }
      if (d.space.n() <= 8) {
        for (const auto& [kind, f] : d.fields) {
          guarded("A6", "oracle-match", d.spec.name, kind, [&] {
            GradPlusResult gp = grad_plus(d.space, d.balls, f);
            ScalarField oracle = grad_plus_oracle(d.space, d.balls, f);
            double scale = 1 + linf(oracle);
            double err = 0;
            for (int x = 0; x < d.space.n(); ++x)
              err = std::max(err,
                             std::abs(gp.field[x] - oracle[x]) / scale);
            row("A6", "oracle-match", d.spec.name, kind, err, 1e-6,
                err <= 1e-6);
          });
        }
      }
    }
  }

  // Brute-force reference for the bilinear pairing: enumerate the vertices
  // of the T1 polytope (tight-subset search) and solve the edge-field LP at
  // each; the bilinear maximum over the product polytope is attained at
  // such a pair. Affordable only for the n <= 8 fixtures.
  ScalarField grad_plus_oracle(const Space& s, const BallFamily& balls,
                               const ScalarField& f) {
    const auto& edges = s.edges();
    const int ne = int(edges.size());
    std::vector<double> gradf(ne);
    for (int e = 0; e < ne; ++e)
      gradf[e] = (f[edges[e].b] - f[edges[e].a]) / edges[e].length;

    ScalarField out(s.n(), 0.0);
    for (const Ball& B : balls.balls) {
      const int k = int(B.members.size());
      std::vector<int> pos(s.n(), -1);
      for (int i = 0; i < k; ++i) pos[B.members[i]] = i;
      std::vector<std::vector<double>> A;
      std::vector<double> rhs;
      const double lip = 1.0 / (B.radius * B.mass);
      auto addrow = [&](int i, double vi, int j, double vj, double b) {
        std::vector<double> rowv(k, 0.0);
        rowv[i] = vi;
        if (j >= 0) rowv[j] = vj;
        A.push_back(rowv);
        rhs.push_back(b);
      };
      for (int i = 0; i < k; ++i) {
        addrow(i, 1.0, -1, 0, 1.0 / B.mass);
        addrow(i, -1.0, -1, 0, 1.0 / B.mass);
      }
      for (const Edge& e : edges) {
        int u = pos[e.a], v = pos[e.b];
        if (u >= 0 && v >= 0) {
          addrow(u, 1.0, v, -1.0, e.length * lip);
          addrow(u, -1.0, v, 1.0, e.length * lip);
        } else if (u >= 0) {
          addrow(u, 1.0, -1, 0, e.length * lip);
          addrow(u, -1.0, -1, 0, e.length * lip);
        } else if (v >= 0) {
          addrow(v, 1.0, -1, 0, e.length * lip);
          addrow(v, -1.0, -1, 0, e.length * lip);
        }
      }
      std::vector<std::vector<double>> verts;
      const int m = int(A.size());
      std::vector<int> comb(k);
      std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
          std::vector<std::vector<double>> M(k, std::vector<double>(k + 1));
          for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) M[i][j] = A[comb[i]][j];
            M[i][k] = rhs[comb[i]];
          }
          for (int col = 0; col < k; ++col) {
            int piv = -1;
            double bestv = 1e-9;
            for (int r = col; r < k; ++r)
              if (std::abs(M[r][col]) > bestv)
                bestv = std::abs(M[r][col]), piv = r;
            if (piv < 0) return;
            std::swap(M[col], M[piv]);
            for (int r = 0; r < k; ++r) {
              if (r == col) continue;
              double fct = M[r][col] / M[col][col];
              if (fct == 0) continue;
              for (int j = col; j <= k; ++j) M[r][j] -= fct * M[col][j];
            }
          }
          std::vector<double> x(k);
          for (int i = 0; i < k; ++i) x[i] = M[i][k] / M[i][i];
          for (int r = 0; r < m; ++r) {
            double acc = 0;
            for (int j = 0; j < k; ++j) acc += A[r][j] * x[j];
            if (acc > rhs[r] + 1e-8) return;
          }
          for (const auto& v : verts) {
            double diff = 0;
            for (int j = 0; j < k; ++j)
              diff = std::max(diff, std::abs(v[j] - x[j]));
            if (diff < 1e-9) return;
          }
          verts.push_back(std::move(x));
          return;
        }
        for (int i = start; i + (k - depth - 1) < m; ++i) {
          comb[depth] = i;
          rec(i + 1, depth + 1);
        }
      };
      rec(0, 0);

      double best = 0;
      for (const auto& psi : verts) {
        std::vector<double> q(ne, 0.0);
        for (int e = 0; e < ne; ++e) {
          double pa = pos[edges[e].a] >= 0 ? psi[pos[edges[e].a]] : 0.0;
          double pb = pos[edges[e].b] >= 0 ? psi[pos[edges[e].b]] : 0.0;
          if (pa != 0 || pb != 0) q[e] = gradf[e] * 0.5 * (pa + pb);
        }
        lp::Problem p;
        for (int x = 0; x < s.n(); ++x)
          p.add_ranged_row(-1.0 / B.radius, 1.0 / B.radius);
        for (int e = 0; e < ne; ++e) {
          const Edge& ed = edges[e];
          double ca = 1.0 / (ed.length * s.measure(ed.a));
          double cb = -1.0 / (ed.length * s.measure(ed.b));
          p.add_col({{{ed.a, ca}, {ed.b, cb}}, q[e], 1.0});
          p.add_col({{{ed.a, -ca}, {ed.b, -cb}}, -q[e], 1.0});
        }
        lp::Solution sol = lp::solve(p);
        if (sol.status == lp::Status::Optimal)
          best = std::max(best, sol.objective);
      }
      for (int y : B.members) out[y] = std::max(out[y], best);
    }
    return out;
  }

  // ---- A7: discrete convolution bounds and L1 approach
  void a7() {
    for (const FixtureData& d : fx_) {
      double sp = d.space.spacing();
      std::vector<double> radii = {2 * sp, sp, sp / 2, sp / 4};
      for (const auto& [kind, f] : d.fields) {
        guarded("A7", "gradur<=CK-N", d.spec.name, kind, [&] {
          const ScalarField& nf = d.nf.at(kind);
          double worst = 0;
          std::vector<double> l1err;
          int kmax = 0;
          for (double r : radii) {
            ConvolutionResult u = discrete_convolution(d.space, f, r);
            kmax = std::max(kmax, u.overlap);
            GradientField g = discrete_gradient(d.space, u.field);
            for (int x = 0; x < d.space.n(); ++x) {
              if (nf[x] > 0)
                worst = std::max(worst, g[x] / nf[x]);
              else if (g[x] > 0)
                worst = std::numeric_limits<double>::infinity();
            }
            ScalarField diff(d.space.n());
            for (int x = 0; x < d.space.n(); ++x) diff[x] = u.field[x] - f[x];
            l1err.push_back(l1(d.space, diff));
          }
          ScalarField ms = grad_maximal_star(d.space, f, radii);
          for (int x = 0; x < d.space.n(); ++x)
            if (nf[x] > 0) worst = std::max(worst, ms[x] / nf[x]);
          row("A7", "gradur<=CK-N", d.spec.name, kind, worst, 1e2,
              worst <= 1e2, "K=" + std::to_string(kmax));
          double mono = 0;
          for (size_t i = 0; i + 1 < l1err.size(); ++i)
            if (l1err[i] > 0) mono = std::max(mono, l1err[i + 1] / l1err[i]);
          row("A7", "l1-monotone", d.spec.name, kind, mono, 1.05,
              mono <= 1.05);
        });
      }
    }
  }

  // ---- A8: homogeneity / translation / relabeling invariants
  void a8() {
    const double a = -2.5, b = 3.75;
    for (const FixtureData& d : fx_) {
      if (d.space.n() > 128) continue;  // scaled reruns at desk scale
      for (const auto& [kind, f] : d.fields) {
        guarded("A8", "invariance", d.spec.name, kind, [&] {
          ScalarField af(d.space.n()), fpb(d.space.n());
          for (int x = 0; x < d.space.n(); ++x) {
            af[x] = a * f[x];
            fpb[x] = f[x] + b;
          }
          double err = 0;
          auto cmp = [&](const ScalarField& u, const ScalarField& v,
                         double scale_factor) {
            double scale = 1 + linf(v);
            for (int x = 0; x < d.space.n(); ++x)
              err = std::max(err, std::abs(u[x] - scale_factor * v[x]) /
                                      scale / std::abs(a));
          };
          const ScalarField& nf = d.nf.at(kind);
          cmp(sobolev_sharp(d.space, d.balls, af), nf, std::abs(a));
          cmp(sobolev_sharp(d.space, d.balls, fpb), nf, 1.0);
          ScalarField fs = calderon_star(d.space, d.balls, f);
          cmp(calderon_star(d.space, d.balls, af), fs, std::abs(a));
          cmp(calderon_star(d.space, d.balls, fpb), fs, 1.0);
          ScalarField m = hl_maximal(d.space, d.balls, f);
          cmp(hl_maximal(d.space, d.balls, af), m, std::abs(a));
          GrandMode mode = default_grand_mode(d.space.n());
          ScalarField fp = grand_maximal(d.space, d.balls, f, mode);
          cmp(grand_maximal(d.space, d.balls, af, mode), fp, std::abs(a));
          row("A8", "operator-scaling", d.spec.name, kind, err, 1e-9,
              err <= 1e-9);

          // sublinearity of N, M, star on a field pair
          double sub = 0;
          {
            const ScalarField& g = d.fields.at(cfg_.fields.front());
            ScalarField fg(d.space.n());
            for (int x = 0; x < d.space.n(); ++x) fg[x] = f[x] + g[x];
            ScalarField nsum = sobolev_sharp(d.space, d.balls, fg);
            const ScalarField& ng = d.nf.at(cfg_.fields.front());
            for (int x = 0; x < d.space.n(); ++x)
              sub = std::max(sub, (nsum[x] - nf[x] - ng[x]) / (1 + nsum[x]));
            ScalarField msum = hl_maximal(d.space, d.balls, fg);
            ScalarField mg = hl_maximal(d.space, d.balls, g);
            for (int x = 0; x < d.space.n(); ++x)
              sub = std::max(sub, (msum[x] - m[x] - mg[x]) / (1 + msum[x]));
          }
          row("A8", "sublinearity", d.spec.name, kind, sub, 1e-9, sub <= 1e-9);
        });
      }
      guarded("A8", "cz-scale-equivariance", d.spec.name, "bump", [&] {
        const ScalarField& f = d.fields.at("bump");
        ScalarField h = cz_level_function(d.space, d.balls, f, d.q,
                                          CzFlavor::Homogeneous, d.big);
        double lo = *std::min_element(h.begin(), h.end());
        double hi = *std::max_element(h.begin(), h.end());
        double alpha = lo + 0.5 * (hi - lo);
        if (!(alpha > 0)) return;
        auto d1 = cz_decompose(d.space, d.balls, f, d.q, alpha,
                               CzFlavor::Homogeneous, d.big);
        ScalarField f2(f);
        for (double& v : f2) v *= 2;
        auto d2 = cz_decompose(d.space, d.balls, f2, d.q, 2 * alpha,
                               CzFlavor::Homogeneous, d.big);
        double err = 0;
        if (d1.b.size() != d2.b.size()) {
          err = std::numeric_limits<double>::infinity();
        } else {
          double scale = 1 + 2 * linf(f);
          for (int x = 0; x < d.space.n(); ++x)
            err = std::max(err, std::abs(d2.g[x] - 2 * d1.g[x]) / scale);
          for (size_t i = 0; i < d1.b.size(); ++i)
            for (int x = 0; x < d.space.n(); ++x)
              err = std::max(err,
                             std::abs(d2.b[i][x] - 2 * d1.b[i][x]) / scale);
        }
        row("A8", "cz-scale-equivariance", d.spec.name, "bump", err, 1e-9,
            err <= 1e-9);
      });
      guarded("A8", "atomic-j-shift", d.spec.name, "bump", [&] {
        const ScalarField& f = d.fields.at("bump");
        auto d1 = atomic_decompose(d.space, d.balls, f, AtomFlavor::HsMoment,
                                   d.q, d.big);
        ScalarField f2(f);
        for (double& v : f2) v *= 2;
        auto d2 = atomic_decompose(d.space, d.balls, f2, AtomFlavor::HsMoment,
                                   d.q, d.big);
        double err = 0;
        if (d2.j_min != d1.j_min + 1 || d2.j_max != d1.j_max + 1 ||
            d1.atoms.size() != d2.atoms.size()) {
          err = std::numeric_limits<double>::infinity();
        } else {
          for (size_t i = 0; i < d1.atoms.size(); ++i) {
            err = std::max(err, std::abs(d2.atoms[i].lambda -
                                         2 * d1.atoms[i].lambda) /
                                    (1 + 2 * d1.atoms[i].lambda));
            for (int x = 0; x < d.space.n(); ++x)
              err = std::max(err, std::abs(d2.atoms[i].values[x] -
                                           d1.atoms[i].values[x]));
          }
        }
        row("A8", "atomic-j-shift", d.spec.name, "bump", err, 1e-9,
            err <= 1e-9);
      });
    }
    // relabeling invariance of the doubling profile
    guarded("A8", "doubling-relabel", "grid4x4", "-", [&] {
      Space g = build_grid(4);
      auto p1 = doubling_profile(g);
      int n = g.n();
      std::vector<double> metric(size_t(n) * n);
      std::vector<double> mu(n);
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i) {
        mu[i] = g.measure(n - 1 - i);
        for (int j = 0; j < n; ++j)
          metric[size_t(i) * n + j] = g.dist(n - 1 - i, n - 1 - j);
      }
      for (const Edge& e : g.edges())
        edges.push_back({n - 1 - e.a, n - 1 - e.b, e.length});
      Space relabeled(std::move(metric), std::move(mu), std::move(edges));
      auto p2 = doubling_profile(relabeled);
      double err = std::abs(p1.c_d - p2.c_d) / p1.c_d;
      row("A8", "doubling-relabel", "grid4x4", "-", err, 1e-9, err <= 1e-9);
    });
  }
};

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  Runner r(cfg);
  return r.run();
}

void write_report(const SuiteReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "criterion,check,fixture,field,value,ceiling,pass,note\n";
  for (const CheckRow& r : rep.rows)
    csv << r.criterion << "," << r.check << "," << r.fixture << "," << r.field
        << "," << io::fmt(r.value) << "," << io::fmt(r.ceiling) << ","
        << (r.pass ? "pass" : "FAIL") << ",\"" << r.note << "\"\n";
  io::write_text(dir + "/report.csv", csv.str());

  nlohmann::json j;
  j["pass"] = rep.all_pass();
  j["failures"] = rep.fail_count();
  nlohmann::json rows = nlohmann::json::array();
  for (const CheckRow& r : rep.rows) {
    nlohmann::json row;
    row["criterion"] = r.criterion;
    row["check"] = r.check;
    row["fixture"] = r.fixture;
    row["field"] = r.field;
    row["value"] = r.value;
    row["ceiling"] = r.ceiling;
    row["pass"] = r.pass;
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  j["rows"] = rows;
  nlohmann::json env = nlohmann::json::array();
  for (const auto& e : rep.env) {
    nlohmann::json fe;
    fe["fixture"] = e.fixture;
    fe["n"] = e.n;
    fe["seed"] = e.seed;
    fe["q"] = e.q;
    fe["s"] = e.s;
    fe["c_d"] = e.c_d;
    env.push_back(fe);
  }
  j["environment"] = env;
  io::write_text(dir + "/summary.json", j.dump(2) + "\n");

  // wall times vary run to run; they live apart so the artifacts above stay
  // byte-stable
  nlohmann::json t;
  for (const auto& [name, secs] : rep.timings) t[name] = secs;
  io::write_text(dir + "/timings.json", t.dump(2) + "\n");
}

void emit_plotdata(const SuiteReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  // group by (criterion, check, field); use rows whose fixture is a cloud
  std::map<std::string, std::map<int, double>> series;
  for (const CheckRow& r : rep.rows) {
    if (r.fixture.rfind("cloud", 0) != 0) continue;
    int n = std::atoi(r.fixture.c_str() + 5);
    if (n <= 0) continue;
    std::string key = r.criterion + "_" + r.check + "_" + r.field;
    for (char& c : key)
      if (c == '/' || c == ' ' || c == ',') c = '-';
    series[key][n] = r.value;
  }
  for (const auto& [key, pts] : series) {
    std::ostringstream out;
    out << "n,value\n";
    for (const auto& [n, v] : pts) out << n << "," << io::fmt(v) << "\n";
    io::write_text(dir + "/plot_" + key + ".csv", out.str());
  }
}

}  // namespace hs
