#include "hs/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hs::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Space space_from_json(const json& j) {
  int n = j.at("n").get<int>();
  std::string metric_kind = j.at("metric").get<std::string>();
  std::vector<double> metric(size_t(n) * n, 0.0);
  if (metric_kind == "matrix") {
    const auto& rows = j.at("distances");
    if (int(rows.size()) != n) throw ValidationError("distances shape");
    for (int i = 0; i < n; ++i) {
      if (int(rows[i].size()) != n) throw ValidationError("distances shape");
      for (int k = 0; k < n; ++k) metric[size_t(i) * n + k] = rows[i][k];
    }
  } else if (metric_kind == "euclidean") {
    const auto& coords = j.at("coords");
    if (int(coords.size()) != n) throw ValidationError("coords shape");
    std::vector<std::array<double, 2>> pts(n);
    for (int i = 0; i < n; ++i)
      pts[i] = {coords[i][0].get<double>(), coords[i][1].get<double>()};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        metric[size_t(i) * n + k] = std::hypot(pts[i][0] - pts[k][0],
                                               pts[i][1] - pts[k][1]);
    std::vector<double> measure = j.at("measure").get<std::vector<double>>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e[0].get<int>(), e[1].get<int>(), 0.0});
    return Space(std::move(metric), std::move(measure), std::move(edges),
                 std::move(pts));
  } else {
    throw ValidationError("metric must be 'matrix' or 'euclidean'");
  }
  std::vector<double> measure = j.at("measure").get<std::vector<double>>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e[0].get<int>(), e[1].get<int>(), 0.0});
  return Space(std::move(metric), std::move(measure), std::move(edges));
}

json space_to_json(const Space& space) {
  json j;
  j["n"] = space.n();
  if (space.has_coords()) {
    j["metric"] = "euclidean";
    json coords = json::array();
    for (const auto& c : space.coords()) coords.push_back({c[0], c[1]});
    j["coords"] = coords;
  } else {
    j["metric"] = "matrix";
    json rows = json::array();
    for (int i = 0; i < space.n(); ++i) {
      json row = json::array();
      for (int k = 0; k < space.n(); ++k) row.push_back(space.dist(i, k));
      rows.push_back(row);
    }
    j["distances"] = rows;
  }
  json mu = json::array();
  for (int i = 0; i < space.n(); ++i) mu.push_back(space.measure(i));
  j["measure"] = mu;
  json edges = json::array();
  for (const Edge& e : space.edges()) edges.push_back({e.a, e.b});
  j["edges"] = edges;
  return j;
}

Space load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open space file: " + path);
  json j;
  in >> j;
  return space_from_json(j);
}

void save_space(const Space& space, const std::string& path) {
  write_text(path, space_to_json(space).dump(2) + "\n");
}

ScalarField load_field(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,value", 0) != 0)
    throw ValidationError("field CSV must start with header 'id,value'");
  ScalarField f(n, 0.0);
  std::vector<char> seen(n, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int id;
    double v;
    if (std::sscanf(line.c_str(), "%d,%lf", &id, &v) != 2)
      throw ValidationError("bad field row: " + line);
    if (id < 0 || id >= n) throw ValidationError("field id out of range");
    if (seen[id]) throw ValidationError("duplicate field id");
    seen[id] = 1;
    f[id] = v;
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i])
      throw ValidationError("field file missing id " + std::to_string(i));
  return f;
}

void save_field(const ScalarField& f, const std::string& path) {
  std::ostringstream out;
  out << "id,value\n";
  for (size_t i = 0; i < f.size(); ++i) out << i << "," << fmt(f[i]) << "\n";
  write_text(path, out.str());
}

json certificate_to_json(const HajlaszCertificate& cert) {
  json j;
  j["value"] = cert.value;
  j["g"] = cert.g;
  j["slack"] = cert.slack;
  j["dual_bound"] = cert.dual_bound;
  return j;
}

json cover_to_json(const WhitneyCover& cover) {
  json j;
  j["c1"] = cover.c1;
  json centers = json::array(), radii = json::array();
  for (const Ball& b : cover.covering) centers.push_back(b.center);
  for (double r : cover.radii) radii.push_back(r);
  j["centers"] = centers;
  j["radii"] = radii;
  j["K"] = cover.overlap;
  return j;
}

namespace {

json sparse_field(const ScalarField& v) {
  json j = json::object();
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) j[std::to_string(i)] = v[i];
  return j;
}

}  // namespace

json cz_to_json(const CzDecomposition& dec, const CzReport& report) {
  json j;
  j["alpha"] = dec.alpha;
  j["q"] = dec.q;
  j["flavor"] = to_string(dec.flavor);
  j["cover"] = cover_to_json(dec.cover);
  j["c"] = dec.c;
  if (!dec.m11_points.empty()) j["m11_points"] = dec.m11_points;
  json b = json::array();
  for (const auto& bi : dec.b) b.push_back(sparse_field(bi));
  j["b"] = b;
  j["g"] = dec.g;
  json rep;
  rep["ball_count"] = report.ball_count;
  rep["K"] = report.overlap;
  rep["reconstruction_inf"] = report.reconstruction_inf;
  rep["support_exact"] = report.support_exact;
  rep["c_g"] = report.c_g;
  rep["c_g_sup"] = report.c_g_sup;
  rep["c_b1"] = report.c_b1;
  rep["c_bq"] = report.c_bq;
  rep["c_B"] = report.c_B;
  if (dec.flavor == CzFlavor::M11) {
    rep["m11_center_bound"] = report.m11_center_bound;
    rep["m11_fstar_bound"] = report.m11_fstar_bound;
  }
  j["report"] = rep;
  return j;
}

json atomic_to_json(const AtomicDecomposition& dec) {
  json j;
  j["flavor"] = to_string(dec.flavor);
  j["gamma"] = dec.gamma;
  j["t"] = dec.t;
  j["q"] = dec.q;
  j["j_min"] = dec.j_min;
  j["j_max"] = dec.j_max;
  json atoms = json::array();
  for (const Atom& a : dec.atoms) {
    json aj;
    aj["ball"] = {{"center", a.ball.center}, {"radius", a.ball.radius}};
    aj["lambda"] = a.lambda;
    aj["level"] = a.level;
    aj["values"] = sparse_field(a.values);
    atoms.push_back(aj);
  }
  j["atoms"] = atoms;
  j["residual"] = dec.residual;
  j["l1_sum"] = dec.l1_sum;
  json checks;
  checks["l1_ratio"] = dec.l1_ratio;
  checks["level_sum_err"] = dec.level_sum_err;
  checks["level_ckl_err"] = dec.level_ckl_err;
  checks["level_sup_ratio"] = dec.level_sup_ratio;
  j["checks"] = checks;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
}

}  // namespace hs::io
