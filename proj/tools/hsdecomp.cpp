// Command-line front end: fixture/field generation, the individual
// operators, the decompositions, and the full experiment suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hs/atomic.hpp"
#include "hs/balls.hpp"
#include "hs/czd.hpp"
#include "hs/fields.hpp"
#include "hs/hajlasz.hpp"
#include "hs/io.hpp"
#include "hs/maxfn.hpp"
#include "hs/suite.hpp"
#include "hs/whitney.hpp"

namespace {

hs::Space load_space_arg(const std::string& path) {
  return hs::io::load_space(path);
}

std::vector<double> parse_radii(const std::string& csv) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) out.push_back(std::stod(token));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal functions, Calderon-Zygmund and atomic "
               "decompositions on finite metric measure spaces"};
  app.require_subcommand(1);

  // ---- gen-space
  auto* gen = app.add_subcommand("gen-space", "write a generated space");
  std::string gen_kind, gen_out;
  int gen_n = 16;
  double gen_spacing = 1.0;
  std::uint64_t gen_seed = 1;
  gen->add_option("--kind", gen_kind, "path|cycle|grid|cloud")->required();
  gen->add_option("--n", gen_n, "points (grid: side length)");
  gen->add_option("--spacing", gen_spacing, "path spacing");
  gen->add_option("--seed", gen_seed, "cloud seed");
  gen->add_option("--out", gen_out)->required();

  // ---- gen-field
  auto* gfield = app.add_subcommand("gen-field", "write a generated field");
  std::string gf_space, gf_kind, gf_out;
  std::uint64_t gf_seed = 1;
  gfield->add_option("--space", gf_space)->required();
  gfield->add_option("--kind", gf_kind,
                     "linear|bump|random-lipschitz|indicator-smoothed")
      ->required();
  gfield->add_option("--seed", gf_seed);
  gfield->add_option("--out", gf_out)->required();

  // ---- maxfn
  auto* mx = app.add_subcommand("maxfn", "run one maximal operator");
  std::string mx_op, mx_space, mx_field, mx_out, mx_mode = "lp",
              mx_radii = "1";
  double mx_q = 0.5;
  mx->add_option("--op", mx_op, "m|mq|n|star|plus|grand|ustar")->required();
  mx->add_option("--space", mx_space)->required();
  mx->add_option("--field", mx_field)->required();
  mx->add_option("--q", mx_q, "exponent for mq");
  mx->add_option("--mode", mx_mode, "tent|lp (grand)");
  mx->add_option("--radii", mx_radii, "CSV radii for ustar");
  mx->add_option("--out", mx_out)->required();

  // ---- hajlasz
  auto* hj = app.add_subcommand("hajlasz", "exact seminorm certificate");
  std::string hj_space, hj_field, hj_out;
  hj->add_option("--space", hj_space)->required();
  hj->add_option("--field", hj_field)->required();
  hj->add_option("--out", hj_out)->required();

  // ---- czd
  auto* cz = app.add_subcommand("czd", "Calderon-Zygmund decomposition");
  std::string cz_space, cz_field, cz_flavor, cz_out;
  double cz_alpha = 1.0, cz_q = 0.0;
  bool cz_tent = false;
  cz->add_option("--space", cz_space)->required();
  cz->add_option("--field", cz_field)->required();
  cz->add_option("--flavor", cz_flavor, "homog|tilde|m11")->required();
  cz->add_option("--alpha", cz_alpha)->required();
  cz->add_option("--q", cz_q, "default: midpoint of (s/(s+1),1)");
  cz->add_flag("--tent-grand", cz_tent,
               "tent grand maximal in the tilde level function");
  cz->add_option("--out", cz_out)->required();

  // ---- atomic
  auto* at = app.add_subcommand("atomic", "dyadic atomic decomposition");
  std::string at_space, at_field, at_flavor, at_out;
  double at_q = 0.0;
  bool at_tent = false;
  at->add_option("--space", at_space)->required();
  at->add_option("--field", at_field)->required();
  at->add_option("--flavor", at_flavor,
                 "hs-moment|hs-size|hs-nonhomog|ls")
      ->required();
  at->add_option("--q", at_q);
  at->add_flag("--tent-grand", at_tent);
  at->add_option("--out", at_out)->required();

  // ---- whitney
  auto* wh = app.add_subcommand("whitney", "Whitney cover of a point set");
  std::string wh_space, wh_omega, wh_out;
  wh->add_option("--space", wh_space)->required();
  wh->add_option("--omega", wh_omega, "CSV point ids")->required();
  wh->add_option("--out", wh_out)->required();

  // ---- run
  auto* run = app.add_subcommand("run", "run the acceptance suite");
  std::string run_config, run_out = "suite_out";
  run->add_option("--config", run_config, "JSON config (optional)");
  run->add_option("--out", run_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      hs::FixtureSpec spec{"cli", gen_kind, gen_n, gen_seed, gen_spacing};
      hs::io::save_space(hs::build_fixture(spec), gen_out);
    } else if (*gfield) {
      hs::Space s = load_space_arg(gf_space);
      hs::io::save_field(hs::generate_field(s, gf_kind, gf_seed), gf_out);
    } else if (*mx) {
      hs::Space s = load_space_arg(mx_space);
      hs::ScalarField f = hs::io::load_field(mx_field, s.n());
      hs::BallFamily fam = hs::enumerate_balls(s);
      hs::ScalarField out;
      if (mx_op == "m") out = hs::hl_maximal(s, fam, f);
      else if (mx_op == "mq") out = hs::hl_maximal_q(s, fam, f, mx_q);
      else if (mx_op == "n") out = hs::sobolev_sharp(s, fam, f);
      else if (mx_op == "star") out = hs::calderon_star(s, fam, f);
      else if (mx_op == "grand")
        out = hs::grand_maximal(s, fam, f,
                                mx_mode == "tent" ? hs::GrandMode::Tent
                                                  : hs::GrandMode::ExactLp);
      else if (mx_op == "plus") out = hs::grad_plus(s, fam, f).field;
      else if (mx_op == "ustar") {
        std::vector<double> radii = parse_radii(mx_radii);
        out = hs::grad_maximal_star(s, f, radii);
      } else {
        std::fprintf(stderr, "unknown op: %s\n", mx_op.c_str());
        return 2;
      }
      hs::io::save_field(out, mx_out);
    } else if (*hj) {
      hs::Space s = load_space_arg(hj_space);
      hs::ScalarField f = hs::io::load_field(hj_field, s.n());
      hs::HajlaszCertificate cert = hs::hajlasz_norm_lp(s, f);
      hs::io::write_text(hj_out,
                         hs::io::certificate_to_json(cert).dump(2) + "\n");
    } else if (*cz) {
      hs::Space s = load_space_arg(cz_space);
      hs::ScalarField f = hs::io::load_field(cz_field, s.n());
      hs::BallFamily fam = hs::enumerate_balls(s);
      double q = cz_q > 0 ? cz_q : hs::default_q(hs::doubling_profile(s));
      hs::CzFlavor flavor = cz_flavor == "homog" ? hs::CzFlavor::Homogeneous
                            : cz_flavor == "tilde" ? hs::CzFlavor::Tilde
                                                   : hs::CzFlavor::M11;
      hs::CzDecomposition dec =
          hs::cz_decompose(s, fam, f, q, cz_alpha, flavor, cz_tent);
      hs::ScalarField nf = hs::sobolev_sharp(s, fam, f);
      hs::CzReport rep = hs::verify_cz(s, fam, dec, f, nf);
      hs::io::write_text(cz_out, hs::io::cz_to_json(dec, rep).dump(2) + "\n");
    } else if (*at) {
      hs::Space s = load_space_arg(at_space);
      hs::ScalarField f = hs::io::load_field(at_field, s.n());
      hs::BallFamily fam = hs::enumerate_balls(s);
      double q = at_q > 0 ? at_q : hs::default_q(hs::doubling_profile(s));
      hs::AtomFlavor flavor = at_flavor == "hs-moment" ? hs::AtomFlavor::HsMoment
                              : at_flavor == "hs-size" ? hs::AtomFlavor::HsSize
                              : at_flavor == "hs-nonhomog"
                                  ? hs::AtomFlavor::HsNonhomog
                                  : hs::AtomFlavor::Ls;
      hs::AtomicDecomposition dec =
          hs::atomic_decompose(s, fam, f, flavor, q, at_tent);
      hs::io::write_text(at_out, hs::io::atomic_to_json(dec).dump(2) + "\n");
    } else if (*wh) {
      hs::Space s = load_space_arg(wh_space);
      std::vector<int> omega;
      std::istringstream in(wh_omega);
      std::string tok;
      while (std::getline(in, tok, ',')) omega.push_back(std::stoi(tok));
      hs::WhitneyCover cover = hs::whitney_cover(s, omega);
      hs::io::write_text(wh_out,
                         hs::io::cover_to_json(cover).dump(2) + "\n");
    } else if (*run) {
      hs::SuiteConfig cfg = hs::SuiteConfig::defaults();
      if (!run_config.empty()) {
        std::ifstream in(run_config);
        if (!in) {
          std::fprintf(stderr, "cannot open config: %s\n", run_config.c_str());
          return 2;
        }
        nlohmann::json j;
        in >> j;
        cfg = hs::SuiteConfig::from_json(j);
      }
      hs::SuiteReport rep = hs::run_suite(cfg);
      hs::write_report(rep, run_out);
      hs::emit_plotdata(rep, run_out);
      for (const auto& r : rep.rows)
        if (!r.pass)
          std::printf("FAIL %s/%s %s/%s value=%.6g\n", r.criterion.c_str(),
                      r.check.c_str(), r.fixture.c_str(), r.field.c_str(),
                      r.value);
      std::printf("%d checks, %d failing\n", int(rep.rows.size()),
                  rep.fail_count());
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
