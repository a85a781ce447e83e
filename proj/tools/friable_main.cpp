#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "friable/csv.hpp"
#include "friable/json_io.hpp"
#include "friable/verify.hpp"

using namespace friable;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitBadInput = 2;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot open output file: " + path);
  return file;
}

std::vector<double> parse_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo)
    throw std::invalid_argument("empty or inverted grid");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    double v = lo + i * step;
    if (v > hi + 1e-12) break;
    g.push_back(v);
  }
  return g;
}

int cmd_specfn(const std::vector<double>& kappas, double u_min, double u_max,
               double u_step, const std::string& out_path) {
  std::ofstream file;
  auto& out = open_out(file, out_path);
  io::CsvWriter csv(out);
  csv.header({"u", "rho", "lambda", "j", "mu", "xi", "rho_asym", "ratio"});
  auto grid = parse_grid(u_min, u_max, u_step);
  for (double kv : kappas) {
    Kappa kappa(kv);
    double table_umax = std::max(specfn::RhoTable::kDefaultUMax, std::ceil(u_max) + 2.0);
    auto tab = specfn::RhoTable::build(kappa, table_umax);
    csv.comment("kappa=" + io::csv_num(kv));
    for (double u : grid) {
      double rho = tab.value(u);
      double lam = specfn::lambda_kappa(u, tab);
      double mu = (u > 0.0) ? specfn::mu_kappa(u, kappa) : NAN;
      double xi = (u > 0.0) ? specfn::xi_kappa(u, kappa) : 1.0;
      double asym = (u >= 2.0) ? specfn::rho_asymptotic(u, kappa) : NAN;
      double ratio = (u >= 2.0) ? rho / asym : NAN;
      csv.line({io::csv_num(u), io::csv_num(rho), io::csv_num(lam),
                io::csv_num(1.0 - lam), io::csv_num(mu), io::csv_num(xi),
                io::csv_num(asym), io::csv_num(ratio)});
    }
  }
  return kExitOk;
}

int cmd_friable(const std::string& spec_path, double kappa_v,
                const std::vector<double>& y_list, double u_min, double u_max,
                double u_step, std::uint64_t budget,
                const std::string& out_path) {
  auto spec = io::load_spec_file(spec_path);
  Kappa kappa(kappa_v);
  std::ofstream file;
  auto& out = open_out(file, out_path);
  io::CsvWriter csv(out);
  csv.header({"x", "y", "u", "psi", "f1y", "psi_star", "lambda_u", "deviation",
              "envelope_thm31", "envelope_thm32", "rankin_bound"});
  auto grid = parse_grid(u_min, u_max, u_step);
  double grid_max = grid.empty() ? 1.0 : grid.back();
  auto tab =
      specfn::RhoTable::build(kappa, std::max(specfn::RhoTable::kDefaultUMax, std::ceil(grid_max) + 2.0));
  arith::EnumBudget eb;
  if (budget) eb.max_nodes = budget;
  int skipped = 0;
  for (double y : y_list) {
    for (double u : grid) {
      double x = std::pow(y, u);
      try {
        auto rep = arith::friable_report(x, y, spec, kappa, tab, eb);
        double rb = arith::rankin_bound(x, y, kappa, spec);
        csv.line({io::csv_num(rep.x), io::csv_num(rep.y), io::csv_num(rep.u),
                  io::csv_num(rep.psi), io::csv_num(rep.f1y),
                  io::csv_num(rep.psi_star), io::csv_num(rep.lambda_u),
                  io::csv_num(rep.deviation), io::csv_num(rep.envelope_thm31),
                  io::csv_num(rep.envelope_thm32), io::csv_num(rb)});
      } catch (const std::length_error&) {
        csv.comment("skipped x=" + io::csv_num(x) + " y=" + io::csv_num(y) +
                    " reason=budget");
        ++skipped;
      }
    }
  }
  if (skipped)
    std::cerr << "warning: " << skipped << " grid point(s) skipped (budget)\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed,
               const std::string& out_path) {
  std::ofstream file;
  auto& out = open_out(file, out_path);
  io::CsvWriter csv(out);
  csv.header({"suite", "case", "lhs", "rhs", "residual", "tolerance", "pass"});
  bool ok = true;
  std::string first_fail;
  for (const auto& name : verify::suite_names()) {
    if (suite != "all" && suite != name) continue;
    auto res = verify::run_suite(name, seed);
    for (const auto& row : res.rows) {
      csv.line({row.suite, row.case_id, io::csv_num(row.lhs),
                io::csv_num(row.rhs), io::csv_num(row.residual),
                io::csv_num(row.tolerance), row.pass ? "1" : "0"});
      if (!row.pass && first_fail.empty())
        first_fail = row.suite + "/" + row.case_id;
      ok = ok && row.pass;
    }
  }
  if (!ok) {
    std::cerr << "verification FAILED at " << first_fail << " (seed " << seed
              << ")\n";
    return kExitVerifyFail;
  }
  return kExitOk;
}

int cmd_sieve(const std::string& inst_path, bool brute,
              const std::string& out_path) {
  auto input = io::load_sieve_file(inst_path);
  std::ofstream file;
  auto& out = open_out(file, out_path);
  io::CsvWriter csv(out);
  csv.header({"id", "X", "D", "z", "main_term", "remainder", "bound",
              "brute_count", "ratio"});
  std::string id = inst_path;
  if (auto slash = id.find_last_of('/'); slash != std::string::npos)
    id = id.substr(slash + 1);

  sieve::SieveReport rep;
  double x_mass, d_cut, z;
  if (input.kind == io::SieveInput::Kind::kIntervalPoly) {
    auto poly_rep = sieve::polynomial_interval_sieve(input.lo, input.hi, input.q,
                                                input.poly, input.d_cutoff);
    rep = poly_rep.report;
    x_mass = static_cast<double>(input.hi - input.lo + 1);
    d_cut = input.d_cutoff > 0.0 ? input.d_cutoff : std::sqrt(x_mass);
    // z = P(q)
    std::uint64_t q = input.q, pmax = 1;
    for (std::uint64_t d = 2; d * d <= q; ++d)
      while (q % d == 0) pmax = d, q /= d;
    if (q > 1) pmax = q;
    z = static_cast<double>(pmax);
    csv.comment("W(q;G)=" + io::csv_num(poly_rep.w_qg) +
                (poly_rep.degenerate ? " degenerate" : ""));
  } else {
    input.instance.validate();
    rep = sieve::sieve_bound(input.instance, brute);
    x_mass = input.instance.x_mass;
    d_cut = input.instance.d_cutoff;
    z = input.instance.z;
  }
  double ratio = (rep.brute_count > 0)
                     ? rep.bound / static_cast<double>(rep.brute_count)
                     : NAN;
  csv.line({id, io::csv_num(x_mass), io::csv_num(d_cut), io::csv_num(z),
            io::csv_num(rep.main_term), io::csv_num(rep.remainder),
            io::csv_num(rep.bound),
            std::to_string(rep.brute_count), io::csv_num(ratio)});
  return kExitOk;
}

int cmd_bench(const std::string& out_path) {
  std::ofstream file;
  auto& out = open_out(file, out_path);
  io::CsvWriter csv(out);
  csv.header({"task", "n", "seconds"});
  auto time_it = [&](const std::string& name, double n, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    csv.line({name, io::csv_num(n), io::csv_num(dt.count())});
  };
  time_it("rho_table_build_k1", 64.0 * 256.0,
          [] { specfn::RhoTable::build(Kappa(1.0)); });
  time_it("psi_f_1e6_y1e3", 1e6, [] {
    arith::psi_f(1e6, 1e3, arith::MultiplicativeSpec::tau_kappa(1.0));
  });
  time_it("sieve_random_instance", 100.0, [] {
    auto inst = verify::random_instance(1);
    sieve::sieve_bound(inst, true);
  });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"friable sums, Dickman-type special functions and the "
               "prime-power Selberg sieve"};
  app.require_subcommand(1);

  std::vector<double> kappas;
  std::vector<double> y_list;
  double u_min = 0.0, u_max = 10.0, u_step = 0.5;
  double kappa_single = 1.0;
  std::string spec_path, inst_path, out_path, suite = "all";
  std::uint64_t seed = 0, budget = 0;
  bool brute = true;

  auto* sp = app.add_subcommand("specfn", "tabulate rho/lambda/mu/xi per kappa");
  sp->add_option("--kappa", kappas, "kappa values")->required()->delimiter(',');
  sp->add_option("--u-min", u_min);
  sp->add_option("--u-max", u_max);
  sp->add_option("--u-step", u_step);
  sp->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* fr = app.add_subcommand("friable", "psi_f / psi_f* reports on a grid");
  fr->add_option("--spec", spec_path, "multiplicative spec JSON")->required();
  fr->add_option("--kappa", kappa_single);
  fr->add_option("--y-list", y_list, "y values")->required()->delimiter(',');
  fr->add_option("--u-min", u_min);
  fr->add_option("--u-max", u_max);
  fr->add_option("--u-step", u_step);
  fr->add_option("--budget", budget, "traversal node budget");
  fr->add_option("--out", out_path);

  auto* ve = app.add_subcommand("verify", "run identity/property suites");
  ve->add_option("--suite", suite,
                 "eq73|eq82|adjoint|quadform|normalization|sieve|all");
  ve->add_option("--seed", seed);
  ve->add_option("--out", out_path);

  auto* si = app.add_subcommand("sieve", "Selberg upper-bound report for an instance");
  si->add_option("--instance", inst_path, "instance JSON")->required();
  si->add_flag("--brute,!--no-brute", brute, "compute the exact count");
  si->add_option("--out", out_path);

  auto* be = app.add_subcommand("bench", "timing table for the main kernels");
  be->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (sp->parsed()) return cmd_specfn(kappas, u_min, u_max, u_step, out_path);
    if (fr->parsed())
      return cmd_friable(spec_path, kappa_single, y_list, u_min, u_max, u_step,
                         budget, out_path);
    if (ve->parsed()) return cmd_verify(suite, seed, out_path);
    if (si->parsed()) return cmd_sieve(inst_path, brute, out_path);
    if (be->parsed()) return cmd_bench(out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
