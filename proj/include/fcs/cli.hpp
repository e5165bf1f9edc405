#pragma once

// Command-line front end. run_cli is the whole program; the executable only
// forwards argv and the standard streams, so tests can drive it in-process.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage or parse error,
// 3 indeterminate verdict, 4 resource refusal.

#include <CLI11.hpp>
#include <ostream>

#include "fcs/exact_diag.hpp"
#include "fcs/kraus_io.hpp"
#include "fcs/symmetry_checks.hpp"
#include "fcs/transfer_spectra.hpp"
#include "fcs/witness.hpp"

namespace fcs::cli {

enum Exit : int { ok = 0, failed = 1, usage = 2, indeterminate = 3, resource = 4 };

inline int exit_code(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return ok;
    case Outcome::fail:
      return failed;
    case Outcome::indeterminate:
      return indeterminate;
  }
  return failed;
}

inline std::string csv_double(double x) {
  if (std::isnan(x)) return "nan";
  return io::format_double(x);
}

inline void print_matrix(std::ostream& os, const std::string& label, const Mat& m) {
  os << label << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      // Clean signed zeros and rounding dust for display.
      cplx z = m(r, c);
      auto clean = [](double x) { return std::abs(x) < 1e-15 ? 0.0 : x; };
      os << " " << io::format_complex({clean(z.real()), clean(z.imag())});
    }
    os << "\n";
  }
}

/// One-site observable by name: Sx, Sy, Sz, Sp, Sm, Id, or Eij for the matrix
/// unit |i><j| with 1-based i, j.
inline Mat observable(const std::string& name, const SpinRep& rep) {
  const int d = rep.d;
  if (name == "Sx" || name == "sx") return rep.sx;
  if (name == "Sy" || name == "sy") return rep.sy;
  if (name == "Sz" || name == "sz") return rep.sz;
  if (name == "Sp" || name == "sp") return rep.sx + kI * rep.sy;
  if (name == "Sm" || name == "sm") return rep.sx - kI * rep.sy;
  if (name == "Id" || name == "I") return Mat::Identity(d, d);
  if (name.size() == 3 && (name[0] == 'E' || name[0] == 'e') && std::isdigit(name[1]) &&
      std::isdigit(name[2])) {
    const int i = name[1] - '0', j = name[2] - '0';
    if (i < 1 || i > d || j < 1 || j > d)
      throw InvalidArgument("matrix unit " + name + " is outside 1.." + std::to_string(d));
    Mat e = Mat::Zero(d, d);
    e(i - 1, j - 1) = 1.0;
    return e;
  }
  throw InvalidArgument("unknown observable '" + name +
                        "' (expected Sx, Sy, Sz, Sp, Sm, Id or Eij)");
}

// ---------------------------------------------------------------------------

inline int cmd_repr(int d, std::ostream& out) {
  const SpinRep rep = build_spin_rep(d);
  const TwistMatrix tw = build_twist(rep);
  const double s = rep.s;
  const double casimir =
      max_abs(rep.casimir() - s * (s + 1.0) * Mat::Identity(d, d));
  out << "d: " << d << "\n";
  out << "s: " << io::format_double(s) << "\n";
  out << "casimir_defect: " << io::format_double(casimir) << "\n";
  out << "mu: " << (compute_mu(tw) > 0 ? "+1" : "-1") << "\n";
  out << "zeta: " << io::format_complex(tw.zeta) << "\n";
  out << "twist_square_defect: "
      << io::format_double(max_abs(tw.r0 * tw.r0 - Mat::Identity(d, d))) << "\n";
  print_matrix(out, "sx", rep.sx);
  print_matrix(out, "sy", rep.sy);
  print_matrix(out, "sz", rep.sz);
  print_matrix(out, "r0", tw.r0);
  print_matrix(out, "r_zeta", tw.r_zeta());
  return ok;
}

inline int cmd_audit(const std::string& path, const AuditOptions& opt, std::ostream& out) {
  const KrausFile f = read_kraus_file(path);
  const FcsState st = state_from_file(f);
  const SpinRep rep = build_spin_rep(st.d());
  const TwistMatrix tw = build_twist(rep);
  const AuditReport r = theorem_audit(st, rep, tw, opt, f.name);
  out << to_text(r);
  return exit_code(r.overall());
}

inline int cmd_correlate(const std::string& path, const std::string& a, const std::string& b,
                         int n_max, std::ostream& out) {
  const KrausFile f = read_kraus_file(path);
  const FcsState st = state_from_file(f);
  const SpinRep rep = build_spin_rep(st.d());
  const Mat oa = observable(a, rep), ob = observable(b, rep);
  const DecayCertificate cert = decay_certificate(st, oa, ob, n_max);
  out << "n,corr_re,corr_im,abs_corr,ratio,bound,margin,norm_a,norm_b\n";
  for (const auto& row : cert.rows)
    out << row.n << "," << csv_double(row.corr.real()) << "," << csv_double(row.corr.imag())
        << "," << csv_double(row.abs_corr) << "," << csv_double(row.ratio) << ","
        << csv_double(row.bound) << "," << csv_double(row.margin) << ","
        << csv_double(cert.norm_a) << "," << csv_double(cert.norm_b) << "\n";
  return ok;
}

inline int cmd_spectrum(const std::string& path, std::ostream& out) {
  const KrausFile f = read_kraus_file(path);
  const FcsState st = state_from_file(f);
  const GapReport g = gap(build_transfer(st));
  out << "index,re,im,modulus\n";
  for (Eigen::Index i = 0; i < g.eigenvalues.size(); ++i) {
    const cplx z = g.eigenvalues(i);
    out << i + 1 << "," << csv_double(z.real()) << "," << csv_double(z.imag()) << ","
        << csv_double(std::abs(z)) << "\n";
  }
  return ok;
}

struct EdArgs {
  std::string model = "xxx";
  int d = 2;
  int n = 4;
  double J = 1.0;
  double field = 0.0;
  bool open = false;
  int r_max = 0;  // 0 means n / 2
  std::optional<double> beta;
};

inline int cmd_ed(const EdArgs& a, std::ostream& out) {
  ChainSpec spec{a.d, a.n, a.J, !a.open, parse_model(a.model), a.field};
  const SpinChainSystem sys = build_chain(spec);
  const GroundReport g = ground(sys);
  const int r_max = a.r_max > 0 ? a.r_max : std::max(1, a.n / 2);
  if (r_max >= a.n) throw InvalidArgument("r-max must be below n");
  out << "# model: " << to_string(spec.model) << "\n";
  out << "# d: " << a.d << "\n";
  out << "# n: " << a.n << "\n";
  out << "# J: " << csv_double(a.J) << "\n";
  out << "# field: " << csv_double(a.field) << "\n";
  out << "# periodic: " << (spec.periodic ? "true" : "false") << "\n";
  out << "# ground_energy: " << csv_double(g.energy) << "\n";
  out << "# degeneracy: " << g.degeneracy << "\n";
  out << "# gap: " << csv_double(g.gap) << "\n";
  std::vector<CorrelationRow> rows;
  if (a.beta) {
    const ThermalState th = gibbs(sys, *a.beta);
    out << "# beta: " << csv_double(*a.beta) << "\n";
    rows = correlation_profile(sys, th, r_max);
  } else {
    out << "# state: ground\n";
    rows = correlation_profile(sys, g, r_max);
  }
  out << "r,ss,zz\n";
  for (const auto& row : rows)
    out << row.r << "," << csv_double(row.ss) << "," << csv_double(row.zz) << "\n";
  return ok;
}

/// AKLT end to end: fixed point, transfer spectrum, audit, decay rows and the
/// parent-chain comparison.
inline int cmd_demo_aklt(std::uint64_t seed, std::ostream& out) {
  const KrausFamily kraus = witness::aklt();
  const FcsState st = fixed_point(kraus);
  const SpinRep rep = build_spin_rep(3);
  const TwistMatrix tw = build_twist(rep);
  const GapReport g = gap(build_transfer(st));
  out << "validate_defect: " << io::format_double(validate(kraus).defect) << "\n";
  out << "rho_defect: "
      << io::format_double(max_abs(st.rho - 0.5 * Mat::Identity(2, 2))) << "\n";
  out << "transfer_spectrum:";
  for (Eigen::Index i = 0; i < g.eigenvalues.size(); ++i)
    out << " " << csv_double(g.eigenvalues(i).real());
  out << "\n";
  out << "delta: " << csv_double(g.delta) << "\n";
  AuditOptions opt;
  opt.seed = seed;
  const AuditReport r = theorem_audit(st, rep, tw, opt, "aklt");
  out << to_text(r);
  const auto cert = decay_certificate(st, rep.sz, rep.sz, 6);
  out << "n,zz,ratio\n";
  for (const auto& row : cert.rows)
    out << row.n << "," << csv_double(row.corr.real()) << "," << csv_double(row.ratio) << "\n";
  const auto sys = build_chain(ChainSpec{3, 8, 1.0, true, ChainModel::aklt_parent, 0.0});
  const auto prof = correlation_profile(sys, ground(sys), 3);
  out << "ed_n8_zz1: " << csv_double(prof[0].zz) << "\n";
  out << "ed_n8_ratio_ss2_ss1: " << csv_double(prof[1].ss / prof[0].ss) << "\n";
  return exit_code(r.overall());
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finitely correlated spin-chain states: symmetry audits, transfer spectra "
               "and exact-diagonalization oracle"};
  app.require_subcommand(1);

  int repr_d = 0;
  auto* repr = app.add_subcommand("repr", "spin-s irrep generators, twist r0, mu and zeta");
  repr->add_option("--d", repr_d, "irrep dimension d = 2s + 1")->required();

  std::string file;
  AuditOptions audit_opt;
  auto* audit = app.add_subcommand("audit", "run every hypothesis and conclusion check");
  audit->add_option("file", file, "Kraus file")->required();
  audit->add_option("--window", audit_opt.window, "largest window length")->capture_default_str();
  audit->add_option("--tol", audit_opt.tol, "tolerance")->capture_default_str();
  audit->add_option("--samples", audit_opt.samples, "sampled group elements")
      ->capture_default_str();
  audit->add_option("--seed", audit_opt.seed, "random seed")->capture_default_str();

  std::string obs_a, obs_b;
  int n_max = 10;
  auto* corr = app.add_subcommand("correlate", "connected two-point table and decay bound");
  corr->add_option("file", file, "Kraus file")->required();
  corr->add_option("--A", obs_a, "observable at site 0")->required();
  corr->add_option("--B", obs_b, "observable at site n")->required();
  corr->add_option("--n-max", n_max, "largest separation")->capture_default_str();

  auto* spec = app.add_subcommand("spectrum", "transfer-operator eigenvalues");
  spec->add_option("file", file, "Kraus file")->required();

  EdArgs ed_args;
  double beta = 0.0;
  auto* ed = app.add_subcommand("ed", "exact diagonalization of a finite chain");
  ed->add_option("--model", ed_args.model, "xxx or aklt-parent")->capture_default_str();
  ed->add_option("--d", ed_args.d, "on-site dimension")->capture_default_str();
  ed->add_option("--n", ed_args.n, "number of sites")->capture_default_str();
  ed->add_option("--J", ed_args.J, "coupling")->capture_default_str();
  ed->add_option("--field", ed_args.field, "uniform S_z field")->capture_default_str();
  ed->add_flag("--periodic", "periodic boundary (default)");
  ed->add_flag("--open", ed_args.open, "open boundary");
  ed->add_option("--r-max", ed_args.r_max, "largest correlation distance (default n/2)");
  auto* beta_opt = ed->add_option("--beta", beta, "Gibbs state at this inverse temperature");

  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("demo-aklt", "AKLT state end to end");
  demo->add_option("--seed", demo_seed, "random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage;
  }

  try {
    if (*repr) {
      if (repr_d < 1) {
        err << "error: --d must be a positive integer\n" << repr->help();
        return usage;
      }
      return cmd_repr(repr_d, out);
    }
    if (*audit) return cmd_audit(file, audit_opt, out);
    if (*corr) return cmd_correlate(file, obs_a, obs_b, n_max, out);
    if (*spec) return cmd_spectrum(file, out);
    if (*ed) {
      if (*beta_opt) ed_args.beta = beta;
      return cmd_ed(ed_args, out);
    }
    if (*demo) return cmd_demo_aklt(demo_seed, out);
  } catch (const ResourceLimit& e) {
    err << "refused: " << e.what() << "\n";
    return resource;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const NotFaithful& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failed;
  }
  return usage;
}

}  // namespace fcs::cli
