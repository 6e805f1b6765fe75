// Command-line front end for the skew normal tail dependence library.
//
// Commands: eval, quantile, taildep-table, verify, sample, tail-order.
// Tables are emitted as CSV (RFC 4180 quoting) or JSON (array of flat row
// objects keyed by the CSV headers); floats use 17 significant digits.
// u is always given as log10(u) so deep-tail grids stay parseable.
//
// Exit status: 0 on success with all checks passing, 1 on numerical
// errors (a diagnostic row is emitted and the message repeated on
// stderr), 2 on usage errors.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sntail/errors.hpp"
#include "sntail/sn_bivariate.hpp"
#include "sntail/sn_univariate.hpp"
#include "sntail/specfun.hpp"
#include "sntail/table_io.hpp"
#include "sntail/taildep.hpp"
#include "sntail/verify.hpp"

namespace {

using namespace sntail;

constexpr double kLn10 = 2.30258509299404568402;

struct CommonOpts {
  std::string format = "csv";
  std::string out;
  QuadSpec quad{};
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--rel-tol", c.quad.rel_tol, "Quadrature relative tolerance");
  cmd->add_option("--abs-log-tol", c.quad.abs_log_tol,
                  "Quadrature absolute log-domain tolerance");
  cmd->add_option("--max-nodes", c.quad.max_nodes,
                  "Quadrature node budget per level");
  cmd->add_option("--bracket-margin", c.quad.bracket_margin,
                  "Quantile bracket margin");
}

int emit(const Table& t, const CommonOpts& c) {
  std::ostringstream os;
  if (c.format == "json") {
    write_json(os, t);
  } else {
    write_csv(os, t);
  }
  if (c.out.empty() || c.out == "-") {
    std::cout << os.str();
    return 0;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file '" << c.out << "'\n";
    return 1;
  }
  f << os.str();
  return f.good() ? 0 : 1;
}

int emit_error(const std::string& msg, const CommonOpts& c) {
  std::cerr << "error: " << msg << "\n";
  Table t({"error"});
  t.append_row({Cell(msg)});
  emit(t, c);
  return 1;
}

int usage_error(const std::string& msg) {
  std::cerr << "usage error: " << msg << "\n";
  return 2;
}

const char* branch_name(double theta) {
  return theta > 0.0 ? "a" : (theta < 0.0 ? "b" : "normal");
}

// Grid of log10(u) values from max down to min: u strictly descending.
std::vector<double> descending_grid(double l10_min, double l10_max,
                                    int steps) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    g.push_back(l10_max);
    return g;
  }
  for (int i = 0; i < steps; ++i) {
    g.push_back(l10_max + (l10_min - l10_max) * i / (steps - 1));
  }
  return g;
}

std::vector<Cell> tail_point_row(const TailPoint& pt, double theta,
                                 double l10) {
  return {Cell(std::pow(10.0, l10)),
          Cell(pt.x_u),
          Cell(std::exp(pt.log_lambda_exact.value)),
          Cell(std::exp(pt.log_lambda_asym.value)),
          Cell(pt.ratio),
          Cell(branch_name(theta))};
}

const std::vector<std::string> kTailPointHeaders = {
    "u", "x_u", "lambda_l_exact", "lambda_l_asym", "ratio", "branch"};

struct EvalArgs {
  std::optional<double> lambda, theta, rho, z, x, h, a, log10_u;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

// One scalar operation per invocation; each op validates the flags it
// needs and produces a one-row table.
int run_eval(const std::string& op, const EvalArgs& e, const CommonOpts& c) {
  const auto need = [](const std::optional<double>& v, const char* flag,
                       const char* op_name) {
    if (!v) {
      throw CLI::ValidationError(std::string("eval ") + op_name +
                                 " requires " + flag);
    }
    return *v;
  };

  Table t({"value"});
  if (op == "owen-t") {
    const double h = need(e.h, "--h", "owen-t");
    const double a = need(e.a, "--a", "owen-t");
    t = Table({"h", "a", "t"});
    t.append_row({Cell(h), Cell(a), Cell(owen_t(h, a))});
  } else if (op == "log-phi") {
    const double z = need(e.z, "--z", "log-phi");
    t = Table({"z", "log_phi"});
    t.append_row({Cell(z), Cell(log_std_normal_cdf(z).value)});
  } else if (op == "sn-log-cdf") {
    const SkewNormalLaw law{need(e.lambda, "--lambda", op.c_str()), c.quad};
    const double z = need(e.z, "--z", op.c_str());
    t = Table({"lambda", "z", "log_cdf"});
    t.append_row({Cell(law.lambda), Cell(z), Cell(sn_log_cdf(law, z).value)});
  } else if (op == "sn-tail-asym") {
    const SkewNormalLaw law{need(e.lambda, "--lambda", op.c_str()), c.quad};
    const double z = need(e.z, "--z", op.c_str());
    t = Table({"lambda", "z", "log_tail_asym"});
    t.append_row(
        {Cell(law.lambda), Cell(z), Cell(sn_tail_asymptotic(law, z).value)});
  } else if (op == "capitanio") {
    const SkewNormalLaw law{need(e.lambda, "--lambda", op.c_str()), c.quad};
    const double z = need(e.z, "--z", op.c_str());
    const CapitanioBounds b = capitanio_bounds(law, z);
    t = Table({"lambda", "z", "log_lower", "log_upper"});
    t.append_row({Cell(law.lambda), Cell(z), Cell(b.lower.value),
                  Cell(b.upper.value)});
  } else if (op == "marginal-lambda") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    t = Table({"theta", "rho", "lambda"});
    t.append_row({Cell(th), Cell(r), Cell(marginal_lambda(th, r))});
  } else if (op == "joint-log-cdf" || op == "joint-tail-asym" ||
             op == "ctd-log") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    const double x = need(e.x, "--x", op.c_str());
    const BivSkewNormalLaw law = derive_params(th, r, c.quad);
    double v = 0.0;
    const char* col = "";
    if (op == "joint-log-cdf") {
      v = joint_diag_log_cdf(law, x).value;
      col = "log_cdf";
    } else if (op == "joint-tail-asym") {
      v = joint_diag_tail_asymptotic(law, x).value;
      col = "log_asym";
    } else {
      v = conditional_tail_derivative_log(law, x).value;
      col = "log_deriv";
    }
    t = Table({"theta", "rho", "x", col});
    t.append_row({Cell(th), Cell(r), Cell(x), Cell(v)});
  } else if (op == "orthant-log") {
    const double r = need(e.rho, "--rho", op.c_str());
    const double x = need(e.x, "--x", op.c_str());
    t = Table({"rho", "x", "log_cdf"});
    t.append_row({Cell(r), Cell(x),
                  Cell(normal_orthant_log(r, x, c.quad).value)});
  } else if (op == "baseline-log") {
    const double r = need(e.rho, "--rho", op.c_str());
    const double lu = need(e.log10_u, "--log10u", op.c_str()) * kLn10;
    t = Table({"rho", "log10_u", "log_baseline"});
    t.append_row(
        {Cell(r), Cell(*e.log10_u), Cell(normal_baseline(r, lu).value)});
  } else if (op == "lambda-l-exact" || op == "lambda-u-exact") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    const double lu = need(e.log10_u, "--log10u", op.c_str()) * kLn10;
    const BivSkewNormalLaw law = derive_params(th, r, c.quad);
    const TailPoint pt = op == "lambda-l-exact" ? lambda_l_exact(law, lu)
                                                : lambda_u_exact(law, lu);
    const double branch_theta = op == "lambda-l-exact" ? th : -th;
    t = Table(kTailPointHeaders);
    t.append_row(tail_point_row(pt, branch_theta, *e.log10_u));
  } else if (op == "lambda-l-asym" || op == "lambda-u-asym") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    const double lu = need(e.log10_u, "--log10u", op.c_str()) * kLn10;
    const BivSkewNormalLaw law = derive_params(th, r, c.quad);
    const double v = op == "lambda-l-asym"
                         ? lambda_l_asymptotic(law, lu).value
                         : lambda_u_asymptotic(law, lu).value;
    t = Table({"theta", "rho", "log10_u", "log_lambda_asym"});
    t.append_row({Cell(th), Cell(r), Cell(*e.log10_u), Cell(v)});
  } else if (op == "de-haan") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    const double lu = need(e.log10_u, "--log10u", op.c_str()) * kLn10;
    const DeHaanCheck chk = de_haan_check(derive_params(th, r, c.quad), lu);
    t = Table({"theta", "rho", "log10_u", "lhs", "rhs", "gap"});
    t.append_row({Cell(th), Cell(r), Cell(*e.log10_u), Cell(chk.lhs.value),
                  Cell(chk.rhs.value), Cell(chk.gap)});
  } else if (op == "lambda-l-mc") {
    const double th = need(e.theta, "--theta", op.c_str());
    const double r = need(e.rho, "--rho", op.c_str());
    const double u = std::pow(10.0, need(e.log10_u, "--log10u", op.c_str()));
    if (e.n < 1) {
      throw CLI::ValidationError("eval lambda-l-mc requires --n >= 1");
    }
    const MCEstimate mc = estimate_lambda_l_mc(derive_params(th, r, c.quad),
                                               u, e.n, e.seed);
    t = Table({"estimate", "standard_error", "joint_count", "cond_count"});
    t.append_row({Cell(mc.estimate), Cell(mc.standard_error),
                  Cell(static_cast<double>(mc.joint_count)),
                  Cell(static_cast<double>(mc.cond_count))});
  } else {
    throw CLI::ValidationError(
        "unknown eval operation '" + op +
        "' (known: owen-t, log-phi, sn-log-cdf, sn-tail-asym, capitanio, "
        "marginal-lambda, joint-log-cdf, joint-tail-asym, ctd-log, "
        "orthant-log, baseline-log, lambda-l-exact, lambda-u-exact, "
        "lambda-l-asym, lambda-u-asym, de-haan, lambda-l-mc)");
  }
  return emit(t, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tail probabilities and tail dependence of the equi-skewed bivariate "
      "skew normal law: exact log-domain evaluation next to closed-form "
      "asymptotics."};
  app.require_subcommand(1);

  // eval
  EvalArgs ev;
  CommonOpts ev_common;
  std::string ev_op;
  auto* eval = app.add_subcommand("eval", "Evaluate one scalar operation");
  // The Owen's T flag --h needs the single-dash help alias out of the way.
  eval->set_help_flag("--help", "Print help and exit");
  eval->add_option("op", ev_op, "Operation name")->required();
  eval->add_option("--lambda", ev.lambda, "Univariate shape");
  eval->add_option("--theta", ev.theta, "Bivariate shape");
  eval->add_option("--rho", ev.rho, "Latent correlation");
  eval->add_option("--z", ev.z, "Univariate evaluation point");
  eval->add_option("--x", ev.x, "Diagonal evaluation point");
  eval->add_option("--h", ev.h, "Owen's T first argument");
  eval->add_option("--a", ev.a, "Owen's T second argument");
  eval->add_option("--log10u", ev.log10_u, "log10 of the tail level u");
  eval->add_option("--n", ev.n, "Sample count (lambda-l-mc)");
  eval->add_option("--seed", ev.seed, "RNG seed (lambda-l-mc)");
  add_common(eval, ev_common);

  // quantile
  CommonOpts q_common;
  double q_lambda = 0.0;
  double q_log10u = 0.0;
  std::string q_method = "both";
  auto* quant = app.add_subcommand(
      "quantile", "Skew normal tail quantile, exact and/or asymptotic");
  quant->add_option("--lambda", q_lambda, "Shape parameter")->required();
  quant->add_option("--log10u", q_log10u, "log10 of the tail level u")
      ->required();
  quant->add_option("--method", q_method, "exact | asym | both")
      ->check(CLI::IsMember({"exact", "asym", "both"}));
  add_common(quant, q_common);

  // taildep-table
  CommonOpts tt_common;
  double tt_theta = 0.0, tt_rho = 0.0;
  double tt_min = 0.0, tt_max = 0.0;
  int tt_steps = 5;
  auto* table = app.add_subcommand(
      "taildep-table",
      "Lower tail dependence along a log-spaced u grid (u descending)");
  table->add_option("--theta", tt_theta, "Bivariate shape")->required();
  table->add_option("--rho", tt_rho, "Latent correlation")->required();
  table->add_option("--log10u-min", tt_min, "Deepest log10(u)")->required();
  table->add_option("--log10u-max", tt_max, "Shallowest log10(u)")
      ->required();
  table->add_option("--steps", tt_steps, "Grid size");
  add_common(table, tt_common);

  // verify
  CommonOpts v_common;
  auto* verify =
      app.add_subcommand("verify", "Run every library invariant suite");
  add_common(verify, v_common);

  // sample
  CommonOpts s_common;
  double s_theta = 0.0, s_rho = 0.0;
  std::int64_t s_n = 0;
  std::uint64_t s_seed = 0;
  auto* sample = app.add_subcommand(
      "sample", "Draw reproducible samples of the bivariate law");
  sample->add_option("--theta", s_theta, "Bivariate shape")->required();
  sample->add_option("--rho", s_rho, "Latent correlation")->required();
  sample->add_option("--n", s_n, "Number of rows")->required();
  sample->add_option("--seed", s_seed, "RNG seed");
  add_common(sample, s_common);

  // tail-order
  CommonOpts to_common;
  double to_theta = 0.0, to_rho = 0.0;
  double to_min = -12.0, to_max = -4.0;
  int to_steps = 5;
  auto* order = app.add_subcommand(
      "tail-order", "Fit the tail order kappa of ln C(u,u) on a u grid");
  order->add_option("--theta", to_theta, "Bivariate shape")->required();
  order->add_option("--rho", to_rho, "Latent correlation")->required();
  order->add_option("--log10u-min", to_min, "Deepest log10(u)");
  order->add_option("--log10u-max", to_max, "Shallowest log10(u)");
  order->add_option("--steps", to_steps, "Grid size");
  add_common(order, to_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto check_grid = [](double lo, double hi, int steps) -> const char* {
    if (steps < 1) return "--steps must be >= 1";
    if (!(lo <= hi)) return "--log10u-min must be <= --log10u-max";
    if (!(hi < 0.0)) return "--log10u-max must be < 0";
    return nullptr;
  };

  try {
    if (eval->parsed()) {
      return run_eval(ev_op, ev, ev_common);
    }

    if (quant->parsed()) {
      if (!(q_log10u < 0.0)) return usage_error("--log10u must be < 0");
      const SkewNormalLaw law{q_lambda, q_common.quad};
      const double lu = q_log10u * kLn10;
      std::vector<std::string> headers = {"log10_u"};
      std::vector<Cell> row = {Cell(q_log10u)};
      if (q_method != "asym") {
        headers.push_back("exact");
        row.push_back(Cell(sn_quantile(law, lu)));
      }
      if (q_method != "exact") {
        headers.push_back("asymptotic");
        row.push_back(Cell(sn_quantile_asymptotic_log(law, lu)));
      }
      Table t(std::move(headers));
      t.append_row(std::move(row));
      return emit(t, q_common);
    }

    if (table->parsed()) {
      if (const char* m = check_grid(tt_min, tt_max, tt_steps)) {
        return usage_error(m);
      }
      const BivSkewNormalLaw law = derive_params(tt_theta, tt_rho,
                                                 tt_common.quad);
      Table t(kTailPointHeaders);
      for (double l10 : descending_grid(tt_min, tt_max, tt_steps)) {
        t.append_row(tail_point_row(lambda_l_exact(law, l10 * kLn10),
                                    tt_theta, l10));
      }
      return emit(t, tt_common);
    }

    if (verify->parsed()) {
      const auto results = run_verify_suites("", v_common.quad);
      Table t({"suite", "status", "detail"});
      bool ok = true;
      for (const auto& r : results) {
        ok = ok && r.status != SuiteStatus::fail;
        t.append_row({Cell(r.name), Cell(to_string(r.status)),
                      Cell(r.detail)});
      }
      const int rc = emit(t, v_common);
      return rc != 0 ? rc : (ok ? 0 : 1);
    }

    if (sample->parsed()) {
      if (s_n < 1) return usage_error("--n must be >= 1");
      const BivSkewNormalLaw law = derive_params(s_theta, s_rho,
                                                 s_common.quad);
      const SampleBatch batch = sntail::sample(law, s_n, s_seed);
      Table t({"x1", "x2"});
      for (const auto& row : batch.rows) {
        t.append_row({Cell(row[0]), Cell(row[1])});
      }
      return emit(t, s_common);
    }

    if (order->parsed()) {
      if (const char* m = check_grid(to_min, to_max, to_steps)) {
        return usage_error(m);
      }
      const BivSkewNormalLaw law = derive_params(to_theta, to_rho,
                                                 to_common.quad);
      std::vector<double> grid;
      for (double l10 : descending_grid(to_min, to_max, to_steps)) {
        grid.push_back(l10 * kLn10);
      }
      const TailOrderFit fit = fit_tail_order(law, grid);
      Table t({"kappa_hat", "slope_se", "kappa_target", "points"});
      t.append_row({Cell(fit.kappa_hat), Cell(fit.slope_se),
                    Cell(tail_order_target(law)),
                    Cell(static_cast<double>(fit.grid.size()))});
      return emit(t, to_common);
    }
  } catch (const CLI::ValidationError& e) {
    return usage_error(e.what());
  } catch (const sntail::error& e) {
    const CommonOpts* c = &ev_common;
    if (quant->parsed()) c = &q_common;
    if (table->parsed()) c = &tt_common;
    if (verify->parsed()) c = &v_common;
    if (sample->parsed()) c = &s_common;
    if (order->parsed()) c = &to_common;
    return emit_error(e.what(), *c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
