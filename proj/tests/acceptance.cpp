// Acceptance checks; prints one PASS/FAIL line per criterion.
//
// usage: hclim_acceptance <hclim binary> <fixture dir> <scratch dir>

#include <array>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hclim/calibration.hpp"
#include "hclim/coverage.hpp"
#include "hclim/error.hpp"
#include "hclim/estimation.hpp"
#include "hclim/heuristic.hpp"
#include "hclim/io.hpp"
#include "hclim/prediction.hpp"
#include "hclim/sampling.hpp"
#include "hclim/special.hpp"

using namespace hclim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void note(Outcome& o, bool ok, const char* fmt, ...) __attribute__((format(printf, 4, 5))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += buf;
    if (!ok) o.detail += " [miss]";
    o.pass = o.pass && ok;
  }

  void run(const char* id, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("%s %s (%.2fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures_ += !o.pass;
  }

  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

bool within(double value, double target, double tol) {
  return std::fabs(value - target) <= tol;
}

ModelFit summary_fit(double lambda, Dispersion d, std::size_t h, double n_bar) {
  ModelFit fit;
  fit.lambda_hat = lambda;
  fit.dispersion = d;
  fit.clusters = h;
  fit.n_bar = n_bar;
  fit.converged = true;
  return fit;
}

void check_row(Report& r, Outcome& o, const char* name, const PredictionLimits& l,
               double lo, double hi, double tol, std::int64_t c_lo, std::int64_t c_hi) {
  const bool ok = within(l.lower, lo, tol) && within(l.upper, hi, tol) &&
                  l.covered_low == c_lo && l.covered_high == c_hi;
  r.note(o, ok, "%s [%.2f (%lld), %.2f (%lld)] vs [%.2f (%lld), %.2f (%lld)]", name,
         l.lower, static_cast<long long>(l.covered_low.value_or(-1)), l.upper,
         static_cast<long long>(l.covered_high.value_or(-1)), lo,
         static_cast<long long>(c_lo), hi, static_cast<long long>(c_hi));
}

void check_interval(Report& r, Outcome& o, const char* name, const PredictionLimits& l,
                    double lo, double hi, double tol) {
  r.note(o, within(l.lower, lo, tol) && within(l.upper, hi, tol),
         "%s [%.2f, %.2f] vs [%.2f, %.2f] +-%.1f", name, l.lower, l.upper, lo, hi, tol);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: %s <hclim> <fixture dir> <scratch dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path data_dir = argv[2];
  const fs::path work = argv[3];
  fs::create_directories(work);
  const auto fixture = read_dataset_file((data_dir / "ta1537_hcd.csv").string());
  const TargetDesign table_target{3.0, 0.05, Sidedness::TwoSided};
  Report report;

  report.run("AC1 closed-form control limits", [&] {
    Outcome o;
    check_row(report, o, "c-chart", c_chart_limits(3 * 8.35, 1.96), 15.25, 34.87, 0.05,
              16, 34);
    check_row(report, o, "u-chart", u_chart_limits(8.35, 1.96, 3.0), 5.08, 11.62, 0.05,
              6, 11);
    check_row(report, o, "simple QP",
              quasi_poisson_pi(summary_fit(8.35, QuasiPoissonDispersion{3.18}, 66, 3),
                               table_target)
                  .limits,
              7.43, 42.70, 0.05, 8, 42);
    check_row(report, o, "simple NB",
              neg_binomial_pi(summary_fit(8.35, NegBinomialDispersion{0.082}, 66, 3),
                              table_target)
                  .limits,
              7.86, 42.26, 0.05, 8, 42);
    return o;
  });

  report.run("AC2 calibrated limits on the TA1537 fixture (B=10000, seed 1)", [&] {
    Outcome o;
    CalibrationSettings s;
    s.bootstrap_samples = 10'000;
    s.seed = {1, 0};
    const auto qp = calibrated_pi(fixture.data, table_target, s, Model::QuasiPoisson);
    check_interval(report, o, "calibrated QP 95%", qp.limits, 9.70, 45.16, 0.6);
    const auto nb = calibrated_pi(fixture.data, table_target, s, Model::NegBinomial);
    check_interval(report, o, "calibrated NB 95%", nb.limits, 9.90, 44.67, 0.6);
    const auto qp99 = calibrated_pi(fixture.data, {3.0, 0.01, Sidedness::TwoSided}, s,
                                    Model::QuasiPoisson);
    check_interval(report, o, "calibrated QP 99%", qp99.limits, 6.36, 54.64, 0.8);
    return o;
  });

  report.run("AC3 coverage of calibrated QP limits", [&] {
    Outcome o;
    SimCell c;
    c.generator = Generator::QuasiPoisson;
    c.method = Method::CalibratedQuasiPoisson;
    c.lambda = 20;
    c.phi = 3;
    c.clusters = 20;
    c.offsets = OffsetRule::constant(3.0);
    c.replicates = 500;
    c.bootstrap_samples = 2000;
    c.seed = 1;
    const auto r = run_cell(c);
    report.note(o, r.psi_cp >= 0.93 && r.psi_cp <= 0.97, "psi_cp=%.4f in [0.93, 0.97]",
                r.psi_cp);
    report.note(o, r.psi_l >= 0.955 && r.psi_l <= 0.99, "psi_l=%.4f in [0.955, 0.99]",
                r.psi_l);
    report.note(o, r.psi_u >= 0.955 && r.psi_u <= 0.99, "psi_u=%.4f in [0.955, 0.99]",
                r.psi_u);
    report.note(o, r.s_used == r.s_total, "S_used=%zu/%zu", r.s_used, r.s_total);
    return o;
  });

  report.run("AC4 c-chart undercoverage", [&] {
    Outcome o;
    SimCell c;
    c.generator = Generator::QuasiPoisson;
    c.method = Method::CChart;
    c.lambda = 20;
    c.phi = 5;
    c.clusters = 100;
    c.offsets = OffsetRule::constant(3.0);
    c.k = 1.96;
    c.replicates = 2000;
    c.seed = 1;
    const auto r = run_cell(c);
    report.note(o, r.psi_cp < 0.90, "psi_cp=%.4f < 0.90", r.psi_cp);
    return o;
  });

  report.run("AC5 sampler moments", [&] {
    Outcome o;
    constexpr std::size_t h = 100'000;
    auto moments = [](const std::vector<std::int64_t>& ys) {
      double mean = 0, m2 = 0, m4 = 0;
      for (auto y : ys) mean += y;
      mean /= ys.size();
      for (auto y : ys) {
        const double d = y - mean;
        m2 += d * d;
        m4 += d * d * d * d;
      }
      const double n = static_cast<double>(ys.size());
      const double var = m2 / (n - 1);
      return std::array<double, 4>{mean, var, std::sqrt(var / n),
                                   std::sqrt((m4 / n - var * var) / n)};
    };
    const double lambda = 5, phi = 3, n = 3, kappa_nb = 0.2;
    const auto design = DesignSpec::constant(h, n);
    Rng r1({101, 0}), r2({101, 1}), r3({101, 2});
    const auto qp = moments(sample_quasi_poisson(r1, design, {lambda, phi}));
    report.note(o, within(qp[0], n * lambda, 3 * qp[2]), "QP mean %.4f vs %.1f", qp[0],
                n * lambda);
    report.note(o, within(qp[1], phi * n * lambda, 3 * qp[3]), "QP var %.3f vs %.1f",
                qp[1], phi * n * lambda);
    const auto nb = moments(sample_neg_binomial(r2, design, {lambda, kappa_nb}));
    const double nb_var = n * lambda * (1 + kappa_nb * n * lambda);
    report.note(o, within(nb[1], nb_var, 3 * nb[3]), "NB var %.3f vs %.1f", nb[1],
                nb_var);
    const auto eq = moments(
        sample_neg_binomial(r3, design, {lambda, (phi - 1) / (n * lambda)}));
    report.note(o, std::fabs(eq[0] - qp[0]) <= 3 * std::hypot(eq[2], qp[2]) &&
                       std::fabs(eq[1] - qp[1]) <= 3 * std::hypot(eq[3], qp[3]),
                "QP vs matched NB: mean %.4f/%.4f var %.3f/%.3f", qp[0], eq[0], qp[1],
                eq[1]);
    return o;
  });

  report.run("AC6 estimator oracles", [&] {
    Outcome o;
    Rng rng({202, 0});
    int exact = 0, pearson = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto design = sample_uniform_offsets(rng, 2 + rep % 30, 0.5, 5.0);
      auto ys = sample_neg_binomial(rng, design, {1.0 + 0.2 * rep, 0.3});
      ys[0] += 1;
      std::vector<double> n(design.offsets().begin(), design.offsets().end());
      std::int64_t sy = 0;
      double sn = 0;
      for (auto y : ys) sy += y;
      for (double v : n) sn += v;
      long double x2 = 0;
      const long double lam = static_cast<long double>(sy) / sn;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const long double mu = n[i] * lam;
        x2 += (ys[i] - mu) * (ys[i] - mu) / mu;
      }
      const double phi_ref = static_cast<double>(x2 / (ys.size() - 1));
      const auto fit = fit_quasi_poisson(HistoricalData(ys, n));
      exact += fit.lambda_hat == static_cast<double>(sy) / sn;
      const double err = std::fabs(fit.phi() - phi_ref) / std::max(1.0, phi_ref);
      worst = std::max(worst, err);
      pearson += err <= 1e-12;
    }
    report.note(o, exact == 100, "lambda bit-exact %d/100", exact);
    report.note(o, pearson == 100, "Pearson phi %d/100 (max rel err %.1e)", pearson,
                worst);
    const auto design = DesignSpec::constant(10'000, 1.0);
    const HistoricalData big(sample_neg_binomial(rng, design, {5.0, 0.2}),
                             std::vector<double>(10'000, 1.0));
    const auto nb = fit_neg_binomial(big);
    report.note(o, nb.converged && within(nb.lambda_hat, 5.0, 0.1) &&
                       within(nb.kappa(), 0.2, 0.02),
                "NB ML (%.4f, %.4f) vs (5, 0.2)", nb.lambda_hat, nb.kappa());
    return o;
  });

  report.run("AC7 bisection on the normal grid", [&] {
    Outcome o;
    for (std::size_t b : {10'000u, 100'000u}) {
      BootstrapReplicates reps;
      for (std::size_t i = 1; i <= b; ++i) {
        reps.center.push_back(0.0);
        reps.se.push_back(1e6);
        reps.y_star.push_back(std::llround(1e6 * normal_quantile((i - 0.5) / b)));
      }
      CalibrationSettings s;
      s.bootstrap_samples = b;
      const auto r = bisect_coefficient(reps, Side::Upper, 0.975, s);
      report.note(o, within(r.q, 1.96, 0.02) && within(r.achieved_psi, 0.975, 0.001 + 1e-12),
                  "B=%zu q=%.4f psi=%.4f", b, r.q, r.achieved_psi);
    }
    return o;
  });

  report.run("AC8 byte-identical CLI output for a fixed seed", [&] {
    Outcome o;
    const std::string fx = (data_dir / "ta1537_hcd.csv").string();
    {
      std::ofstream grid(work / "grid.cfg");
      grid << "generator = qp, nb\nmethod = calib-qp, nb\noffset = uniform:1:4\n"
              "H = 8\nlambda = 5\nphi = 3\nS = 20\nB = 200\n";
    }
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"calibrate --data " + fx + " --model nb --B 2000 --seed 11",
         {"calibrate.csv"}},
        {"sample --model qp --lambda 4 --phi 2.5 --H 30 --offset-lo 1 --offset-hi 3 "
         "--seed 11",
         {"sample.csv"}},
        {"simulate --grid " + (work / "grid.cfg").string() + " --seed 11",
         {"simulate.csv"}},
        {"chart --data " + fx + " --B 1000 --seed 11 --out " +
             (work / "chart_RUN.svg").string(),
         {"chart.csv", "chart_RUN.svg", "chart_RUN.csv"}},
    };
    for (const auto& [args, files] : commands) {
      std::string outputs[2][3];
      bool ran = true;
      for (int run = 0; run < 2; ++run) {
        const std::string tag = std::to_string(run);
        std::string cmd = args;
        for (auto pos = cmd.find("RUN"); pos != std::string::npos; pos = cmd.find("RUN"))
          cmd.replace(pos, 3, tag);
        const fs::path stdout_file = work / (tag + "_" + files[0]);
        const std::string line = "\"" + cli + "\" " + cmd + " > \"" +
                                 stdout_file.string() + "\"";
        ran = ran && std::system(line.c_str()) == 0;
        outputs[run][0] = slurp(stdout_file);
        for (std::size_t f = 1; f < files.size(); ++f) {
          std::string name = files[f];
          name.replace(name.find("RUN"), 3, tag);
          outputs[run][f] = slurp(work / name);
        }
      }
      bool same = ran;
      for (std::size_t f = 0; f < files.size(); ++f) {
        same = same && !outputs[0][f].empty() && outputs[0][f] == outputs[1][f];
      }
      report.note(o, same, "%s", args.substr(0, args.find(' ')).c_str());
    }
    return o;
  });

  report.run("AC9 convergence accounting at lambda=0.1, H=5", [&] {
    Outcome o;
    std::vector<SimCell> cells;
    for (auto method : {Method::NegBinomial, Method::CalibratedNegBinomial}) {
      SimCell c;
      c.generator = Generator::NegBinomial;
      c.method = method;
      c.lambda = 0.1;
      c.clusters = 5;
      c.offsets = OffsetRule::constant(3.0);
      c.replicates = method == Method::NegBinomial ? 1000 : 100;
      c.bootstrap_samples = 500;
      c.seed = 1;
      cells.push_back(c);
    }
    for (const auto& row : run_grid(cells)) {
      const auto name = std::string(to_string(row.cell.method));
      if (!row.report) {
        report.note(o, false, "%s aborted: %s", name.c_str(), row.error.c_str());
        continue;
      }
      report.note(o, row.report->s_used < row.report->s_total,
                  "%s S_used/S_total=%zu/%zu", name.c_str(), row.report->s_used,
                  row.report->s_total);
    }
    return o;
  });

  return report.failures() == 0 ? 0 : 1;
}
