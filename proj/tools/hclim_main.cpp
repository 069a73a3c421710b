// hclim: historical control limits for overdispersed count data.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hclim/calibration.hpp"
#include "hclim/chart.hpp"
#include "hclim/coverage.hpp"
#include "hclim/error.hpp"
#include "hclim/estimation.hpp"
#include "hclim/format.hpp"
#include "hclim/heuristic.hpp"
#include "hclim/io.hpp"
#include "hclim/parallel.hpp"
#include "hclim/prediction.hpp"
#include "hclim/sampling.hpp"

namespace {

using namespace hclim;

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNumerical = 3,
  kIo = 4,
};

// Options that can also be supplied through `--config`; command-line flags
// win over config values, which win over defaults.
class ConfigBinder {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& target,
                   const std::string& help) {
    auto* opt = app->add_option(flag, target, help);
    bind(app, opt, [&target, flag](const std::string& text) {
      std::istringstream in(text);
      T value{};
      in >> value;
      if (!in || !(in >> std::ws).eof()) {
        throw DomainError("config value for " + flag + " is invalid: '" +
                          text + "'");
      }
      target = value;
    });
    return opt;
  }

  CLI::Option* add_string(CLI::App* app, const std::string& flag,
                          std::string& target, const std::string& help) {
    auto* opt = app->add_option(flag, target, help);
    bind(app, opt, [&target](const std::string& text) { target = text; });
    return opt;
  }

  template <typename T>
  CLI::Option* add_optional(CLI::App* app, const std::string& flag,
                            std::optional<T>& target, const std::string& help) {
    auto* opt = app->add_option(flag, target, help);
    bind(app, opt, [&target, flag](const std::string& text) {
      std::istringstream in(text);
      T value{};
      in >> value;
      if (!in || !(in >> std::ws).eof()) {
        throw DomainError("config value for " + flag + " is invalid: '" +
                          text + "'");
      }
      target = value;
    });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& flag, bool& target,
                        const std::string& help) {
    auto* opt = app->add_flag(flag, target, help);
    bind(app, opt, [&target](const std::string& text) {
      target = text == "true" || text == "1" || text == "yes";
    });
    return opt;
  }

  // Checked after the config merge, so a required value may come from either.
  CLI::Option* required(CLI::Option* opt) {
    required_.insert(opt);
    return opt;
  }

  void apply(const ConfigMap& config, CLI::App* active) const {
    for (const auto& b : bindings_) {
      if (b.app != active) continue;
      bool given = b.opt->count() > 0;
      if (!given) {
        const auto it = config.find(key_of(b.opt));
        if (it != config.end()) {
          b.set(it->second);
          given = true;
        }
      }
      if (!given && required_.contains(b.opt)) {
        throw DomainError(b.opt->get_name() + " is required");
      }
    }
  }

 private:
  struct Binding {
    CLI::App* app;
    CLI::Option* opt;
    std::function<void(const std::string&)> set;
  };

  static std::string key_of(const CLI::Option* opt) {
    auto name = opt->get_single_name();
    for (auto& c : name) {
      if (c == '-') c = '_';
    }
    return name;
  }

  void bind(CLI::App* app, CLI::Option* opt,
            std::function<void(const std::string&)> set) {
    bindings_.push_back({app, opt, std::move(set)});
  }

  std::vector<Binding> bindings_;
  std::set<const CLI::Option*> required_;
};

Model parse_model(const std::string& text) {
  if (text == "qp") return Model::QuasiPoisson;
  if (text == "nb") return Model::NegBinomial;
  throw DomainError("unknown model '" + text + "' (expected qp or nb)");
}

NbVarianceVariant parse_variant_or_throw(const std::string& text) {
  const auto v = parse_variant(text);
  if (!v) throw DomainError("unknown variant '" + text + "'");
  return *v;
}

std::string count_or_blank(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void print_limits_header(std::ostream& out) {
  out << "method,scale,level,center,lower,upper,covered_low,covered_high,width\n";
}

void print_limits_row(std::ostream& out, const PredictionLimits& l) {
  out << to_string(l.method) << ',' << to_string(l.scale) << ','
      << format_sig(l.level) << ',' << format_sig(l.center) << ','
      << format_sig(l.lower) << ',' << format_sig(l.upper) << ','
      << count_or_blank(l.covered_low) << ',' << count_or_blank(l.covered_high)
      << ',' << format_sig(l.width()) << '\n';
}

void print_limits_pretty(std::ostream& out, const PredictionLimits& l) {
  auto bound = [](double v, const std::optional<std::int64_t>& c) {
    if (!std::isfinite(v)) return std::string("-inf");
    return format_fixed(v, 2) + " (" + count_or_blank(c) + ")";
  };
  out << "Method            Lower CL      Upper CL      Interval width\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-17s %-13s %-13s %s\n",
                std::string(to_string(l.method)).c_str(),
                bound(l.lower, l.covered_low).c_str(),
                bound(l.upper, l.covered_high).c_str(),
                std::isfinite(l.width()) ? format_fixed(l.width(), 2).c_str()
                                         : "inf");
  out << line;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string model = "qp";
};

int run_fit(const FitArgs& a) {
  const auto ds = read_dataset_file(a.data);
  const auto fit = fit_model(parse_model(a.model), ds.data);
  std::cout << "model,H,n_bar,lambda_hat,phi_hat,kappa_hat,converged,iterations\n"
            << a.model << ',' << fit.clusters << ',' << format_sig(fit.n_bar)
            << ',' << format_sig(fit.lambda_hat) << ',';
  if (fit.model() == Model::QuasiPoisson) {
    std::cout << format_sig(fit.phi()) << ",,";
  } else {
    std::cout << ',' << format_sig(fit.kappa()) << ',';
  }
  std::cout << (fit.converged ? "true" : "false") << ',' << fit.iterations
            << '\n';
  return fit.converged ? kOk : kNumerical;
}

struct LimitsArgs {
  std::string method;
  std::string data;
  std::optional<double> lambda;
  std::optional<double> phi;
  std::optional<double> kappa;
  std::optional<double> clusters;
  std::optional<double> n_bar;
  std::optional<double> y_bar;
  std::optional<double> u_bar;
  std::optional<double> y;
  std::optional<double> n;
  std::optional<double> n_star;
  double k = 1.96;
  double alpha = 0.05;
  std::string variant = "main-text";
  bool clamp_zero = false;
  bool upper_only = false;
  bool pretty = false;
};

int run_limits(const LimitsArgs& a) {
  const auto method = parse_method(a.method);
  if (!method) throw DomainError("unknown method '" + a.method + "'");
  if (*method == Method::CalibratedQuasiPoisson ||
      *method == Method::CalibratedNegBinomial) {
    throw DomainError("calibrated limits are computed by the 'calibrate' command");
  }
  std::optional<Dataset> ds;
  if (!a.data.empty()) ds = read_dataset_file(a.data);

  auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw DomainError(std::string("missing ") + flag + " (or --data)");
    return *v;
  };
  auto n_star = [&]() {
    if (a.n_star) return *a.n_star;
    if (ds) return ds->data.n_bar();
    return need(a.n_bar, "--n-star");
  };
  const TargetDesign target{
      0.0, a.alpha, a.upper_only ? Sidedness::UpperOnly : Sidedness::TwoSided};
  auto with_n_star = [&](double ns) {
    TargetDesign t = target;
    t.n_star = ns;
    return t;
  };
  auto summary_fit = [&](Dispersion dispersion) {
    ModelFit fit;
    fit.lambda_hat = need(a.lambda, "--lambda");
    fit.dispersion = dispersion;
    fit.clusters = static_cast<std::size_t>(need(a.clusters, "--H"));
    fit.n_bar = need(a.n_bar, "--n-bar");
    fit.converged = true;
    return fit;
  };

  PredictionLimits limits;
  switch (*method) {
    case Method::MeanSd:
      if (!ds) throw DomainError("mean-sd needs --data");
      limits = mean_sd_limits(ds->data, a.k);
      break;
    case Method::CChart:
      limits = ds ? c_chart_limits(ds->data, a.k)
                  : c_chart_limits(a.y_bar ? *a.y_bar
                                           : need(a.lambda, "--y-bar") *
                                                 need(a.n_bar, "--n-bar"),
                                   a.k);
      break;
    case Method::UChart:
      limits = ds ? u_chart_limits(ds->data, a.k, n_star())
                  : u_chart_limits(a.u_bar ? *a.u_bar : need(a.lambda, "--u-bar"),
                                   a.k, n_star());
      break;
    case Method::LaneyUChart: {
      if (!ds) throw DomainError("laney needs --data");
      const auto res = laney_u_chart_limits(ds->data, a.k, n_star());
      limits = res.limits;
      std::cerr << "u_bar=" << format_sig(res.stats.u_bar)
                << " sigma_z=" << format_sig(res.stats.sigma_z) << '\n';
      break;
    }
    case Method::SimplePoisson: {
      std::int64_t y = 0;
      double n = 0.0;
      if (a.y) {
        y = static_cast<std::int64_t>(*a.y);
        if (static_cast<double>(y) != *a.y) throw DomainError("--y must be an integer");
        n = need(a.n, "--n");
      } else if (ds) {
        y = ds->data.total_y();
        n = ds->data.total_n();
      } else {
        throw DomainError("simple-pois needs --y/--n or --data");
      }
      limits = simple_poisson_pi(y, n, with_n_star(a.n_star ? *a.n_star : ds ? ds->data.n_bar() : n))
                   .limits;
      break;
    }
    case Method::QuasiPoisson: {
      const auto fit = ds ? fit_quasi_poisson(ds->data)
                          : summary_fit(QuasiPoissonDispersion{need(a.phi, "--phi")});
      limits = quasi_poisson_pi(fit, with_n_star(n_star())).limits;
      break;
    }
    case Method::NegBinomial: {
      const auto fit = ds ? fit_neg_binomial(ds->data)
                          : summary_fit(NegBinomialDispersion{need(a.kappa, "--kappa")});
      limits = neg_binomial_pi(fit, with_n_star(n_star()),
                               parse_variant_or_throw(a.variant))
                   .limits;
      break;
    }
    default:
      break;
  }
  if (a.upper_only && std::isfinite(limits.lower)) {
    limits.lower = -INFINITY;
    limits.covered_low.reset();
  }
  if (a.clamp_zero) limits = clamp_at_zero(limits);
  if (a.pretty) {
    print_limits_pretty(std::cout, limits);
  } else {
    print_limits_header(std::cout);
    print_limits_row(std::cout, limits);
  }
  return kOk;
}

struct CalibrateArgs {
  std::string data;
  std::string model = "qp";
  double alpha = 0.05;
  std::optional<double> n_star;
  std::size_t B = 10000;
  std::optional<std::uint64_t> seed;
  double tolerance = 0.001;
  std::string variant = "main-text";
  bool upper_only = false;
  bool clamp_zero = false;
  bool pretty = false;
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed) {
    throw DomainError("--seed is required for randomized commands");
  }
  return *seed;
}

int run_calibrate(const CalibrateArgs& a) {
  const auto seed = require_seed(a.seed);
  const auto ds = read_dataset_file(a.data);
  CalibrationSettings settings;
  settings.bootstrap_samples = a.B;
  settings.tolerance = a.tolerance;
  settings.seed = RngState{seed, 0};
  settings.variant = parse_variant_or_throw(a.variant);
  const TargetDesign target{a.n_star.value_or(ds.data.n_bar()), a.alpha,
                            a.upper_only ? Sidedness::UpperOnly
                                         : Sidedness::TwoSided};
  auto res = calibrated_pi(ds.data, target, settings, parse_model(a.model));
  if (a.clamp_zero) res.limits = clamp_at_zero(res.limits);
  if (a.pretty) {
    print_limits_pretty(std::cout, res.limits);
  } else {
    const auto& l = res.limits;
    std::cout << "method,alpha,n_star,center,se,q_lower,q_upper,psi_lower,"
                 "psi_upper,lower,upper,covered_low,covered_high,n_boot_used,"
                 "n_boot_dropped\n"
              << to_string(l.method) << ',' << format_sig(a.alpha) << ','
              << format_sig(target.n_star) << ',' << format_sig(l.center) << ','
              << format_sig(res.stderr_parts.se) << ','
              << format_sig(res.q_lower) << ',' << format_sig(res.q_upper)
              << ',' << format_sig(res.achieved_psi_lower) << ','
              << format_sig(res.achieved_psi_upper) << ','
              << format_sig(l.lower) << ',' << format_sig(l.upper) << ','
              << count_or_blank(l.covered_low) << ','
              << count_or_blank(l.covered_high) << ',' << res.n_boot_used
              << ',' << res.n_boot_dropped << '\n';
  }
  if (!res.lower_tolerance_met || !res.upper_tolerance_met) {
    std::cerr << "warning: bisection stopped before reaching the tolerance\n";
    return kNumerical;
  }
  return kOk;
}

struct SampleArgs {
  std::string model = "qp";
  double lambda = 5.0;
  std::optional<double> phi;
  std::optional<double> kappa;
  std::size_t clusters = 10;
  std::optional<double> offset;
  std::optional<double> offset_lo;
  std::optional<double> offset_hi;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  Rng rng(RngState{require_seed(a.seed), 0});
  const bool uniform = a.offset_lo || a.offset_hi;
  if (uniform && a.offset) {
    throw DomainError("use either --offset or --offset-lo/--offset-hi");
  }
  if (uniform && !(a.offset_lo && a.offset_hi)) {
    throw DomainError("uniform offsets need both --offset-lo and --offset-hi");
  }
  const DesignSpec design =
      uniform ? sample_uniform_offsets(rng, a.clusters, *a.offset_lo, *a.offset_hi)
              : DesignSpec::constant(a.clusters, a.offset.value_or(1.0));
  std::vector<std::int64_t> counts;
  if (parse_model(a.model) == Model::QuasiPoisson) {
    if (!a.phi) throw DomainError("qp sampling needs --phi");
    counts = sample_quasi_poisson(rng, design, {a.lambda, *a.phi});
  } else {
    if (!a.kappa) throw DomainError("nb sampling needs --kappa");
    counts = sample_neg_binomial(rng, design, {a.lambda, *a.kappa});
  }
  std::vector<std::string> ids;
  ids.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "C%05zu", i + 1);
    ids.emplace_back(id);
  }
  const HistoricalData data(std::move(counts),
                            std::vector<double>(design.offsets().begin(),
                                                design.offsets().end()));
  if (a.out.empty()) {
    write_dataset(std::cout, ids, data);
  } else {
    auto out = open_out(a.out);
    write_dataset(out, ids, data);
  }
  return kOk;
}

struct SimulateArgs {
  std::string grid;
  std::string out;
  std::optional<std::size_t> S;
  std::optional<std::size_t> B;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& a) {
  auto config = read_config_file(a.grid);
  if (a.S) config["S"] = std::to_string(*a.S);
  if (a.B) config["B"] = std::to_string(*a.B);
  if (a.seed) config["seed"] = std::to_string(*a.seed);
  if (!config.contains("seed")) {
    throw DomainError("--seed (or 'seed' in the grid file) is required");
  }
  const auto rows = run_grid(grid_from_config(config));
  if (a.out.empty()) {
    write_grid_csv(std::cout, rows);
  } else {
    auto out = open_out(a.out);
    write_grid_csv(out, rows);
  }
  bool failed = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].report) {
      std::cerr << "cell " << i << ": " << rows[i].error << '\n';
      failed = true;
    }
  }
  return failed ? kNumerical : kOk;
}

struct ChartArgs {
  std::string data;
  std::string reference;
  std::string model = "qp";
  double alpha = 0.05;
  double alpha2 = 0.01;
  bool no_secondary = false;
  std::size_t B = 10000;
  std::optional<std::uint64_t> seed;
  bool upper_only = false;
  std::string variant = "main-text";
  std::string out;
  std::string csv_out;
  std::string title;
};

int run_chart(const ChartArgs& a) {
  const auto seed = require_seed(a.seed);
  const auto ds = read_dataset_file(a.data);
  const auto ref = a.reference.empty() ? ds : read_dataset_file(a.reference);
  const auto fit = fit_model(parse_model(a.model), ref.data);

  CalibrationSettings settings;
  settings.bootstrap_samples = a.B;
  settings.seed = RngState{seed, 0};
  settings.variant = parse_variant_or_throw(a.variant);
  const Sidedness sides =
      a.upper_only ? Sidedness::UpperOnly : Sidedness::TwoSided;

  // One calibration per distinct (n*, alpha).
  std::map<std::pair<double, double>, PredictionLimits> cache;
  auto limits_for = [&](double n_star, double alpha) {
    const auto key = std::make_pair(n_star, alpha);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const auto res = calibrate_fit(fit, ref.data.design(),
                                     {n_star, alpha, sides}, settings);
      it = cache.emplace(key, res.limits).first;
    }
    return LimitPair{it->second.lower, it->second.upper};
  };

  ChartSpec spec;
  spec.title = a.title.empty()
                   ? "Calibrated " + std::string(a.model == "qp" ? "quasi-Poisson" : "negative-binomial") +
                         " control limits"
                   : a.title;
  spec.primary_level = 1.0 - a.alpha;
  spec.two_sided = sides == Sidedness::TwoSided;
  if (!a.no_secondary) spec.secondary_level = 1.0 - a.alpha2;
  const auto y = ds.data.counts();
  const auto n = ds.data.offsets();
  for (std::size_t h = 0; h < ds.data.size(); ++h) {
    std::optional<LimitPair> secondary;
    if (!a.no_secondary) secondary = limits_for(n[h], a.alpha2);
    add_point(spec, ds.ids[h], static_cast<double>(y[h]), n[h] * fit.lambda_hat,
              limits_for(n[h], a.alpha), secondary);
  }

  const std::string csv_path =
      a.csv_out.empty()
          ? std::filesystem::path(a.out).replace_extension(".csv").string()
          : a.csv_out;
  {
    auto svg = open_out(a.out);
    svg << render_svg(spec);
  }
  {
    auto csv = open_out(csv_path);
    csv << chart_points_csv(spec);
  }
  const auto counts = count_exceedances(spec);
  std::cout << "level,observed_outside,expected_outside\n"
            << format_sig(spec.primary_level) << ','
            << counts.above_primary +
                   (spec.two_sided ? counts.below_primary : 0)
            << ',' << format_sig(expected_exceedance(ds.data.size(), a.alpha))
            << '\n';
  if (spec.secondary_level) {
    std::cout << format_sig(*spec.secondary_level) << ','
              << counts.above_secondary << ','
              << format_sig(expected_exceedance(ds.data.size(), a.alpha2) /
                            (spec.two_sided ? 2.0 : 1.0))
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Historical control limits for overdispersed count data"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "flat 'key = value' file; flags override its values");
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)");
  ConfigBinder binder;

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "estimate lambda and dispersion");
  binder.required(binder.add_string(fit_cmd, "--data", fit_args.data, "dataset CSV"));
  binder.add_string(fit_cmd, "--model", fit_args.model, "qp or nb");

  LimitsArgs lim;
  auto* lim_cmd = app.add_subcommand("limits", "heuristic and asymptotic limits");
  binder.required(binder.add_string(lim_cmd, "--method", lim.method,
                    "mean-sd|c-chart|u-chart|laney|simple-pois|qp|nb"));
  binder.add_string(lim_cmd, "--data", lim.data, "dataset CSV");
  binder.add_optional(lim_cmd, "--lambda", lim.lambda, "lambda-hat (summary input)");
  binder.add_optional(lim_cmd, "--phi", lim.phi, "phi-hat (summary input)");
  binder.add_optional(lim_cmd, "--kappa", lim.kappa, "kappa-hat (summary input)");
  binder.add_optional(lim_cmd, "--H", lim.clusters, "number of clusters (summary input)");
  binder.add_optional(lim_cmd, "--n-bar", lim.n_bar, "mean offset (summary input)");
  binder.add_optional(lim_cmd, "--y-bar", lim.y_bar, "mean count (c-chart summary)");
  binder.add_optional(lim_cmd, "--u-bar", lim.u_bar, "mean rate (u-chart summary)");
  binder.add_optional(lim_cmd, "--y", lim.y, "single-cluster count (simple-pois)");
  binder.add_optional(lim_cmd, "--n", lim.n, "single-cluster offset (simple-pois)");
  binder.add_optional(lim_cmd, "--n-star", lim.n_star, "offset of the future observation");
  binder.add(lim_cmd, "--k", lim.k, "chart multiplier");
  binder.add(lim_cmd, "--alpha", lim.alpha, "1 - nominal coverage");
  binder.add_string(lim_cmd, "--variant", lim.variant, "main-text|supplement");
  binder.add_flag(lim_cmd, "--clamp-zero", lim.clamp_zero, "raise negative limits to 0");
  binder.add_flag(lim_cmd, "--upper-only", lim.upper_only, "one-sided upper limit");
  binder.add_flag(lim_cmd, "--pretty", lim.pretty, "human-readable table row");

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "bootstrap-calibrated prediction limits");
  binder.required(binder.add_string(cal_cmd, "--data", cal.data, "dataset CSV"));
  binder.add_string(cal_cmd, "--model", cal.model, "qp or nb");
  binder.add(cal_cmd, "--alpha", cal.alpha, "1 - nominal coverage");
  binder.add_optional(cal_cmd, "--n-star", cal.n_star, "offset of the future observation");
  binder.add(cal_cmd, "--B", cal.B, "bootstrap samples");
  binder.add_optional(cal_cmd, "--seed", cal.seed, "random seed (required)");
  binder.add(cal_cmd, "--tolerance", cal.tolerance, "bisection tolerance t");
  binder.add_string(cal_cmd, "--variant", cal.variant, "main-text|supplement");
  binder.add_flag(cal_cmd, "--upper-only", cal.upper_only, "calibrate the upper limit only");
  binder.add_flag(cal_cmd, "--clamp-zero", cal.clamp_zero, "raise negative limits to 0");
  binder.add_flag(cal_cmd, "--pretty", cal.pretty, "human-readable table row");

  SampleArgs smp;
  auto* smp_cmd = app.add_subcommand("sample", "simulate overdispersed counts");
  binder.add_string(smp_cmd, "--model", smp.model, "qp or nb");
  binder.add(smp_cmd, "--lambda", smp.lambda, "mean per offset unit");
  binder.add_optional(smp_cmd, "--phi", smp.phi, "quasi-Poisson dispersion (> 1)");
  binder.add_optional(smp_cmd, "--kappa", smp.kappa, "negative-binomial dispersion (> 0)");
  binder.add(smp_cmd, "--H", smp.clusters, "number of clusters");
  binder.add_optional(smp_cmd, "--offset", smp.offset, "common offset");
  binder.add_optional(smp_cmd, "--offset-lo", smp.offset_lo, "uniform offsets: lower bound");
  binder.add_optional(smp_cmd, "--offset-hi", smp.offset_hi, "uniform offsets: upper bound");
  binder.add_optional(smp_cmd, "--seed", smp.seed, "random seed (required)");
  binder.add_string(smp_cmd, "--out", smp.out, "output CSV (default stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo coverage study");
  binder.required(binder.add_string(sim_cmd, "--grid", sim.grid, "grid config file"));
  binder.add_string(sim_cmd, "--out", sim.out, "output CSV (default stdout)");
  sim_cmd->add_option("--S", sim.S, "replicates per cell");
  sim_cmd->add_option("--B", sim.B, "bootstrap samples");
  sim_cmd->add_option("--seed", sim.seed, "random seed");

  ChartArgs ch;
  auto* ch_cmd = app.add_subcommand("chart", "SVG control chart with calibrated limits");
  binder.required(binder.add_string(ch_cmd, "--data", ch.data, "points to plot (CSV)"));
  binder.add_string(ch_cmd, "--reference", ch.reference,
                    "baseline data for the estimates (default: --data)");
  binder.add_string(ch_cmd, "--model", ch.model, "qp or nb");
  binder.add(ch_cmd, "--alpha", ch.alpha, "primary level alpha");
  binder.add(ch_cmd, "--alpha2", ch.alpha2, "secondary level alpha");
  binder.add_flag(ch_cmd, "--no-secondary", ch.no_secondary, "omit the secondary limits");
  binder.add(ch_cmd, "--B", ch.B, "bootstrap samples");
  binder.add_optional(ch_cmd, "--seed", ch.seed, "random seed (required)");
  binder.add_flag(ch_cmd, "--upper-only", ch.upper_only, "upper prediction limits only");
  binder.add_string(ch_cmd, "--variant", ch.variant, "main-text|supplement");
  binder.required(binder.add_string(ch_cmd, "--out", ch.out, "output SVG"));
  binder.add_string(ch_cmd, "--csv-out", ch.csv_out,
                    "companion CSV (default: SVG path with .csv)");
  binder.add_string(ch_cmd, "--title", ch.title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (threads > 0) set_worker_count(threads);
    CLI::App* active = app.get_subcommands().front();
    binder.apply(config_path.empty() ? ConfigMap{} : read_config_file(config_path),
                 active);
    if (active == fit_cmd) return run_fit(fit_args);
    if (active == lim_cmd) return run_limits(lim);
    if (active == cal_cmd) return run_calibrate(cal);
    if (active == smp_cmd) return run_sample(smp);
    if (active == sim_cmd) return run_simulate(sim);
    if (active == ch_cmd) return run_chart(ch);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
