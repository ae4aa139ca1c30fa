#include "iwv/scan.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "iwv/errors.hpp"
#include "iwv/estimation.hpp"
#include "iwv/fisher.hpp"
#include "iwv/frequency.hpp"
#include "iwv/model.hpp"
#include "iwv/noise.hpp"
#include "iwv/version.hpp"

namespace iwv {

std::string_view subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::fisher_scan: return "fisher-scan";
    case Subcommand::noise_scan: return "noise-scan";
    case Subcommand::jitter_scan: return "jitter-scan";
    case Subcommand::mc_estimate: return "mc-estimate";
    case Subcommand::frequency: return "frequency";
  }
  return "?";
}

std::vector<double> SweepSpec::values() const {
  if (points < 2) throw ConfigError("sweep needs points >= 2");
  std::vector<double> v(points);
  if (spacing == SweepSpacing::log) {
    if (!(min > 0.0) || !(max > 0.0)) throw ConfigError("log spacing needs positive min/max");
    const double lmin = std::log(min), lmax = std::log(max);
    for (int i = 0; i < points; ++i) {
      v[i] = std::exp(lmin + (lmax - lmin) * i / (points - 1));
    }
  } else {
    for (int i = 0; i < points; ++i) v[i] = min + (max - min) * i / (points - 1);
  }
  return v;
}

namespace {

std::vector<std::pair<std::string, std::string>> tokenize_config(std::string_view text) {
  std::vector<std::string> toks;
  std::istringstream stream{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<int> tok_lines;
  while (std::getline(stream, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) {
      toks.push_back(t);
      tok_lines.push_back(lineno);
    }
  }
  std::vector<std::pair<std::string, std::string>> kvs;
  std::size_t i = 0;
  auto fail = [&](std::size_t at) -> void {
    throw ConfigError("line " + std::to_string(tok_lines[std::min(at, toks.size() - 1)]) +
                      ": expected key=value near '" + toks[std::min(at, toks.size() - 1)] + "'");
  };
  while (i < toks.size()) {
    const std::string& t = toks[i];
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      if (i + 2 < toks.size() && toks[i + 1] == "=") {
        kvs.emplace_back(t, toks[i + 2]);
        i += 3;
      } else if (i + 1 < toks.size() && toks[i + 1].size() > 1 && toks[i + 1][0] == '=') {
        kvs.emplace_back(t, toks[i + 1].substr(1));
        i += 2;
      } else {
        fail(i);
      }
    } else if (eq == 0) {
      fail(i);
    } else if (eq == t.size() - 1) {
      if (i + 1 >= toks.size()) fail(i);
      kvs.emplace_back(t.substr(0, eq), toks[i + 1]);
      i += 2;
    } else {
      kvs.emplace_back(t.substr(0, eq), t.substr(eq + 1));
      i += 1;
    }
  }
  return kvs;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size()) throw ConfigError("key '" + key + "': trailing junk in '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x < 0.0 || x != std::floor(x) || x > 1.8e19) {
    throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

const std::set<std::string>& allowed_keys(Subcommand sub) {
  static const std::set<std::string> common = {
      "k",   "phi",    "sigma",  "k0",  "ell1",    "ell2", "sweep",  "min",
      "max", "points", "spacing", "seed", "out", "threads", "hold_ksigma"};
  static const std::set<std::string> fisher = common;
  static const auto noise = [] {
    auto s = common;
    s.insert({"j", "j_ratio"});
    return s;
  }();
  static const auto jitter = [] {
    auto s = common;
    s.insert({"q", "q_ratio", "q_nodes"});
    return s;
  }();
  static const auto mc = [] {
    auto s = common;
    s.insert({"j", "j_ratio", "q", "q_ratio", "nu", "trials", "mle_halfwidth"});
    return s;
  }();
  static const auto freq = [] {
    auto s = common;
    s.insert({"scheme", "power", "wavelength", "time", "vg_over_c", "d", "dtheta_domega",
              "apex"});
    return s;
  }();
  switch (sub) {
    case Subcommand::fisher_scan: return fisher;
    case Subcommand::noise_scan: return noise;
    case Subcommand::jitter_scan: return jitter;
    case Subcommand::mc_estimate: return mc;
    case Subcommand::frequency: return freq;
  }
  return common;
}

const std::set<std::string>& sweepable(Subcommand sub) {
  static const std::set<std::string> fisher = {"sigma", "k", "phi"};
  static const std::set<std::string> noise = {"sigma", "k", "phi", "j"};
  static const std::set<std::string> jitter = {"sigma", "k", "phi", "q", "ell1", "ell2"};
  static const std::set<std::string> mc = {"nu", "trials", "sigma", "phi", "j"};
  static const std::set<std::string> freq = {"d", "power", "time", "sigma", "vg_over_c"};
  switch (sub) {
    case Subcommand::fisher_scan: return fisher;
    case Subcommand::noise_scan: return noise;
    case Subcommand::jitter_scan: return jitter;
    case Subcommand::mc_estimate: return mc;
    case Subcommand::frequency: return freq;
  }
  return fisher;
}

}  // namespace

ScanConfig parse_config(std::string_view text, Subcommand sub) {
  ScanConfig cfg;
  cfg.subcommand = sub;
  const auto& allowed = allowed_keys(sub);
  std::set<std::string> seen;
  bool have_sweep = false, have_min = false, have_max = false, have_points = false;
  bool have_j = false, have_j_ratio = false, have_q = false, have_q_ratio = false;

  for (const auto& [key, value] : tokenize_config(text)) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' for subcommand " +
                        std::string(subcommand_name(sub)));
    }
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

    if (key == "k") cfg.params.k = parse_double(key, value);
    else if (key == "phi") cfg.params.phi = parse_double(key, value);
    else if (key == "sigma") cfg.params.sigma = parse_double(key, value);
    else if (key == "k0") cfg.params.k0 = parse_double(key, value);
    else if (key == "ell1") cfg.params.ell1 = parse_double(key, value);
    else if (key == "ell2") cfg.params.ell2 = parse_double(key, value);
    else if (key == "sweep") { cfg.sweep.parameter = value; have_sweep = true; }
    else if (key == "min") { cfg.sweep.min = parse_double(key, value); have_min = true; }
    else if (key == "max") { cfg.sweep.max = parse_double(key, value); have_max = true; }
    else if (key == "points") { cfg.sweep.points = static_cast<int>(parse_u64(key, value)); have_points = true; }
    else if (key == "spacing") {
      if (value == "linear") cfg.sweep.spacing = SweepSpacing::linear;
      else if (value == "log") cfg.sweep.spacing = SweepSpacing::log;
      else throw ConfigError("key 'spacing': expected linear or log, got '" + value + "'");
    }
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "out") cfg.output_path = value;
    else if (key == "threads") cfg.threads = static_cast<int>(parse_u64(key, value));
    else if (key == "hold_ksigma") cfg.hold_ksigma = parse_bool(key, value);
    else if (key == "j") { cfg.j_value = parse_double(key, value); cfg.j_is_ratio = false; have_j = true; }
    else if (key == "j_ratio") { cfg.j_value = parse_double(key, value); cfg.j_is_ratio = true; have_j_ratio = true; }
    else if (key == "q") { cfg.q_value = parse_double(key, value); cfg.q_is_ratio = false; have_q = true; }
    else if (key == "q_ratio") { cfg.q_value = parse_double(key, value); cfg.q_is_ratio = true; have_q_ratio = true; }
    else if (key == "q_nodes") cfg.q_nodes = static_cast<int>(parse_u64(key, value));
    else if (key == "nu") cfg.nu_input = parse_u64(key, value);
    else if (key == "trials") cfg.trials = parse_u64(key, value);
    else if (key == "mle_halfwidth") cfg.mle_halfwidth_factor = parse_double(key, value);
    else if (key == "scheme") {
      if (value == "prism") cfg.scheme = FrequencySchemeKind::prism;
      else if (value == "group-delay") cfg.scheme = FrequencySchemeKind::group_delay;
      else throw ConfigError("key 'scheme': expected prism or group-delay, got '" + value + "'");
    }
    else if (key == "power") cfg.power_W = parse_double(key, value);
    else if (key == "wavelength") cfg.wavelength_cm = parse_double(key, value);
    else if (key == "time") cfg.integration_time_s = parse_double(key, value);
    else if (key == "vg_over_c") cfg.vg_over_c = parse_double(key, value);
    else if (key == "d") cfg.cell_length_cm = parse_double(key, value);
    else if (key == "dtheta_domega") cfg.dtheta_domega = parse_double(key, value);
    else if (key == "apex") cfg.prism_apex_rad = parse_double(key, value);
  }

  if (!have_sweep || !have_min || !have_max || !have_points) {
    throw ConfigError("config needs sweep, min, max and points");
  }
  if (!sweepable(sub).count(cfg.sweep.parameter)) {
    throw ConfigError("parameter '" + cfg.sweep.parameter + "' is not sweepable for " +
                      std::string(subcommand_name(sub)));
  }
  if (cfg.sweep.points < 2) throw ConfigError("sweep needs points >= 2");
  if (cfg.hold_ksigma && cfg.sweep.parameter != "sigma") {
    throw ConfigError("hold_ksigma requires sweeping sigma");
  }
  if (have_j && have_j_ratio) throw ConfigError("give either j or j_ratio, not both");
  if (have_q && have_q_ratio) throw ConfigError("give either q or q_ratio, not both");
  if (sub == Subcommand::noise_scan && !have_j && !have_j_ratio) {
    cfg.j_value = cfg.params.sigma / 10.0;  // documented default noise amplitude
    cfg.j_is_ratio = false;
  }
  if (sub == Subcommand::jitter_scan && !have_q && !have_q_ratio) {
    throw ConfigError("jitter-scan needs q or q_ratio");
  }
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  (void)cfg.sweep.values();  // validates spacing constraints
  cfg.params.validate();
  return cfg;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PointParams {
  InterferometerParams p;
  double J = 0.0;
  double Q = 0.0;
  std::uint64_t nu = 0;
  std::size_t trials = 0;
  double sweep_value = 0.0;
  double d_cm = 0.0, power_W = 0.0, time_s = 0.0, vg_over_c = 0.0;
};

// Applies the sweep value and the hold-ksigma constraint to one point.
PointParams resolve_point(const ScanConfig& cfg, double value) {
  PointParams pt;
  pt.p = cfg.params;
  pt.nu = cfg.nu_input;
  pt.trials = cfg.trials;
  pt.sweep_value = value;
  pt.d_cm = cfg.cell_length_cm;
  pt.power_W = cfg.power_W;
  pt.time_s = cfg.integration_time_s;
  pt.vg_over_c = cfg.vg_over_c;

  const std::string& name = cfg.sweep.parameter;
  if (name == "sigma") pt.p.sigma = value;
  else if (name == "k") pt.p.k = value;
  else if (name == "phi") pt.p.phi = value;
  else if (name == "ell1") pt.p.ell1 = value;
  else if (name == "ell2") pt.p.ell2 = value;
  else if (name == "j") pt.J = value;
  else if (name == "q") pt.Q = value;
  else if (name == "nu") pt.nu = static_cast<std::uint64_t>(value);
  else if (name == "trials") pt.trials = static_cast<std::size_t>(value);
  else if (name == "d") pt.d_cm = value;
  else if (name == "power") pt.power_W = value;
  else if (name == "time") pt.time_s = value;
  else if (name == "vg_over_c") pt.vg_over_c = value;

  if (cfg.hold_ksigma && name == "sigma") {
    pt.p.k = cfg.params.k * cfg.params.sigma / pt.p.sigma;
  }
  if (name != "j") pt.J = cfg.j_is_ratio ? cfg.j_value * pt.p.sigma : cfg.j_value;
  if (name != "q") pt.Q = cfg.q_is_ratio ? cfg.q_value * pt.p.k : cfg.q_value;
  return pt;
}

std::string scan_row(const ScanConfig& cfg, const PointParams& pt) {
  double analytic = std::numeric_limits<double>::quiet_NaN();
  double numeric = std::numeric_limits<double>::quiet_NaN();
  double p_f = std::numeric_limits<double>::quiet_NaN();

  switch (cfg.subcommand) {
    case Subcommand::fisher_scan: {
      analytic = fisher_noiseless_analytic(pt.p).value;
      const GridSpec grid = default_noiseless_grid(pt.p);
      const InterferometerParams base = pt.p;
      const DensityFamily family = [base, grid](double phi) {
        InterferometerParams q = base;
        q.phi = phi;
        return pdf_noiseless(q, grid);
      };
      numeric = fisher_numeric(family, pt.p.phi,
                               recommended_dphi(pt.p.k, grid.dx, pt.p.phi)).value;
      p_f = postselection_probability(pt.p);
      break;
    }
    case Subcommand::noise_scan: {
      analytic = (pt.J == 0.0) ? fisher_noiseless_analytic(pt.p).value
                               : fisher_additive_approx(pt.p, pt.J).value;
      const GridSpec grid = default_additive_grid(pt.p, pt.J);
      const InterferometerParams base = pt.p;
      const double J = pt.J;
      const DensityFamily family = [base, J, grid](double phi) {
        InterferometerParams q = base;
        q.phi = phi;
        return pdf_additive(q, J, grid);
      };
      numeric = fisher_numeric(family, pt.p.phi,
                               recommended_dphi(pt.p.k, grid.dx, pt.p.phi)).value;
      p_f = postselection_probability(pt.p);
      break;
    }
    case Subcommand::jitter_scan: {
      analytic = fisher_jitter_approx(pt.p, pt.Q).value;
      const JitterModel model(pt.p, pt.Q, cfg.q_nodes);
      const DensityFamily family = [&model](double phi) {
        return model.marginal(phi).density;
      };
      numeric = fisher_numeric(family, pt.p.phi,
                               recommended_dphi(pt.p.k, model.grid().dx, pt.p.phi)).value;
      p_f = model.marginal(pt.p.phi).mean_postselection;
      break;
    }
    default:
      break;
  }

  std::string row = fmt(pt.sweep_value) + "," + fmt(analytic) + "," + fmt(numeric) + "," +
                    fmt(p_f) + "," + fmt(p_f * numeric);
  return row;
}

std::string mc_row(const ScanConfig& cfg, const PointParams& pt) {
  NoiseParams noise;
  noise.J = pt.J;
  noise.Q = pt.Q;
  CrbOptions opts;
  opts.search_halfwidth_factor = cfg.mle_halfwidth_factor;
  const EstimationRun run =
      crb_experiment(pt.p, noise, pt.nu, pt.trials, cfg.seed, opts);
  const double analytic = (pt.J == 0.0 && pt.Q == 0.0)
                              ? fisher_noiseless_analytic(pt.p).value
                              : (pt.Q == 0.0 ? fisher_additive_approx(pt.p, pt.J).value
                                             : fisher_jitter_approx(pt.p, pt.Q).value);
  double mean_post = 0.0;
  for (auto n : run.postselected_counts) mean_post += static_cast<double>(n);
  mean_post /= static_cast<double>(run.trials);

  return fmt(pt.sweep_value) + "," + fmt(analytic) + "," + fmt(run.info_per_event_used) +
         "," + fmt(run.p_f_used) + "," + fmt(run.p_f_used * run.info_per_event_used) + "," +
         fmt(run.empirical_var) + "," + fmt(run.crb_variance) + "," +
         fmt(run.variance_ratio) + "," + fmt(mean_post) + "," +
         std::to_string(run.boundary_count);
}

std::string frequency_row(const ScanConfig& cfg, const PointParams& pt) {
  PhotonBudget budget{pt.power_W, cfg.wavelength_cm, pt.time_s};
  const double nu = budget.photon_count();
  double analytic = 0.0, numeric = 0.0, p_f = 0.0, total = 0.0;

  if (cfg.scheme == FrequencySchemeKind::prism) {
    const double dtheta = cfg.dtheta_domega
                              ? *cfg.dtheta_domega
                              : PrismScheme::dispersion_from_group_velocity(
                                    pt.vg_over_c, cfg.wavelength_cm, cfg.prism_apex_rad);
    PrismScheme scheme;
    scheme.kp = 0.0;
    scheme.dtheta_domega = dtheta;
    scheme.k0 = 2.0 * M_PI / cfg.wavelength_cm;
    scheme.sigma = pt.p.sigma;
    scheme.k = pt.p.k;
    const double scale = scheme.k0 * dtheta;  // d(kp)/d(omega)
    analytic = fisher_prism(scheme).value * scale * scale;  // per event, s^2
    InterferometerParams base = pt.p;
    base.phi = 2.0 * scheme.kp * scheme.sigma;
    p_f = postselection_probability(base);
    const FisherResult ftotal = fisher_prism_frequency(scheme, budget);
    total = ftotal.value;
    // Numeric route: curvature of the substituted density w.r.t. omega.
    const GridSpec grid = default_noiseless_grid(base);
    const double dphi_domega = 2.0 * scale * scheme.sigma;
    const DensityFamily family = [base, grid, dphi_domega](double omega) {
      InterferometerParams q = base;
      q.phi = base.phi + dphi_domega * omega;
      return pdf_noiseless(q, grid);
    };
    const double dw = recommended_dphi(base.k, grid.dx, base.phi) / dphi_domega;
    numeric = fisher_numeric(family, 0.0, dw).value;
  } else {
    GroupDelayScheme scheme;
    scheme.vg_cm_per_s = pt.vg_over_c * constants::c_cm_per_s;
    scheme.d_cm = pt.d_cm;
    scheme.k0 = 2.0 * M_PI / cfg.wavelength_cm;
    const FisherResult ftotal = fisher_group_delay(scheme, pt.p, budget);
    total = ftotal.value;
    p_f = postselection_probability(pt.p);
    analytic = scheme.tau_g_s() * scheme.tau_g_s() / p_f;  // per postselected event
    // Numeric route: curvature w.r.t. omega through phi(omega) with the
    // linear-dispersion slope d phi/d omega = tau_g.
    const double tau = scheme.tau_g_s();
    const GridSpec grid = default_noiseless_grid(pt.p);
    const InterferometerParams base = pt.p;
    const DensityFamily family = [base, grid, tau](double omega) {
      InterferometerParams q = base;
      q.phi = base.phi + tau * omega;
      return pdf_noiseless(q, grid);
    };
    const double dw = recommended_dphi(base.k, grid.dx, base.phi) / tau;
    numeric = fisher_numeric(family, 0.0, dw).value;
  }

  double dw_rad = std::numeric_limits<double>::quiet_NaN();
  double dw_hz = std::numeric_limits<double>::quiet_NaN();
  if (total > 0.0) {
    FisherResult t;
    t.value = total;
    t.basis = EventBasis::total_nu;
    const ResolvableShift shift = min_resolvable_shift(t);
    dw_rad = shift.rad_per_s;
    dw_hz = shift.hz;
  }

  return fmt(pt.sweep_value) + "," + fmt(analytic) + "," + fmt(numeric) + "," + fmt(p_f) +
         "," + fmt(p_f * numeric) + "," + fmt(total) + "," + fmt(dw_rad) + "," +
         fmt(dw_hz) + "," + fmt(nu);
}

std::string header_for(Subcommand sub) {
  switch (sub) {
    case Subcommand::mc_estimate:
      return "sweep_value,analytic_fisher,numeric_fisher,p_f,per_input_event_info,"
             "empirical_variance,crb_variance,variance_ratio,mean_postselected_events,"
             "boundary_hits,runtime_ms";
    case Subcommand::frequency:
      return "sweep_value,analytic_fisher,numeric_fisher,p_f,per_input_event_info,"
             "fisher_total_nu,delta_omega_min_rad_s,delta_omega_min_hz,nu_photons,"
             "runtime_ms";
    default:
      return "sweep_value,analytic_fisher,numeric_fisher,p_f,per_input_event_info,"
             "runtime_ms";
  }
}

void write_metadata(const ScanConfig& cfg, std::ostream& out) {
  out << "# iwv-version = " << kVersion << "\n";
  out << "# subcommand = " << subcommand_name(cfg.subcommand) << "\n";
  out << "# k = " << fmt(cfg.params.k) << "\n";
  out << "# phi = " << fmt(cfg.params.phi) << "\n";
  out << "# sigma = " << fmt(cfg.params.sigma) << "\n";
  out << "# k0 = " << fmt(cfg.params.k0) << "\n";
  out << "# ell1 = " << fmt(cfg.params.ell1) << "\n";
  out << "# ell2 = " << fmt(cfg.params.ell2) << "\n";
  out << "# sweep = " << cfg.sweep.parameter << "\n";
  out << "# min = " << fmt(cfg.sweep.min) << "\n";
  out << "# max = " << fmt(cfg.sweep.max) << "\n";
  out << "# points = " << cfg.sweep.points << "\n";
  out << "# spacing = " << (cfg.sweep.spacing == SweepSpacing::log ? "log" : "linear") << "\n";
  out << "# hold_ksigma = " << (cfg.hold_ksigma ? "true" : "false") << "\n";
  out << "# seed = " << cfg.seed << "\n";
  out << "# threads = " << cfg.threads << "\n";
  switch (cfg.subcommand) {
    case Subcommand::noise_scan:
      out << "# " << (cfg.j_is_ratio ? "j_ratio" : "j") << " = " << fmt(cfg.j_value) << "\n";
      break;
    case Subcommand::jitter_scan:
      out << "# " << (cfg.q_is_ratio ? "q_ratio" : "q") << " = " << fmt(cfg.q_value) << "\n";
      out << "# q_nodes = " << cfg.q_nodes << "\n";
      break;
    case Subcommand::mc_estimate:
      out << "# " << (cfg.j_is_ratio ? "j_ratio" : "j") << " = " << fmt(cfg.j_value) << "\n";
      out << "# " << (cfg.q_is_ratio ? "q_ratio" : "q") << " = " << fmt(cfg.q_value) << "\n";
      out << "# nu = " << cfg.nu_input << "\n";
      out << "# trials = " << cfg.trials << "\n";
      out << "# mle_halfwidth = " << fmt(cfg.mle_halfwidth_factor) << "\n";
      break;
    case Subcommand::frequency:
      out << "# scheme = "
          << (cfg.scheme == FrequencySchemeKind::prism ? "prism" : "group-delay") << "\n";
      out << "# power = " << fmt(cfg.power_W) << "\n";
      out << "# wavelength = " << fmt(cfg.wavelength_cm) << "\n";
      out << "# time = " << fmt(cfg.integration_time_s) << "\n";
      out << "# vg_over_c = " << fmt(cfg.vg_over_c) << "\n";
      out << "# d = " << fmt(cfg.cell_length_cm) << "\n";
      if (cfg.dtheta_domega) out << "# dtheta_domega = " << fmt(*cfg.dtheta_domega) << "\n";
      out << "# apex = " << fmt(cfg.prism_apex_rad) << "\n";
      break;
    default:
      break;
  }
}

}  // namespace

void run_scan(const ScanConfig& cfg, std::ostream& out) {
  const std::vector<double> values = cfg.sweep.values();
  std::vector<std::string> rows(values.size());
  std::vector<std::string> errors(values.size());

  auto eval_point = [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const PointParams pt = resolve_point(cfg, values[i]);
      std::string row;
      switch (cfg.subcommand) {
        case Subcommand::mc_estimate: row = mc_row(cfg, pt); break;
        case Subcommand::frequency: row = frequency_row(cfg, pt); break;
        default: row = scan_row(cfg, pt); break;
      }
      const auto stop = std::chrono::steady_clock::now();
      const double ms =
          std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
              .count();
      rows[i] = row + "," + fmt(ms);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || values.size() == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) eval_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(threads, values.size());
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
          eval_point(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!errors[i].empty()) {
      throw Error("sweep point " + std::to_string(i) + " (" + cfg.sweep.parameter + " = " +
                  fmt(values[i]) + "): " + errors[i]);
    }
  }

  write_metadata(cfg, out);
  out << header_for(cfg.subcommand) << "\n";
  for (const auto& row : rows) out << row << "\n";
  out.flush();
}

void run_scan_to_path(const ScanConfig& cfg) {
  if (cfg.output_path.empty()) {
    run_scan(cfg, std::cout);
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw Error("cannot open output path '" + cfg.output_path + "'");
  run_scan(cfg, file);
}

}  // namespace iwv
