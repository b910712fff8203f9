#include "revwalk/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace revwalk::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string fixed17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shortest(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(config.out_path, std::ios::binary);
  if (!f) throw SpecError("cannot write '" + config.out_path + "'");
  f << text;
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

template <typename F>
std::optional<long> unless_unmixed(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotMixedWithin) throw;
    return std::nullopt;
  }
}

long resolved_t_max(const RunConfig& config, const Kernel& p) {
  return config.t_max > 0 ? config.t_max : default_t_max(p);
}

void require_eps_range(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) fail(ErrorCode::InvalidParameter, std::string(name) + " must lie in (0, 1)");
}

}  // namespace

Exit exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStochastic:
    case ErrorCode::InvalidProbability:
      return Exit::parse_error;
    case ErrorCode::CriterionNotMet:
    case ErrorCode::NotMixedWithin:
      return Exit::criterion_not_met;
    case ErrorCode::GapClosed:
      return Exit::gap_closed;
    case ErrorCode::ConstructionFailed:
    case ErrorCode::ScalingViolation:
      return Exit::verification_failed;
    default:
      return Exit::precondition;
  }
}

Exit cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Kernel p = load_kernel_spec(config.kernel_path);
  const double eps = config.eps.value_or(0.25);
  require_eps_range(eps, "eps");
  const Distribution pi = stationary_distribution(p);
  const KernelClass c = classify(p, pi);
  const long t_max = resolved_t_max(config, p);
  const SpectralReport rep = pseudo_spectral_gap(p, pi, config.k_max);

  ojson doc;
  doc["n"] = p.size();
  doc["classification"] = {
      {"irreducible", c.irreducible},
      {"aperiodic", c.aperiodic ? ojson(*c.aperiodic) : ojson(nullptr)},
      {"ergodic", c.ergodic},
      {"reversible", c.reversible.value_or(false)},
      {"lazy", c.lazy},
      {"period", c.period},
  };
  doc["reversible"] = c.reversible.value_or(false);
  doc["pi"] = std::vector<double>(pi.probs().data(), pi.probs().data() + pi.size());
  doc["pi_min"] = pi.min();
  doc["gamma"] = *c.reversible ? ojson(spectral_gap(p, pi)) : ojson(nullptr);
  doc["gamma_pp_star"] = rep.gamma;
  doc["gamma_inf"] = rep.gamma_inf;
  doc["tau_rev"] = rep.tau_rev;
  doc["k_max"] = rep.k_max;
  doc["saturated"] = rep.saturated;
  doc["eps"] = eps;
  doc["t_max"] = t_max;
  const auto tau = unless_unmixed([&] { return mixing_time(p, pi, eps, t_max); });
  const auto htau = unless_unmixed([&] { return hellinger_mixing_time(p, pi, eps, t_max); });
  doc["tau"] = tau ? ojson(*tau) : ojson(nullptr);
  doc["hellinger_tau"] = htau ? ojson(*htau) : ojson(nullptr);
  if (tau) {
    const MixingBounds b = mixing_gap_bounds_check(p, pi, eps, t_max, config.k_max);
    doc["bounds"] = {
        {"lower", b.lower},
        {"upper", b.upper},
        {"gamma_inf", b.gamma_inf},
        {"k_used", b.k_used},
        {"holds", b.lower <= static_cast<double>(b.tau) && static_cast<double>(b.tau) <= b.upper},
    };
  } else {
    doc["bounds"] = nullptr;
  }
  emit(config, out, doc.dump(2) + "\n");
  return Exit::ok;
}

Exit cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Kernel p = load_kernel_spec(config.kernel_path);
  const Distribution pi = stationary_distribution(p);
  if (!(config.rho > 0.0 && config.rho < 1.0)) fail(ErrorCode::InvalidParameter, "rho must lie in (0, 1)");
  const std::vector<SweepRow> rows = sweep(p, pi, config.j_max);
  std::optional<long> t_rev;
  for (const SweepRow& r : rows) {
    if (r.gamma_q && r.one_minus_pi_d_pi <= config.rho * *r.gamma_q) {
      t_rev = r.j;
      break;
    }
  }
  const auto tau = unless_unmixed([&] { return mixing_time(p, pi, 0.25, resolved_t_max(config, p)); });

  std::ostringstream csv;
  csv << "j,gamma_Q,one_minus_piDpi,lambda_max,overlap_pi_mu,ratio\n";
  auto cell = [](const std::optional<double>& v) { return v ? fixed17(*v) : std::string(); };
  for (const SweepRow& r : rows) {
    csv << r.j << ',' << cell(r.gamma_q) << ',' << fixed17(r.one_minus_pi_d_pi) << ','
        << cell(r.lambda_max) << ',' << cell(r.overlap) << ',' << cell(r.ratio) << '\n';
  }
  csv << "# t_rev=" << (t_rev ? std::to_string(*t_rev) : "none")
      << ",tau=" << (tau ? std::to_string(*tau) : "none") << ",rho=" << shortest(config.rho) << '\n';
  emit(config, out, csv.str());
  if (!t_rev) {
    err << "reversibility on pi-average not reached within j_max = " << config.j_max << '\n';
    return Exit::criterion_not_met;
  }
  return Exit::ok;
}

Exit cmd_reflect(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Kernel p = load_kernel_spec(config.kernel_path);
  const double eps = config.eps.value_or(0.1);
  require_eps_range(eps, "eps");
  const Distribution pi = stationary_distribution(p);

  ReflectionResult r;
  if (config.method == "curved") {
    r = reflect_curved(p, pi, eps, config.k_max);
  } else if (config.method == "flat") {
    r = reflect_flat(p, pi, eps, config.rho, config.j_max);
  } else if (config.method == "mixed") {
    r = reflect_mixed(p, pi, config.eps_mix, eps, resolved_t_max(config, p));
  } else {
    throw SpecError("unknown method '" + config.method + "'");
  }
  const double target = r.method == ReflectionMethod::curved ? r.error_vs_pi : *r.error_vs_mu;

  ojson doc;
  doc["method"] = to_string(r.method);
  doc["walk_uses"] = r.walk_uses;
  doc["error_vs_pi"] = r.error_vs_pi;
  doc["error_vs_mu"] = optional_number(r.error_vs_mu);
  doc["overlap_pi_mu"] = optional_number(r.overlap_pi_mu);
  doc["degree"] = r.degree;
  doc["k_steps"] = r.k_steps;
  doc["eps"] = eps;
  doc["target_error"] = target;
  doc["polynomial"] = r.polynomial;
  doc["certified"] = r.certified;
  doc["beta"] = r.beta;
  doc["gap"] = r.gap;
  if (r.overlap_bound) doc["overlap_bound"] = *r.overlap_bound;
  if (r.overlap_bound_holds) {
    doc["eps_mix"] = config.eps_mix;
    doc["overlap_bound_holds"] = *r.overlap_bound_holds;
  }
  emit(config, out, doc.dump(2) + "\n");
  if (!config.poly_out_path.empty()) {
    std::ofstream f(config.poly_out_path, std::ios::binary);
    if (!f) throw SpecError("cannot write '" + config.poly_out_path + "'");
    f << to_text(r.poly);
  }
  if (target > eps) {
    err << "reflection error " << target << " exceeds eps " << eps << '\n';
    return Exit::verification_failed;
  }
  return Exit::ok;
}

Exit cmd_qsd(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Kernel p = load_kernel_spec(config.kernel_path);
  const Distribution pi = stationary_distribution(p);
  std::vector<StateSet> subsets;
  try {
    for (const std::string& s : config.subsets) subsets.push_back(parse_subset(s));
  } catch (const SpecError& e) {
    err << e.what() << '\n';
    return Exit::precondition;
  }
  const AbsorbingDecomposition decomp = AbsorbingDecomposition::make(p.size(), subsets);
  std::vector<long> js = config.js;
  if (js.empty()) {
    const long m = static_cast<long>(subsets.front().size());
    js = {1, m, m * m, 4 * m * m};
  }

  ojson doc;
  doc["subsets"] = subsets;
  doc["restriction"] = "renormalized";
  doc["tolerance"] = 1e-10;
  bool all = true;
  ojson results = ojson::array();
  for (long j : js) {
    const QsdBound b = qsd_lower_bound(p, pi, decomp, j);
    const bool pass = b.lhs >= b.rhs - 1e-10;
    all = all && pass;
    results.push_back({{"j", j},
                       {"lhs", b.lhs},
                       {"rhs", b.rhs},
                       {"pass", pass},
                       {"pi_mass", b.pi_mass},
                       {"min_survival", b.min_survival},
                       {"mixing_factor", b.mixing_factor}});
  }
  doc["results"] = results;
  doc["pass"] = all;
  emit(config, out, doc.dump(2) + "\n");
  return all ? Exit::ok : Exit::verification_failed;
}

Exit run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<Exit(const RunConfig&, std::ostream&, std::ostream&)>>
      commands = {{"analyze", cmd_analyze},
                  {"sweep", cmd_sweep},
                  {"reflect", cmd_reflect},
                  {"qsd", cmd_qsd},
                  {"verify", cmd_verify}};
  const auto it = commands.find(config.command);
  if (it == commands.end()) {
    err << "unknown command '" << config.command << "'\n";
    return Exit::parse_error;
  }
  try {
    if (config.command != "verify" && config.kernel_path.empty()) throw SpecError("--kernel is required");
    if (config.j_max < 1 || config.k_max < 1 || config.t_max < 0) {
      throw SpecError("integer limits must be at least 1");
    }
    return it->second(config, out, err);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return Exit::parse_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  }
}

}  // namespace revwalk::cli
