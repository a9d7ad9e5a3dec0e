#include "ntw/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "ntw/errors.hpp"
#include "ntw/ftls.hpp"
#include "ntw/micromacro.hpp"
#include "ntw/pde.hpp"
#include "ntw/profile_p.hpp"
#include "ntw/profile_q.hpp"
#include "ntw/rates.hpp"

namespace ntw {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  if (!obj.is_object())
    throw validation_error(context + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw validation_error("unknown key '" + it.key() + "' in " + context);
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw validation_error(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw validation_error(std::string(key) + " must be a string");
  return obj[key].get<std::string>();
}

void apply_override(json& doc, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw validation_error("override must look like dotted.path=value: " +
                           spec);
  std::string path = spec.substr(0, eq);
  std::string raw = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // bare strings need no quoting on the command line
  }
  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot - pos);
    if (key.empty()) throw validation_error("empty key in override " + spec);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object())
      (*node)[key] = json::object();
    node = &(*node)[key];
    pos = dot + 1;
  }
}

Kernel parse_kernel(const json& k) {
  require_keys(k, {"shape", "h", "samples"}, "model.kernel");
  std::string shape = get_string(k, "shape", "linear_decreasing");
  double h = get_number(k, "h", 0.2);
  if (shape == "linear_decreasing") return Kernel::linear_decreasing(h);
  if (shape == "linear_increasing") return Kernel::linear_increasing(h);
  if (shape == "uniform") return Kernel::uniform(h);
  if (shape == "symmetric_uniform") return Kernel::symmetric_uniform(h);
  if (shape == "tabulated") {
    if (!k.contains("samples") || !k["samples"].is_array())
      throw validation_error("tabulated kernel requires a samples array");
    std::vector<double> samples;
    for (const auto& s : k["samples"]) {
      if (!s.is_number())
        throw validation_error("kernel samples must be numbers");
      samples.push_back(s.get<double>());
    }
    return Kernel::tabulated(h, std::move(samples));
  }
  throw validation_error("unknown kernel shape '" + shape + "'");
}

json kernel_to_json(const Kernel& k) {
  json out;
  switch (k.shape()) {
    case KernelShape::LinearDecreasing: out["shape"] = "linear_decreasing"; break;
    case KernelShape::LinearIncreasing: out["shape"] = "linear_increasing"; break;
    case KernelShape::Uniform: out["shape"] = "uniform"; break;
    case KernelShape::Tabulated: out["shape"] = "tabulated"; break;
    case KernelShape::SymmetricEven: out["shape"] = "symmetric_uniform"; break;
  }
  out["h"] = k.h();
  return out;
}

std::vector<double> parse_number_array(const json& arr, const char* what) {
  if (!arr.is_array())
    throw validation_error(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number())
      throw validation_error(std::string(what) + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const char* variant_name(Variant v) {
  return v == Variant::DensityAveraged ? "density_averaged"
                                       : "velocity_averaged";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir);
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f << doc.dump(2) << '\n';
  if (!f) throw io_error("write failed for " + path);
}

json rate_to_json(const RateResult& r) {
  json out;
  out["has_root"] = r.has_root;
  out["beta"] = r.b;
  if (r.has_root) {
    out["lambda"] = r.lambda;
    out["bracket"] = {r.lo, r.hi};
    out["residual"] = r.residual;
    out["lower_bound"] = r.lower_bound;
  } else {
    out["diagnostic"] = r.diagnostic;
  }
  return out;
}

bool wants(const RunConfig& cfg, const char* format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(),
                   format) != cfg.output.formats.end();
}

double resolved_dx(const RunConfig& cfg) {
  return cfg.numerics.dx > 0 ? cfg.numerics.dx : cfg.model.h() / 64.0;
}

std::string out_path(const RunConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.output.directory) / name).string();
}

void warn_if_short_domain(const Profile& p) {
  double left = -p.x_left();
  double right = p.x_right();
  if (p.meta().lambda_minus > 0 && left < 10.0 / p.meta().lambda_minus)
    std::fprintf(stderr,
                 "warning: left domain span %.3g is below 10/lambda_minus; "
                 "boundary clamping may dominate the tail error\n",
                 left);
  if (p.meta().lambda_plus > 0 && right < 10.0 / p.meta().lambda_plus)
    std::fprintf(stderr,
                 "warning: right domain span %.3g is below 10/lambda_plus; "
                 "boundary clamping may dominate the tail error\n",
                 right);
}

int run_rates(const RunConfig& cfg) {
  json rec;
  rec["continuous"]["plus"] =
      rate_to_json(continuous_rate(cfg.model, cfg.rho_plus, Side::PlusInfinity));
  rec["continuous"]["minus"] = rate_to_json(
      continuous_rate(cfg.model, cfg.rho_minus, Side::MinusInfinity));
  rec["discrete"]["plus"] =
      rate_to_json(discrete_rate(cfg.model, cfg.rho_plus, Side::PlusInfinity));
  rec["discrete"]["minus"] =
      rate_to_json(discrete_rate(cfg.model, cfg.rho_minus, Side::MinusInfinity));
  for (const char* level : {"continuous", "discrete"}) {
    const json& p = rec[level]["plus"];
    const json& m = rec[level]["minus"];
    rec[level]["lambda_plus"] = p.contains("lambda") ? p["lambda"] : json();
    rec[level]["lambda_minus"] = m.contains("lambda") ? m["lambda"] : json();
  }
  std::printf("%s\n", rec.dump(2).c_str());
  if (wants(cfg, "json")) write_json_file(out_path(cfg, "rates.json"), rec);
  return 0;
}

json profile_rows(const Profile& p, std::vector<std::vector<double>>& rows) {
  rows.clear();
  rows.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    rows.push_back({p.node(i), p.value(i)});
  json meta;
  meta["rho_minus"] = p.meta().rho_minus;
  meta["rho_plus"] = p.meta().rho_plus;
  meta["fbar"] = p.meta().fbar;
  meta["dx"] = p.dx();
  meta["variant"] = variant_name(p.meta().variant);
  meta["sigma"] = p.meta().sigma;
  return meta;
}

int run_profile_q(const RunConfig& cfg) {
  AsymptoticOptions opts;
  opts.convergence_tol = cfg.numerics.convergence_tol;
  opts.endpoint_tol = cfg.numerics.endpoint_tol;
  Profile q = solve_asymptotic(cfg.model, cfg.rho_minus, cfg.rho_plus,
                               cfg.numerics.domain_lo, cfg.numerics.domain_hi,
                               resolved_dx(cfg), opts);
  warn_if_short_domain(q);
  std::vector<std::vector<double>> rows;
  json meta = profile_rows(q, rows);
  meta["lambda_plus"] = q.meta().lambda_plus;
  meta["lambda_minus"] = q.meta().lambda_minus;
  if (wants(cfg, "csv"))
    emit_csv(out_path(cfg, "profile_q.csv"), {"x", "Q"}, rows);
  if (wants(cfg, "json"))
    write_json_file(out_path(cfg, "profile_q.json"), meta);
  return 0;
}

int run_profile_p(const RunConfig& cfg) {
  PAsymptoticOptions opts;
  opts.convergence_tol = cfg.numerics.convergence_tol;
  opts.endpoint_tol = cfg.numerics.endpoint_tol;
  double dx = cfg.numerics.dx > 0
                  ? cfg.numerics.dx
                  : std::min(cfg.model.h() / 64.0, cfg.model.ell / 8.0);
  Profile p = solve_p_asymptotic(cfg.model, cfg.rho_minus, cfg.rho_plus,
                                 cfg.numerics.domain_lo, cfg.numerics.domain_hi,
                                 dx, opts);
  warn_if_short_domain(p);
  std::vector<std::vector<double>> rows;
  json meta = profile_rows(p, rows);
  meta["ell"] = p.meta().ell;
  meta["t_p"] = p.meta().t_p;
  meta["lambda_plus_ell"] = p.meta().lambda_plus;
  meta["lambda_minus_ell"] = p.meta().lambda_minus;
  if (wants(cfg, "csv"))
    emit_csv(out_path(cfg, "profile_p.csv"), {"x", "P"}, rows);
  if (wants(cfg, "json"))
    write_json_file(out_path(cfg, "profile_p.json"), meta);
  return 0;
}

int run_ftls_sim(const RunConfig& cfg) {
  PAsymptoticOptions opts;
  opts.convergence_tol = cfg.numerics.convergence_tol;
  double dx = cfg.numerics.dx > 0
                  ? cfg.numerics.dx
                  : std::min(cfg.model.h() / 64.0, cfg.model.ell / 8.0);
  // The phi diagnostic needs a monotone reference family. For kernels with
  // no traveling profile (e.g. increasing density), fall back to the
  // linear-decreasing kernel of the same horizon so the diagnostic can still
  // chart divergence.
  std::string reference_kernel = "model";
  Profile reference = [&]() {
    try {
      return solve_p_asymptotic(cfg.model, cfg.rho_minus, cfg.rho_plus,
                                cfg.numerics.domain_lo, cfg.numerics.domain_hi,
                                dx, opts);
    } catch (const numerical_error&) {
      reference_kernel = "linear_decreasing_fallback";
      ModelConfig fallback = cfg.model;
      fallback.kernel = Kernel::linear_decreasing(cfg.model.h());
      return solve_p_asymptotic(fallback, cfg.rho_minus, cfg.rho_plus,
                                cfg.numerics.domain_lo, cfg.numerics.domain_hi,
                                dx, opts);
    }
  }();
  double dt = cfg.numerics.dt > 0
                  ? cfg.numerics.dt
                  : 0.1 * cfg.model.ell / cfg.model.velocity.v(0.0);
  CarState state = oscillatory_ic(cfg.model);
  std::vector<std::vector<double>> rows;
  std::vector<double> range_series;
  double final_shift = 0.0;
  double jammed_at = -1.0;  // platoon reached the minimum spacing (divergence)
  for (double target : cfg.numerics.snapshot_times) {
    if (target < state.t - 1e-12)
      throw validation_error("snapshot_times must be sorted");
    double gap = target - state.t;
    if (gap > 1e-12) {
      int n = static_cast<int>(std::ceil(gap / dt - 1e-9));
      double sub = gap / n;
      try {
        for (int k = 0; k < n; ++k) state = ftls_step(state, sub, cfg.model);
      } catch (const numerical_error&) {
        jammed_at = state.t;
      }
    }
    if (jammed_at >= 0) break;
    PhiDiagnostic d = phi_diagnostic(state, reference);
    range_series.push_back(d.range);
    final_shift = d.mean_shift;
    for (std::size_t i = 0; i + 1 < state.z.size(); ++i)
      rows.push_back({target, static_cast<double>(i), state.z[i],
                      car_density(state, cfg.model, i), d.phi[i]});
  }
  if (wants(cfg, "csv"))
    emit_csv(out_path(cfg, "ftls.csv"), {"t", "i", "z", "rho", "phi"}, rows);
  if (wants(cfg, "json")) {
    json summary;
    summary["snapshot_times"] = cfg.numerics.snapshot_times;
    summary["phi_range_series"] = range_series;
    summary["final_shift_estimate"] = final_shift;
    summary["reference_kernel"] = reference_kernel;
    if (jammed_at >= 0) summary["jammed_at"] = jammed_at;
    write_json_file(out_path(cfg, "ftls.json"), summary);
  }
  return 0;
}

int run_pde_sim(const RunConfig& cfg) {
  double dx = resolved_dx(cfg);
  double dt = cfg.numerics.dt > 0 ? cfg.numerics.dt : 0.4 * dx;
  Scheme scheme;
  if (cfg.numerics.scheme == "upwind")
    scheme = Scheme::Upwind;
  else if (cfg.numerics.scheme == "lax_friedrichs")
    scheme = Scheme::LaxFriedrichs;
  else
    throw validation_error("unknown scheme '" + cfg.numerics.scheme + "'");

  FieldState state = oscillatory_field_ic(cfg.numerics.domain_lo,
                                          cfg.numerics.domain_hi, dx);
  AsymptoticOptions opts;
  opts.convergence_tol = cfg.numerics.convergence_tol;
  Profile q = solve_asymptotic(cfg.model, state.rho_minus, state.rho_plus,
                               cfg.numerics.domain_lo, cfg.numerics.domain_hi,
                               dx, opts);
  std::vector<FieldState> series;
  std::vector<std::vector<double>> rows;
  for (double target : cfg.numerics.snapshot_times) {
    if (target < state.t - 1e-12)
      throw validation_error("snapshot_times must be sorted");
    double gap = target - state.t;
    if (gap > 1e-12) {
      int n = static_cast<int>(std::ceil(gap / dt - 1e-9));
      double sub = gap / n;
      for (int k = 0; k < n; ++k) state = pde_step(state, sub, cfg.model, scheme);
    }
    series.push_back(state);
    for (std::size_t j = 0; j < state.rho.size(); ++j)
      rows.push_back({target, state.x0 + dx * static_cast<double>(j),
                      state.rho[j]});
  }
  InstabilityReport rep =
      instability_metric(series, &q, cfg.model.h() + 0.5);
  if (wants(cfg, "csv"))
    emit_csv(out_path(cfg, "pde.csv"), {"t", "x", "rho"}, rows);
  if (wants(cfg, "json")) {
    json summary;
    summary["snapshot_times"] = cfg.numerics.snapshot_times;
    summary["tv_series"] = rep.tv;
    summary["sup_dist_to_Q_series"] = rep.sup_dist;
    summary["classification"] = rep.classification;
    write_json_file(out_path(cfg, "pde.json"), summary);
  }
  return 0;
}

int run_micro_macro(const RunConfig& cfg) {
  double ell_min = *std::min_element(cfg.ells.begin(), cfg.ells.end());
  double dx = cfg.numerics.dx > 0
                  ? cfg.numerics.dx
                  : std::min(cfg.model.h() / 64.0, ell_min / 8.0);
  ConvergenceReport rep =
      run_study(cfg.model, cfg.ells, cfg.rho_minus, cfg.rho_plus,
                cfg.numerics.domain_lo, cfg.numerics.domain_hi, dx);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.ells.size(); ++i)
    rows.push_back({rep.ells[i], rep.sup_errors[i], rep.rate_errors_plus[i],
                    rep.rate_errors_minus[i],
                    i ? rep.ratios[i - 1] : std::nan("")});
  if (wants(cfg, "csv"))
    emit_csv(out_path(cfg, "micro_macro.csv"),
             {"ell", "sup_error", "rate_error_plus", "rate_error_minus",
              "ratio"},
             rows);
  if (wants(cfg, "json")) {
    json summary;
    summary["lambda_plus_continuum"] = rep.lambda_plus_cont;
    summary["lambda_minus_continuum"] = rep.lambda_minus_cont;
    summary["rate_ratios"] = rep.rate_ratios;
    summary["failures"] = rep.failures;
    write_json_file(out_path(cfg, "micro_macro.json"), summary);
  }
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  json base = cfg.normalized;
  base.erase("command");
  base.erase("runs");
  struct Entry {
    std::string directory;
    std::string command;
    std::string status;
    std::string error;
  };
  std::vector<std::future<Entry>> futures;
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    json doc = base;
    doc.merge_patch(cfg.runs[i]);
    std::string dir = (std::filesystem::path(cfg.output.directory) /
                       ("run_" + std::to_string(i)))
                          .string();
    doc["output"]["directory"] = dir;
    futures.push_back(std::async(std::launch::async, [doc, dir]() {
      Entry e;
      e.directory = dir;
      try {
        RunConfig sub = parse_config_json(doc);
        e.command = sub.command;
        if (sub.command == "sweep")
          throw validation_error("nested sweeps are not supported");
        run_command(sub);
        e.status = "ok";
      } catch (const std::exception& ex) {
        e.status = "failed";
        e.error = ex.what();
      }
      return e;
    }));
  }
  json index = json::array();
  bool any_failed = false;
  for (auto& f : futures) {
    Entry e = f.get();
    json rec;
    rec["directory"] = e.directory;
    rec["command"] = e.command;
    rec["status"] = e.status;
    if (!e.error.empty()) rec["error"] = e.error;
    any_failed = any_failed || e.status != "ok";
    index.push_back(rec);
  }
  write_json_file(out_path(cfg, "index.json"), index);
  return any_failed ? 1 : 0;
}

}  // namespace

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_sig(row[i]);
    }
    out << '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f << out.str();
  if (!f) throw io_error("write failed for " + path);
}

RunConfig parse_config_json(nlohmann::json doc,
                            const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) apply_override(doc, o);
  require_keys(doc, {"command", "model", "problem", "numerics", "output",
                     "runs"},
               "config");

  RunConfig cfg;
  cfg.command = get_string(doc, "command", "");
  static const char* kCommands[] = {"rates",   "profile-q",   "profile-p",
                                    "ftls-sim", "pde-sim",    "micro-macro",
                                    "sweep"};
  bool known = false;
  for (const char* c : kCommands) known = known || cfg.command == c;
  if (!known)
    throw validation_error("unknown or missing command '" + cfg.command + "'");

  json model = doc.value("model", json::object());
  require_keys(model, {"kernel", "velocity", "ell", "variant", "sigma"},
               "model");
  Kernel kernel = parse_kernel(model.value("kernel", json::object()));
  json vel = model.value("velocity", json::object());
  require_keys(vel, {"family"}, "model.velocity");
  std::string family = get_string(vel, "family", "linear");
  if (family != "linear")
    throw validation_error("unsupported velocity family '" + family + "'");
  double ell = get_number(model, "ell", 0.01);
  std::string variant = get_string(model, "variant", "density_averaged");
  Variant var;
  if (variant == "density_averaged")
    var = Variant::DensityAveraged;
  else if (variant == "velocity_averaged")
    var = Variant::VelocityAveraged;
  else
    throw validation_error("unknown variant '" + variant + "'");
  double sigma = get_number(model, "sigma", 0.0);
  if (ell <= 0) throw validation_error("ell must be positive");
  cfg.model = ModelConfig{kernel, VelocityLaw::linear(), ell, var, sigma};
  cfg.model.validate();

  json problem = doc.value("problem", json::object());
  require_keys(problem, {"rho_minus", "rho_plus", "ells"}, "problem");
  cfg.rho_minus = get_number(problem, "rho_minus", 0.2);
  cfg.rho_plus = get_number(problem, "rho_plus", 0.8);
  if (!(cfg.rho_minus > 0 && cfg.rho_minus < cfg.rho_plus && cfg.rho_plus < 1))
    throw validation_error("need 0 < rho_minus < rho_plus < 1");
  if (problem.contains("ells")) {
    cfg.ells = parse_number_array(problem["ells"], "problem.ells");
    if (cfg.ells.empty())
      throw validation_error("problem.ells must be nonempty");
    for (double e : cfg.ells)
      if (e <= 0) throw validation_error("ell must be positive");
  }

  json num = doc.value("numerics", json::object());
  require_keys(num, {"dx", "dt", "domain", "snapshot_times", "scheme",
                     "tolerances"},
               "numerics");
  cfg.numerics.dx = get_number(num, "dx", 0.0);
  cfg.numerics.dt = get_number(num, "dt", 0.0);
  if (cfg.numerics.dx < 0) throw validation_error("dx must be positive");
  if (cfg.numerics.dt < 0) throw validation_error("dt must be positive");
  if (num.contains("domain")) {
    std::vector<double> d = parse_number_array(num["domain"], "domain");
    if (d.size() != 2 || !(d[0] < d[1]))
      throw validation_error("domain must be [lo, hi] with lo < hi");
    cfg.numerics.domain_lo = d[0];
    cfg.numerics.domain_hi = d[1];
  }
  if (num.contains("snapshot_times")) {
    cfg.numerics.snapshot_times =
        parse_number_array(num["snapshot_times"], "snapshot_times");
    if (!std::is_sorted(cfg.numerics.snapshot_times.begin(),
                        cfg.numerics.snapshot_times.end()))
      throw validation_error("snapshot_times must be sorted");
  }
  cfg.numerics.scheme = get_string(num, "scheme", "upwind");
  if (cfg.numerics.scheme != "upwind" &&
      cfg.numerics.scheme != "lax_friedrichs")
    throw validation_error("unknown scheme '" + cfg.numerics.scheme + "'");
  json tol = num.value("tolerances", json::object());
  require_keys(tol, {"convergence", "endpoint"}, "numerics.tolerances");
  cfg.numerics.convergence_tol = get_number(tol, "convergence", 1e-7);
  cfg.numerics.endpoint_tol = get_number(tol, "endpoint", 1e-4);
  if (cfg.numerics.convergence_tol <= 0 || cfg.numerics.endpoint_tol <= 0)
    throw validation_error("tolerances must be positive");

  json out = doc.value("output", json::object());
  require_keys(out, {"directory", "formats"}, "output");
  cfg.output.directory = get_string(out, "directory", ".");
  if (out.contains("formats")) {
    if (!out["formats"].is_array())
      throw validation_error("output.formats must be an array");
    cfg.output.formats.clear();
    for (const auto& f : out["formats"]) {
      if (!f.is_string())
        throw validation_error("output.formats entries must be strings");
      std::string fmt = f.get<std::string>();
      if (fmt != "csv" && fmt != "json")
        throw validation_error("unknown output format '" + fmt + "'");
      cfg.output.formats.push_back(fmt);
    }
  }

  if (doc.contains("runs")) {
    if (cfg.command != "sweep")
      throw validation_error("'runs' is only valid for the sweep command");
    if (!doc["runs"].is_array())
      throw validation_error("runs must be an array");
    for (const auto& r : doc["runs"]) {
      if (!r.is_object())
        throw validation_error("runs entries must be objects");
      cfg.runs.push_back(r);
    }
  } else if (cfg.command == "sweep") {
    throw validation_error("sweep requires a runs array");
  }

  // Defaults-filled normalized document (round-trips through this parser).
  json norm;
  norm["command"] = cfg.command;
  norm["model"]["kernel"] = kernel_to_json(cfg.model.kernel);
  if (cfg.model.kernel.shape() == KernelShape::Tabulated)
    norm["model"]["kernel"]["samples"] = model["kernel"]["samples"];
  norm["model"]["velocity"]["family"] = family;
  norm["model"]["ell"] = cfg.model.ell;
  norm["model"]["variant"] = variant_name(cfg.model.variant);
  norm["model"]["sigma"] = cfg.model.sigma;
  norm["problem"]["rho_minus"] = cfg.rho_minus;
  norm["problem"]["rho_plus"] = cfg.rho_plus;
  norm["problem"]["ells"] = cfg.ells;
  norm["numerics"]["dx"] = cfg.numerics.dx;
  norm["numerics"]["dt"] = cfg.numerics.dt;
  norm["numerics"]["domain"] = {cfg.numerics.domain_lo, cfg.numerics.domain_hi};
  norm["numerics"]["snapshot_times"] = cfg.numerics.snapshot_times;
  norm["numerics"]["scheme"] = cfg.numerics.scheme;
  norm["numerics"]["tolerances"]["convergence"] = cfg.numerics.convergence_tol;
  norm["numerics"]["tolerances"]["endpoint"] = cfg.numerics.endpoint_tol;
  norm["output"]["directory"] = cfg.output.directory;
  norm["output"]["formats"] = cfg.output.formats;
  if (cfg.command == "sweep") norm["runs"] = doc["runs"];
  cfg.normalized = std::move(norm);
  return cfg;
}

RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw validation_error("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(std::move(doc), overrides);
}

int run_command(const RunConfig& cfg) {
  ensure_dir(cfg.output.directory);
  if (cfg.command == "rates") return run_rates(cfg);
  if (cfg.command == "profile-q") return run_profile_q(cfg);
  if (cfg.command == "profile-p") return run_profile_p(cfg);
  if (cfg.command == "ftls-sim") return run_ftls_sim(cfg);
  if (cfg.command == "pde-sim") return run_pde_sim(cfg);
  if (cfg.command == "micro-macro") return run_micro_macro(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  throw validation_error("unknown command '" + cfg.command + "'");
}

}  // namespace ntw
