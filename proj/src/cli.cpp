#include "fractime/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <charconv>
#include <functional>
#include <map>
#include <iomanip>
#include <sstream>

#include "detail/format.hpp"
#include "fractime/asymptotics.hpp"
#include "fractime/errors.hpp"
#include "fractime/gfde.hpp"
#include "fractime/mc.hpp"
#include "fractime/models.hpp"
#include "fractime/special.hpp"
#include "fractime/subordinate.hpp"

#ifndef FRACTIME_VERSION
#define FRACTIME_VERSION "0.0.0"
#endif

namespace fractime::cli {

namespace {

using json = nlohmann::ordered_json;
using detail::fmt_num;
using detail::fmt_sig;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  // model
  std::string model = "stable";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> s;
  std::optional<double> scale;
  // dynamic and abscissae
  std::string dynamic = "mono:1";
  std::optional<std::string> grid;
  std::optional<double> t;
  // output
  std::optional<std::string> out_path;
  bool json_out = false;
  // inversion
  std::string method = "talbot";
  std::optional<int> terms;
  double shape = 0.2;
  // Monte Carlo
  std::uint64_t seed = McConfig{}.seed;
  std::size_t paths = McConfig{}.n_paths;
  unsigned workers = 1;
  double dt = McConfig{}.time_step;
  double cutoff = McConfig{}.jump_cutoff;
  // subcommand specific
  std::optional<double> x;
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> z;
  std::string transform = "ue";
  std::string route = "transform";
  double a = 1.0;
  double u0 = 1.0;
  double h = 1e-3;
  double horizon = 5.0;
  double grading = 0.2;
  std::size_t stride = 100;
  std::string suite = "all";
};

// ---------------------------------------------------------------------------
// Argument interpretation
// ---------------------------------------------------------------------------

SubordinatorModel build_model(const Options& o) {
  auto forbid = [&](const std::optional<double>& v, const char* flag, const std::string& cls) {
    if (v) throw UsageError(std::string(flag) + " does not apply to model " + cls);
  };
  const std::string& m = o.model;
  if (m == "stable") {
    forbid(o.beta, "--beta", m);
    forbid(o.s, "--s", m);
    forbid(o.scale, "--scale", m);
    return SubordinatorModel::stable(o.alpha.value_or(0.5));
  }
  if (m == "two-stable") {
    forbid(o.s, "--s", m);
    forbid(o.scale, "--scale", m);
    return SubordinatorModel::two_stable(o.alpha.value_or(0.5), o.beta.value_or(0.75));
  }
  if (m == "distributed-order") {
    forbid(o.alpha, "--alpha", m);
    forbid(o.beta, "--beta", m);
    forbid(o.s, "--s", m);
    forbid(o.scale, "--scale", m);
    return SubordinatorModel::distributed_order();
  }
  if (m == "c3") {
    forbid(o.alpha, "--alpha", m);
    forbid(o.beta, "--beta", m);
    return SubordinatorModel::parametric_c3(o.s.value_or(1.0), o.scale.value_or(1.0));
  }
  if (std::filesystem::is_regular_file(m)) {
    if (o.alpha || o.beta || o.s || o.scale) {
      throw UsageError("parameter flags cannot be combined with a model file");
    }
    std::ifstream in(m);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
  }
  throw UsageError("unknown model '" + m + "' (stable, two-stable, distributed-order, c3 or a config file)");
}

InversionConfig build_inversion(const Options& o) {
  InversionConfig cfg;
  if (o.method == "talbot") {
    cfg = InversionConfig::talbot(o.terms.value_or(32), o.shape);
  } else if (o.method == "gs") {
    cfg = InversionConfig::gaver_stehfest(o.terms.value_or(16));
  } else {
    throw UsageError("--method must be talbot or gs");
  }
  cfg.validate();
  return cfg;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--grid expects <min>:<max>:<points>");
  auto number = [&](std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw UsageError("--grid: bad number '" + std::string(text) + "'");
    return v;
  };
  const std::string_view sv(spec);
  const double lo = number(sv.substr(0, c1));
  const double hi = number(sv.substr(c1 + 1, c2 - c1 - 1));
  const double pts = number(sv.substr(c2 + 1));
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw UsageError("--grid needs 0 < min < max");
  if (!(pts >= 2.0) || pts != std::floor(pts) || pts > 1e6) throw UsageError("--grid needs an integer point count >= 2");
  return log_grid(lo, hi, static_cast<std::size_t>(pts));
}

std::vector<double> abscissae(const Options& o, const char* single_flag) {
  if (o.grid && o.t) throw UsageError(std::string("use either --grid or ") + single_flag + ", not both");
  if (o.grid) return parse_grid(*o.grid);
  if (o.t) return {*o.t};
  throw UsageError(std::string("one of --grid or ") + single_flag + " is required");
}

std::string inversion_echo(const InversionConfig& cfg) {
  if (cfg.method == InversionMethod::Talbot) {
    return "method=talbot terms=" + std::to_string(cfg.terms) + " shape=" + fmt_num(cfg.talbot_shape);
  }
  return "method=gs terms=" + std::to_string(cfg.terms);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
};

Manifest base_manifest(const std::string& command) {
  Manifest m;
  m.add("command", command);
  m.add("version", FRACTIME_VERSION);
  return m;
}

struct Table {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> std_error;  ///< empty unless Monte Carlo
};

void write_csv(std::ostream& os, const Manifest& manifest, const Table& table) {
  os << "# fractime " << FRACTIME_VERSION << '\n';
  for (const auto& [k, v] : manifest.entries) os << "# " << k << '=' << v << '\n';
  os << (table.std_error.empty() ? "t,value\n" : "t,value,std_error\n");
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    os << fmt_num(table.t[i]) << ',' << fmt_num(table.value[i]);
    if (!table.std_error.empty()) os << ',' << fmt_num(table.std_error[i]);
    os << '\n';
  }
}

json manifest_json(const Manifest& manifest) {
  json j = json::object();
  for (const auto& [k, v] : manifest.entries) j[k] = v;
  return j;
}

json table_json(const Table& table) {
  json rows = json::array();
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    json r = {{"t", table.t[i]}, {"value", table.value[i]}};
    if (!table.std_error.empty()) r["std_error"] = table.std_error[i];
    rows.push_back(std::move(r));
  }
  return rows;
}

json fit_json(const AsymptoticFit& f) {
  return {{"mode", to_string(f.mode)}, {"log_C", f.log_C},      {"p", f.p},
          {"q", f.q},                  {"rms_residual", f.rms_residual}, {"t_min", f.t_min},
          {"t_max", f.t_max}};
}

// Writes --out when requested, then JSON or plain output to `out`. A single
// abscissa without --json prints only the value.
void emit(const Options& o, std::ostream& out, const Manifest& manifest, const Table& table,
          const std::optional<json>& fit = std::nullopt) {
  if (o.out_path) {
    std::ofstream f(*o.out_path);
    if (!f) throw UsageError("cannot open '" + *o.out_path + "' for writing");
    write_csv(f, manifest, table);
    if (!f) throw UsageError("failed writing '" + *o.out_path + "'");
  }
  if (o.json_out) {
    json j;
    j["command"] = manifest.entries.front().second;
    j["manifest"] = manifest_json(manifest);
    j["results"] = table_json(table);
    if (fit) j["fit"] = *fit;
    out << j.dump(2) << '\n';
    return;
  }
  if (o.out_path) return;
  if (table.t.size() == 1) {
    out << fmt_num(table.value[0]);
    if (!table.std_error.empty()) out << " +- " << fmt_num(table.std_error[0]);
    out << '\n';
    return;
  }
  write_csv(out, manifest, table);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_ml(const Options& o, std::ostream& out) {
  const double alpha = o.alpha.value_or(0.5);
  if (o.grid && o.x) throw UsageError("use either --grid or --x, not both");
  std::vector<double> xs = o.grid ? parse_grid(*o.grid) : std::vector<double>{};
  if (!o.grid) {
    if (!o.x) throw UsageError("one of --grid or --x is required");
    xs = {*o.x};
  }
  Table table;
  for (double x : xs) {
    table.t.push_back(x);
    table.value.push_back(mittag_leffler(alpha, x));
  }
  Manifest m = base_manifest("ml");
  m.add("function", "E_alpha(-x)");
  m.add("alpha", fmt_num(alpha));
  m.add("abscissa", "x");
  emit(o, out, m, table);
  return kExitOk;
}

int cmd_wright(const Options& o, std::ostream& out) {
  if (!o.mu || !o.nu || !o.z) throw UsageError("wright needs --mu, --nu and --z");
  const double v = wright(*o.mu, *o.nu, *o.z);
  Manifest m = base_manifest("wright");
  m.add("mu", fmt_num(*o.mu));
  m.add("nu", fmt_num(*o.nu));
  Table table{{*o.z}, {v}, {}};
  m.add("abscissa", "z");
  emit(o, out, m, table);
  return kExitOk;
}

Manifest curve_manifest(const std::string& command, const SubordinatorModel& model, const Options& o,
                        const std::string& dynamic) {
  Manifest m = base_manifest(command);
  m.add("model", model.describe());
  if (!dynamic.empty()) m.add("dynamic", dynamic);
  m.add("grid", o.grid ? *o.grid : "t=" + fmt_num(*o.t));
  return m;
}

int cmd_invert(const Options& o, std::ostream& out) {
  const auto model = build_model(o);
  const auto cfg = build_inversion(o);
  const auto ts = abscissae(o, "--t");
  require_increasing_positive(ts, "invert");
  ComplexTransform F;
  std::string dyn_text;
  std::optional<Dynamic> dynamic;
  if (o.transform == "ue" || o.transform == "cesaro") {
    dynamic = parse_dynamic(o.dynamic);
    dyn_text = dynamic->describe();
  }
  Table table;
  table.t = ts;
  table.value.resize(ts.size());
  if (o.transform == "ue") {
    for (std::size_t i = 0; i < ts.size(); ++i) table.value[i] = ue_eval(model, *dynamic, ts[i], cfg);
  } else if (o.transform == "cesaro") {
    for (std::size_t i = 0; i < ts.size(); ++i) table.value[i] = cesaro_mean(model, *dynamic, ts[i], cfg);
  } else if (o.transform == "kernel") {
    F = [&](cplx l) { return model.kappa_continued(l); };
    for (std::size_t i = 0; i < ts.size(); ++i) table.value[i] = invert(F, ts[i], cfg);
  } else {
    throw UsageError("--transform must be ue, cesaro or kernel");
  }
  Manifest m = curve_manifest("invert", model, o, dyn_text);
  m.add("transform", o.transform);
  m.add("inversion", inversion_echo(cfg));
  emit(o, out, m, table);
  return kExitOk;
}

int cmd_subordinate(const Options& o, std::ostream& out) {
  const auto model = build_model(o);
  const auto dynamic = parse_dynamic(o.dynamic);
  const auto cfg = build_inversion(o);
  const auto ts = abscissae(o, "--t");
  Route route = Route::Transform;
  if (o.route == "closed") {
    route = Route::ClosedForm;
  } else if (o.route == "quadrature") {
    route = Route::Quadrature;
  } else if (o.route != "transform") {
    throw UsageError("--route must be transform, closed or quadrature");
  }
  const auto curve = subordinate_curve(model, dynamic, ts, route, cfg, o.workers);
  Manifest m = curve_manifest("subordinate", model, o, dynamic.describe());
  m.add("route", o.route);
  if (route == Route::Transform) m.add("inversion", inversion_echo(cfg));
  Table table;
  table.t.assign(curve.samples.abscissae().begin(), curve.samples.abscissae().end());
  table.value.assign(curve.samples.values().begin(), curve.samples.values().end());
  emit(o, out, m, table);
  return kExitOk;
}

int cmd_cesaro(const Options& o, std::ostream& out) {
  const auto model = build_model(o);
  const auto dynamic = parse_dynamic(o.dynamic);
  const auto cfg = build_inversion(o);
  const auto ts = abscissae(o, "--t");
  const auto curve = cesaro_curve(model, dynamic, ts, cfg, o.workers);
  Manifest m = curve_manifest("cesaro", model, o, dynamic.describe());
  m.add("inversion", inversion_echo(cfg));
  Table table;
  table.t = ts;
  table.value.assign(curve.values().begin(), curve.values().end());
  std::optional<json> fit;
  if (o.json_out && ts.size() >= 8 && ts.front() >= 10.0 && ts.back() >= 1e4 * ts.front()) {
    const bool c1 = model.kernel_class() == KernelClass::C1;
    fit = json{{"free", fit_json(fit_rate(curve, FitMode::Free))},
               {"constrained", fit_json(fit_rate(curve, c1 ? FitMode::PinQ0 : FitMode::PinP0))}};
  }
  emit(o, out, m, table, fit);
  return kExitOk;
}

int cmd_gfde(const Options& o, std::ostream& out) {
  const auto model = build_model(o);
  if (o.stride == 0) throw UsageError("--stride must be positive");
  RelaxationProblem problem{model, o.a, o.u0, o.h, o.horizon, o.grading};
  const auto solution = solve_relaxation(problem);
  const auto samples = uniform_samples(solution, o.h);
  const double residual = residual_check(solution, problem);
  Manifest m = base_manifest("gfde");
  m.add("model", model.describe());
  m.add("problem", "a=" + fmt_num(o.a) + " u0=" + fmt_num(o.u0) + " h=" + fmt_num(o.h) + " T=" + fmt_num(o.horizon) +
                       " grading=" + fmt_num(o.grading));
  m.add("stride", std::to_string(o.stride));
  m.add("residual", fmt_sig(residual, 6));
  Table table;
  const auto t = samples.abscissae();
  const auto v = samples.values();
  for (std::size_t i = 0; i < samples.size(); i += o.stride) {
    table.t.push_back(t[i]);
    table.value.push_back(v[i]);
  }
  if ((samples.size() - 1) % o.stride != 0) {
    table.t.push_back(t.back());
    table.value.push_back(v.back());
  }
  emit(o, out, m, table);
  return kExitOk;
}

int cmd_mc(const Options& o, std::ostream& out) {
  const auto model = build_model(o);
  const auto dynamic = parse_dynamic(o.dynamic);
  const auto ts = abscissae(o, "--t");
  require_increasing_positive(ts, "mc");
  McConfig cfg;
  cfg.n_paths = o.paths;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.time_step = o.dt;
  cfg.jump_cutoff = o.cutoff;
  cfg.validate();
  Table table;
  for (double t : ts) {
    const auto e = estimate_ue(model, dynamic, t, cfg);
    table.t.push_back(t);
    table.value.push_back(e.mean);
    table.std_error.push_back(e.std_error);
  }
  Manifest m = curve_manifest("mc", model, o, dynamic.describe());
  m.add("seed", std::to_string(cfg.seed));
  m.add("paths", std::to_string(cfg.n_paths));
  m.add("time_step", fmt_num(cfg.time_step));
  m.add("jump_cutoff", fmt_num(cfg.jump_cutoff));
  emit(o, out, m, table);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  SuiteOptions so;
  so.alpha = o.alpha.value_or(0.5);
  so.s = o.s;
  so.inversion = build_inversion(o);
  so.workers = o.workers;
  if (o.grid) so.grid = parse_grid(*o.grid);
  const auto rows = run_suite(o.suite, so);
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
  if (o.json_out) {
    Manifest m = base_manifest("verify");
    m.add("suite", o.suite);
    m.add("inversion", inversion_echo(so.inversion));
    if (o.grid) m.add("grid", *o.grid);
    json results = json::array();
    for (const auto& r : rows) {
      results.push_back({{"suite", r.suite},
                         {"model", r.model},
                         {"dynamic", r.dynamic},
                         {"check", r.check},
                         {"measured", r.measured},
                         {"target", r.target},
                         {"deviation", r.deviation},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
    }
    json j;
    j["command"] = "verify";
    j["manifest"] = manifest_json(m);
    j["results"] = std::move(results);
    j["passed"] = ok;
    out << j.dump(2) << '\n';
  } else {
    out << std::left << std::setw(8) << "suite" << std::setw(36) << "model" << std::setw(8) << "dynamic"
        << std::setw(26) << "check" << std::setw(14) << "measured" << std::setw(10) << "target" << std::setw(11)
        << "deviation" << std::setw(7) << "tol" << "result\n";
    for (const auto& r : rows) {
      out << std::left << std::setw(8) << r.suite << std::setw(36) << r.model << std::setw(8) << r.dynamic
          << std::setw(26) << r.check << std::setw(14) << fmt_sig(r.measured, 6) << std::setw(10)
          << fmt_sig(r.target, 4) << std::setw(11) << fmt_sig(r.deviation, 3) << std::setw(7)
          << fmt_sig(r.tolerance, 3) << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    out << (ok ? "all checks passed" : "verification FAILED") << '\n';
  }
  return ok ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteRow make_row(const std::string& suite, const SubordinatorModel& model, const Dynamic& dynamic,
                  const std::string& check, double measured, double target, double tol) {
  SuiteRow r;
  r.suite = suite;
  r.model = model.describe();
  r.dynamic = dynamic.describe();
  r.check = check;
  r.measured = measured;
  r.target = target;
  r.deviation = std::abs(measured - target);
  r.tolerance = tol;
  r.pass = r.deviation <= tol;
  return r;
}

void suite_c1(const SuiteOptions& so, std::vector<SuiteRow>& rows) {
  const auto model = SubordinatorModel::stable(so.alpha);
  const auto grid = so.grid.value_or(default_verification_grid(model));
  for (const auto& dyn : {Dynamic::monomial(1), Dynamic::monomial(2), Dynamic::exponential(1)}) {
    const auto rep = verify_class(model, dyn, grid, so.inversion, 0.03, 0.15, so.workers);
    rows.push_back(make_row("c1", model, dyn, "cesaro p (q=0 fit)", rep.p.measured, rep.p.predicted, 0.03));
    const auto direct = subordinate_curve(model, dyn, grid, Route::Transform, so.inversion, so.workers);
    const double p_direct = fit_rate(direct.samples, FitMode::PinQ0).p;
    rows.push_back(make_row("c1", model, dyn, "u^E p (q=0 fit)", p_direct, rep.prediction.p, 0.03));
    rows.push_back(make_row("c1", model, dyn, "p(u^E) - p(M_t)", p_direct - rep.p.measured, 0.0, 0.02));
  }
}

void suite_c1_two(const SuiteOptions& so, std::vector<SuiteRow>& rows) {
  const auto model = SubordinatorModel::two_stable(0.5, 0.75);
  const auto grid = so.grid.value_or(default_verification_grid(model));
  for (const auto& dyn : {Dynamic::monomial(1), Dynamic::monomial(2)}) {
    const auto rep = verify_class(model, dyn, grid, so.inversion, 0.05, 0.15, so.workers);
    rows.push_back(make_row("c1-two", model, dyn, "cesaro p (q=0 fit)", rep.p.measured, rep.p.predicted, 0.05));
  }
}

void suite_c2(const SuiteOptions& so, std::vector<SuiteRow>& rows) {
  const auto model = SubordinatorModel::distributed_order();
  const auto grid = so.grid.value_or(default_verification_grid(model));
  for (const auto& dyn : {Dynamic::monomial(1), Dynamic::monomial(2), Dynamic::exponential(1)}) {
    const auto rep = verify_class(model, dyn, grid, so.inversion, 0.15, 0.15, so.workers);
    rows.push_back(make_row("c2", model, dyn, "cesaro q (p=0 fit)", rep.q.measured, rep.q.predicted, 0.15));
    const double spread = stabilized_variation(rep.cesaro, rep.prediction.q);
    rows.push_back(make_row("c2", model, dyn, "M_t/(log t)^q spread", spread, 0.0, 0.10));
  }
}

void suite_c3(const SuiteOptions& so, std::vector<SuiteRow>& rows) {
  const std::vector<double> s_values = so.s ? std::vector<double>{*so.s} : std::vector<double>{0.5, 1.0};
  for (double s : s_values) {
    const auto model = SubordinatorModel::parametric_c3(s);
    const auto grid = so.grid.value_or(default_verification_grid(model));
    for (const auto& dyn : {Dynamic::monomial(1), Dynamic::monomial(2), Dynamic::exponential(1)}) {
      const auto rep = verify_class(model, dyn, grid, so.inversion, 0.2, 0.2, so.workers);
      rows.push_back(make_row("c3", model, dyn, "cesaro q (p=0 fit)", rep.q.measured, rep.q.predicted, 0.2));
    }
  }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.model, "stable | two-stable | distributed-order | c3 | <config file>");
  app->add_option("--alpha", o.alpha, "stable index alpha");
  app->add_option("--beta", o.beta, "second stable index (two-stable)");
  app->add_option("--s", o.s, "log exponent s (c3)");
  app->add_option("--scale", o.scale, "scale constant (c3)");
}

void add_inversion_flags(CLI::App* app, Options& o) {
  app->add_option("--method", o.method, "talbot | gs");
  app->add_option("--terms", o.terms, "inversion terms (talbot >= 16, gs even <= 18)");
  app->add_option("--shape", o.shape, "Talbot contour shape parameter");
}

void add_output_flags(CLI::App* app, Options& o) {
  app->add_option("--out", o.out_path, "write CSV with manifest header");
  app->add_flag("--json", o.json_out, "print a JSON summary");
}

void add_abscissa_flags(CLI::App* app, Options& o) {
  app->add_option("--t", o.t, "single time point");
  app->add_option("--grid", o.grid, "log-spaced grid <min>:<max>:<points>");
}

}  // namespace

std::vector<SuiteRow> run_suite(const std::string& name, const SuiteOptions& options) {
  std::vector<SuiteRow> rows;
  const bool all = name == "all";
  if (!all && name != "c1" && name != "c1-two" && name != "c2" && name != "c3") {
    throw ConfigError("unknown suite '" + name + "' (c1, c1-two, c2, c3, all)");
  }
  if (all || name == "c1") suite_c1(options, rows);
  if (all || name == "c1-two") suite_c1_two(options, rows);
  if (all || name == "c2") suite_c2(options, rows);
  if (all || name == "c3") suite_c3(options, rows);
  return rows;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"fractime: subordinated dynamics and Cesaro asymptotics", "fractime"};
  app.set_version_flag("--version", std::string("fractime ") + FRACTIME_VERSION);
  app.require_subcommand(1);

  auto* ml = app.add_subcommand("ml", "Mittag-Leffler function E_alpha(-x)");
  ml->add_option("--alpha", o.alpha, "index alpha in (0, 1]");
  ml->add_option("--x", o.x, "argument x >= 0");
  ml->add_option("--grid", o.grid, "log-spaced x grid <min>:<max>:<points>");
  add_output_flags(ml, o);

  auto* wr = app.add_subcommand("wright", "Wright function W_{mu,nu}(z)");
  wr->add_option("--mu", o.mu, "mu in (-1, 0)");
  wr->add_option("--nu", o.nu, "nu");
  wr->add_option("--z", o.z, "z <= 0");
  add_output_flags(wr, o);

  auto* inv = app.add_subcommand("invert", "numerical Laplace inversion");
  add_model_flags(inv, o);
  inv->add_option("--transform", o.transform, "ue | cesaro | kernel");
  inv->add_option("--dynamic", o.dynamic, "mono:<n> | exp:<a>");
  add_abscissa_flags(inv, o);
  add_inversion_flags(inv, o);
  add_output_flags(inv, o);

  auto* sub = app.add_subcommand("subordinate", "subordinated dynamic u^E(t)");
  add_model_flags(sub, o);
  sub->add_option("--dynamic", o.dynamic, "mono:<n> | exp:<a>");
  sub->add_option("--route", o.route, "transform | closed | quadrature");
  sub->add_option("--workers", o.workers, "worker threads");
  add_abscissa_flags(sub, o);
  add_inversion_flags(sub, o);
  add_output_flags(sub, o);

  auto* ces = app.add_subcommand("cesaro", "Cesaro mean M_t");
  add_model_flags(ces, o);
  ces->add_option("--dynamic", o.dynamic, "mono:<n> | exp:<a>");
  ces->add_option("--workers", o.workers, "worker threads");
  add_abscissa_flags(ces, o);
  add_inversion_flags(ces, o);
  add_output_flags(ces, o);

  auto* gf = app.add_subcommand("gfde", "general fractional relaxation solver");
  add_model_flags(gf, o);
  gf->add_option("--a", o.a, "relaxation rate a >= 0");
  gf->add_option("--u0", o.u0, "initial value");
  gf->add_option("--step", o.h, "step size h");
  gf->add_option("--horizon", o.horizon, "final time T");
  gf->add_option("--grading", o.grading, "graded-mesh horizon (0 for a uniform mesh)");
  gf->add_option("--stride", o.stride, "print every n-th uniform sample");
  add_output_flags(gf, o);

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of u^E(t)");
  add_model_flags(mc, o);
  mc->add_option("--dynamic", o.dynamic, "mono:<n> | exp:<a>");
  mc->add_option("--seed", o.seed, "random seed");
  mc->add_option("--paths", o.paths, "number of paths");
  mc->add_option("--workers", o.workers, "worker threads");
  mc->add_option("--dt", o.dt, "path time step (two-stable)");
  mc->add_option("--cutoff", o.cutoff, "small-jump cutoff (distributed order)");
  add_abscissa_flags(mc, o);
  add_output_flags(mc, o);

  auto* ver = app.add_subcommand("verify", "exponent verification suites");
  ver->add_option("--suite", o.suite, "c1 | c1-two | c2 | c3 | all");
  ver->add_option("--alpha", o.alpha, "alpha for the c1 suite");
  ver->add_option("--s", o.s, "s for the c3 suite");
  ver->add_option("--grid", o.grid, "override grid <min>:<max>:<points>");
  ver->add_option("--workers", o.workers, "worker threads");
  ver->add_flag("--json", o.json_out, "print a JSON summary");
  add_inversion_flags(ver, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "fractime " << FRACTIME_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fractime: " << e.what() << '\n';
    if (auto* sc = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << "run 'fractime " << sc->get_name() << " --help' for usage\n";
    } else {
      err << "run 'fractime --help' for usage\n";
    }
    return kExitUsage;
  }

  const std::map<CLI::App*, std::function<int(const Options&, std::ostream&)>> handlers{
      {ml, cmd_ml},   {wr, cmd_wright}, {inv, cmd_invert}, {sub, cmd_subordinate}, {ces, cmd_cesaro},
      {gf, cmd_gfde}, {mc, cmd_mc},     {ver, cmd_verify}};
  CLI::App* chosen = app.get_subcommands().front();
  try {
    return handlers.at(chosen)(o, out);
  } catch (const NumericalError& e) {
    err << "fractime " << chosen->get_name() << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "fractime " << chosen->get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace fractime::cli
