#include "imcf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace imcf::lab {

using nlohmann::json;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PmtStability: return "pmt_stability";
    case ScenarioKind::RpiStability: return "rpi_stability";
    case ScenarioKind::SingleRun: return "single_run";
    case ScenarioKind::IdentitySuite: return "identity_suite";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_bump(const json& j, HarmonicBump& b) {
  read(j, "amplitude", b.amplitude);
  read(j, "l", b.l);
  read(j, "m", b.m);
  if (b.l < 1 || std::abs(b.m) > b.l) throw ConfigError("harmonic bump needs l >= 1 and |m| <= l");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be an object");
  ExperimentConfig c;
  try {
    check_keys(j, {"name", "scenario", "ambient", "surface", "schedule", "s0", "T", "dt_out", "grid", "mode",
                   "integrator", "spectral_stride", "evolution_checks", "weak_ricci", "threads", "output_dir",
                   "tolerances"},
               "config");
    read(j, "name", c.name);
    if (j.contains("scenario")) {
      const auto s = j.at("scenario").get<std::string>();
      if (s == "pmt_stability") c.scenario = ScenarioKind::PmtStability;
      else if (s == "rpi_stability") c.scenario = ScenarioKind::RpiStability;
      else if (s == "single_run") c.scenario = ScenarioKind::SingleRun;
      else if (s == "identity_suite") c.scenario = ScenarioKind::IdentitySuite;
      else throw ConfigError("unknown scenario '" + s + "'");
    }
    if (j.contains("ambient")) {
      const auto& a = j.at("ambient");
      check_keys(a, {"family", "mass", "scale", "perturbation", "cutoff_inner", "cutoff_outer"}, "ambient");
      read(a, "family", c.ambient.family);
      read(a, "mass", c.ambient.mass);
      read(a, "scale", c.ambient.scale);
      read(a, "cutoff_inner", c.ambient.cutoff_inner);
      read(a, "cutoff_outer", c.ambient.cutoff_outer);
      if (a.contains("perturbation")) read_bump(a.at("perturbation"), c.ambient.perturbation);
    }
    if (j.contains("surface")) read_bump(j.at("surface"), c.surface);
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      check_keys(s, {"parameter", "base", "ratio", "count"}, "schedule");
      read(s, "parameter", c.schedule.parameter);
      read(s, "base", c.schedule.base);
      read(s, "ratio", c.schedule.ratio);
      read(s, "count", c.schedule.count);
    }
    read(j, "s0", c.s0);
    read(j, "T", c.T);
    read(j, "dt_out", c.dt_out);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      check_keys(g, {"n_theta", "n_phi"}, "grid");
      read(g, "n_theta", c.n_theta);
      read(g, "n_phi", c.n_phi);
    }
    if (j.contains("mode")) {
      const auto m = j.at("mode").get<std::string>();
      if (m == "ode") c.mode = FlowMode::OdeRotsym;
      else if (m == "pde") c.mode = FlowMode::PdeGraph;
      else throw ConfigError("mode must be 'ode' or 'pde'");
    }
    if (j.contains("integrator")) {
      const auto m = j.at("integrator").get<std::string>();
      if (m == "rkc") c.integrator = Integrator::Rkc;
      else if (m == "heun") c.integrator = Integrator::Heun;
      else throw ConfigError("integrator must be 'rkc' or 'heun'");
    }
    read(j, "spectral_stride", c.spectral_stride);
    read(j, "evolution_checks", c.evolution_checks);
    read(j, "weak_ricci", c.weak_ricci);
    read(j, "threads", c.threads);
    read(j, "output_dir", c.output_dir);
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      check_keys(t, {"area_ode", "area_pde", "identity_ode", "identity_pde", "slack", "geroch", "roundness",
                     "trend_ratio", "evolution_ode", "evolution_pde"},
                 "tolerances");
      read(t, "area_ode", c.tol.area_ode);
      read(t, "area_pde", c.tol.area_pde);
      read(t, "identity_ode", c.tol.identity_ode);
      read(t, "identity_pde", c.tol.identity_pde);
      read(t, "slack", c.tol.slack);
      read(t, "geroch", c.tol.geroch);
      read(t, "roundness", c.tol.roundness);
      read(t, "trend_ratio", c.tol.trend_ratio);
      read(t, "evolution_ode", c.tol.evolution_ode);
      read(t, "evolution_pde", c.tol.evolution_pde);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }

  const auto& f = c.ambient.family;
  if (f != "euclidean" && f != "schwarzschild" && f != "rotsym") throw ConfigError("unknown ambient family '" + f + "'");
  const auto& p = c.schedule.parameter;
  if (!p.empty() && p != "mass" && p != "ambient_eps" && p != "surface_eps" && p != "s0")
    throw ConfigError("unknown schedule parameter '" + p + "'");
  if (c.schedule.count < 1) throw ConfigError("schedule count must be positive");
  if ((c.scenario == ScenarioKind::PmtStability || c.scenario == ScenarioKind::RpiStability) &&
      (p.empty() || c.schedule.count < 3))
    throw ConfigError("stability scenarios need a schedule with at least 3 members");
  if (!(c.T > 0.0) || !(c.dt_out > 0.0)) throw ConfigError("T and dt_out must be positive");
  if (c.n_theta < 6 || c.n_phi < 12 || c.n_phi % 2) throw ConfigError("grid too small or n_phi odd");
  if (!(c.s0 > 0.0)) throw ConfigError("s0 must be positive");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

AmbientMetric make_ambient(const AmbientSpec& spec) {
  AmbientMetric base = spec.family == "schwarzschild" ? AmbientMetric::schwarzschild(spec.mass)
                       : spec.family == "rotsym"      ? AmbientMetric::rotsym(spec.mass, spec.scale)
                                                      : AmbientMetric::euclidean();
  if (spec.perturbation.amplitude == 0.0) return base;
  AmbientPerturbation p;
  p.amplitude = spec.perturbation.amplitude;
  p.l = spec.perturbation.l;
  p.m = spec.perturbation.m;
  p.cutoff_inner = spec.cutoff_inner;
  p.cutoff_outer = spec.cutoff_outer;
  return AmbientMetric::perturbed(base, p);
}

std::vector<Member> family_members(const ExperimentConfig& cfg) {
  std::vector<Member> out;
  const int count = cfg.schedule.parameter.empty() ? 1 : cfg.schedule.count;
  for (int i = 1; i <= count; ++i) {
    AmbientSpec a = cfg.ambient;
    Member m;
    m.index = i;
    m.s0 = cfg.s0;
    m.surface_eps = cfg.surface.amplitude;
    const auto& p = cfg.schedule.parameter;
    if (!p.empty()) {
      m.value = cfg.schedule.base * std::pow(cfg.schedule.ratio, i);
      if (p == "mass") a.mass = m.value;
      else if (p == "ambient_eps") a.perturbation.amplitude = m.value;
      else if (p == "surface_eps") m.surface_eps = m.value;
      else if (p == "s0") m.s0 = m.value;
    }
    m.mass = a.family == "euclidean" ? 0.0 : a.mass;
    m.ambient = make_ambient(a);
    if (!(m.s0 * (1.0 - std::abs(m.surface_eps) * 3.0) > m.ambient.chart_inner_radius() * 1.05))
      throw ConfigError("member " + std::to_string(i) + ": initial surface too close to the chart's inner radius");
    out.push_back(m);
  }
  return out;
}

Surface make_initial_surface(const ExperimentConfig& cfg, const Member& m) {
  auto grid = build_grid(cfg.n_theta, cfg.n_phi);
  if (m.surface_eps == 0.0) return Surface::sphere(grid, m.s0);
  std::vector<double> rho(grid->size());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    const double th = grid->theta(grid->row_of(n)), ph = grid->phi(grid->col_of(n));
    rho[n] = m.s0 * (1.0 + m.surface_eps * real_ylm(cfg.surface.l, cfg.surface.m, th, ph).value);
  }
  return Surface::graph(grid, rho);
}

namespace {

double nan_max_abs(const std::vector<DiagnosticsRecord>& d, double DiagnosticsRecord::*field) {
  double out = kNaN;
  for (const auto& r : d) {
    const double v = std::abs(r.*field);
    if (std::isfinite(v)) out = std::isnan(out) ? v : std::max(out, v);
  }
  return out;
}

Check le(std::string name, double v, double lim) { return {std::move(name), v, lim, v <= lim}; }
Check ge(std::string name, double v, double lim) { return {std::move(name), v, lim, v >= lim}; }

bool stability(const ExperimentConfig& cfg) {
  return cfg.scenario == ScenarioKind::PmtStability || cfg.scenario == ScenarioKind::RpiStability;
}

}  // namespace

RunSummary run_member(const ExperimentConfig& cfg, const Member& m) {
  RunSummary s;
  s.member = m;
  const auto start = std::chrono::steady_clock::now();
  try {
    FlowConfig fc;
    fc.mode = cfg.mode;
    fc.integrator = cfg.integrator;
    fc.T = cfg.T;
    fc.dt_out = cfg.dt_out;
    s.trace = run_flow(m.ambient, make_initial_surface(cfg, m), fc);
    if (s.trace.aborted) throw std::runtime_error("flow aborted: " + s.trace.abort_reason);
    DiagnosticsOptions opt;
    opt.spectral_stride = cfg.spectral_stride;
    fill_diagnostics(s.trace, opt);
    const auto& tr = s.trace;
    const auto& d = tr.diagnostics;
    s.substeps = tr.substeps;
    s.m_H0 = d.front().m_H;
    s.m_HT = d.back().m_H;
    s.inside_class = tr.inside_class();
    s.violations = tr.class_violations.size();
    s.H_min = tr.min_H();
    s.A_max = tr.max_A();
    s.area_law = area_law_deviation(tr);
    s.lemma22_max = nan_max_abs(d, &DiagnosticsRecord::lemma22_residual);
    s.crucial_max = nan_max_abs(d, &DiagnosticsRecord::crucial_residual);
    const auto ic = integrated_crucial(tr);
    s.slack_statement = ic.slack_statement();
    s.slack_proof = ic.slack_proof();
    s.geroch_drop = geroch_worst_drop(tr);
    s.roundness_max = 0.0;
    for (const auto& r : d) s.roundness_max = std::max(s.roundness_max, r.roundness_deficit);
    const std::size_t mid = static_cast<std::size_t>(std::lround(0.5 * cfg.T / cfg.dt_out));
    s.h_concentration_mid = h_concentration(tr.states.at(mid));
    const Scenario sc = cfg.scenario == ScenarioKind::RpiStability ? Scenario::Rpi : Scenario::Pmt;
    s.chain = chain_report(assemble_blocks(tr, m.mass, tr.r0), sc);

    const bool ode = cfg.mode == FlowMode::OdeRotsym;
    const double id_tol = ode ? cfg.tol.identity_ode : cfg.tol.identity_pde;
    s.checks.push_back(le("area_law", s.area_law, ode ? cfg.tol.area_ode : cfg.tol.area_pde));
    s.checks.push_back(le("lemma22_residual", s.lemma22_max, id_tol));
    s.checks.push_back(le("crucial_residual", s.crucial_max, id_tol));
    s.checks.push_back(ge("slack_statement", s.slack_statement, cfg.tol.slack));
    if (m.ambient.kind() != AmbientKind::Perturbed && m.ambient.base_kind() != AmbientKind::RotSym)
      s.checks.push_back(le("geroch_drop", s.geroch_drop, -cfg.tol.geroch));
    s.checks.push_back({"triangle", std::sqrt(s.chain.common_hat_g3), std::sqrt(s.chain.triangle_bound()),
                        s.chain.triangle_ok});
    if (cfg.weak_ricci) {
      const double T = cfg.T;
      s.weak_ricci_max = s.weak_ricci_printed_max = 0.0;
      for (const TestFunction& phi : {TestFunction{0, 0, 0.0, T}, TestFunction{2, 0, 0.0, T},
                                      TestFunction{1, 0, 0.0, T}}) {
        const auto w = weak_ricci_identity(tr, phi);
        s.weak_ricci_max = std::max(s.weak_ricci_max, w.residual());
        s.weak_ricci_printed_max = std::max(s.weak_ricci_printed_max, w.residual_printed());
      }
      s.checks.push_back(le("weak_ricci", s.weak_ricci_max, id_tol));
    }
    if (cfg.evolution_checks) {
      const auto sw = sandwich_check(tr);
      s.sandwich = std::max(sw.worst_lower, sw.worst_upper);
      s.length = length_bounds(tr).worst;
      s.isoperimetric = isoperimetric_band(tr).worst;
      const double ev = ode ? cfg.tol.evolution_ode : cfg.tol.evolution_pde;
      s.checks.push_back(le("sandwich", s.sandwich, ev));
      s.checks.push_back(le("length_bounds", s.length, ev));
      s.checks.push_back(le("isoperimetric_band", s.isoperimetric, ev));
    }
    if (cfg.scenario == ScenarioKind::PmtStability)
      s.checks.push_back(le("roundness", s.roundness_max, cfg.tol.roundness));
    s.ok = true;
  } catch (const std::exception& e) {
    s.ok = false;
    s.error = e.what();
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

bool ExperimentResult::passed() const {
  if (runs.empty()) return false;
  for (const auto& r : runs)
    if (!r.passed()) return false;
  for (const auto& c : trend)
    if (!c.passed) return false;
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.config = cfg;
  const auto members = family_members(cfg);
  res.runs.resize(members.size());
  unsigned workers = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, members.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < members.size(); k = next++) res.runs[k] = run_member(cfg, members[k]);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (stability(cfg)) {
    const bool all_ok = std::all_of(res.runs.begin(), res.runs.end(), [](const RunSummary& r) { return r.ok; });
    const std::string dist = cfg.scenario == ScenarioKind::PmtStability ? "dist_hat_g_delta" : "dist_hat_g_gs";
    bool decreasing = all_ok;
    double worst_step = 0.0;
    for (std::size_t k = 1; all_ok && k < res.runs.size(); ++k) {
      const double a = res.runs[k - 1].chain.target, b = res.runs[k].chain.target;
      worst_step = std::max(worst_step, b / a);
      if (!(b < a)) decreasing = false;
    }
    res.trend.push_back({dist + "_decreasing", worst_step, 1.0, decreasing});
    if (cfg.scenario == ScenarioKind::PmtStability) {
      const double ratio = all_ok ? res.runs.back().chain.target / res.runs.front().chain.target : kNaN;
      res.trend.push_back(le(dist + "_final_over_first", ratio, cfg.tol.trend_ratio));
    } else {
      bool hdec = all_ok;
      double worst = 0.0;
      for (std::size_t k = 1; all_ok && k < res.runs.size(); ++k) {
        const double a = res.runs[k - 1].h_concentration_mid, b = res.runs[k].h_concentration_mid;
        worst = std::max(worst, b / a);
        if (!(b < a)) hdec = false;
      }
      res.trend.push_back({"h_concentration_mid_decreasing", worst, 1.0, hdec});
    }
  }
  return res;
}

std::filesystem::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("IMCF_LAB_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

std::string run_csv(const RunSummary& run) {
  std::ostringstream o;
  o << "# imcf_lab per-time schema " << kCsvSchema << "\n";
  o << "t,area,m_H,int_H2,avg_H2,H_bar,H_min,H_max,A_max,dt_int_H2,geroch_rate,lemma22_rhs,lemma22_residual,"
       "crucial_rhs,crucial_residual,slack_statement,slack_proof,int_gradH,int_shear,int_R,int_Rc,int_K12,"
       "int_A2,int_prod,chi,chi_intrinsic,lambda1_neumann,in1_upper,l2_H_minus_avg,roundness_deficit,"
       "chain_target_integrand\n";
  const auto& d = run.trace.diagnostics;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& r = d[k];
    const double ct = k < run.chain.target_profile.size() ? run.chain.target_profile[k] : kNaN;
    for (double v : {r.t, r.area, r.m_H, r.int_H2, r.avg_H2, r.H_bar, r.H_min, r.H_max, r.A_max, r.dt_int_H2,
                     r.geroch_rate, r.lemma22_rhs, r.lemma22_residual, r.crucial_rhs, r.crucial_residual,
                     r.slack_statement, r.slack_proof, r.int_gradH, r.int_shear, r.int_R, r.int_Rc, r.int_K12,
                     r.int_A2, r.int_prod, r.chi, r.chi_intrinsic, r.lambda1_neumann, r.in1_upper,
                     r.l2_H_minus_avg, r.roundness_deficit})
      o << fmt(v) << ',';
    o << fmt(ct) << '\n';
  }
  return o.str();
}

std::string summary_csv(const ExperimentResult& res) {
  std::ostringstream o;
  o << "# imcf_lab summary schema " << kCsvSchema << "\n";
  o << "index,value,ok,passed,seconds,substeps,m_H0,m_HT,inside_class,violations,H_min,A_max,area_law,"
       "lemma22_max,crucial_max,slack_statement,slack_proof,geroch_drop,weak_ricci_max,weak_ricci_printed_max,"
       "sandwich,length,isoperimetric,roundness_max,h_concentration_mid,dist_hat_g1,dist_g1_g2,dist_g1_g2prime,"
       "dist_g2_g3,common_hat_g3,triangle_bound,dist_target,dist_g3_target,error\n";
  for (const auto& r : res.runs) {
    o << r.member.index << ',' << fmt(r.member.value) << ',' << r.ok << ',' << r.passed() << ',' << fmt(r.seconds)
      << ',' << r.substeps << ',';
    for (double v : {r.m_H0, r.m_HT}) o << fmt(v) << ',';
    o << r.inside_class << ',' << r.violations << ',';
    for (double v : {r.H_min, r.A_max, r.area_law, r.lemma22_max, r.crucial_max, r.slack_statement, r.slack_proof,
                     r.geroch_drop, r.weak_ricci_max, r.weak_ricci_printed_max, r.sandwich, r.length,
                     r.isoperimetric, r.roundness_max, r.h_concentration_mid, r.chain.hat_g1, r.chain.g1_g2,
                     r.chain.g1_g2prime, r.chain.g2_g3, r.chain.common_hat_g3, r.chain.triangle_bound(),
                     r.chain.target, r.chain.g3_target})
      o << fmt(v) << ',';
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    o << err << '\n';
  }
  return o.str();
}

std::string trend_csv(const ExperimentResult& res) {
  std::ostringstream o;
  o << "# imcf_lab trend schema " << kCsvSchema << "\n";
  o << "index,value,m_HT,dist_target,h_concentration_mid,roundness_max\n";
  for (const auto& r : res.runs)
    o << r.member.index << ',' << fmt(r.member.value) << ',' << fmt(r.m_HT) << ',' << fmt(r.chain.target) << ','
      << fmt(r.h_concentration_mid) << ',' << fmt(r.roundness_max) << '\n';
  for (const auto& c : res.trend)
    o << "verdict," << c.name << ',' << fmt(c.value) << ',' << fmt(c.limit) << ',' << (c.passed ? "PASS" : "FAIL")
      << ",\n";
  return o.str();
}

std::string emit_report(const ExperimentResult& res) {
  const auto& c = res.config;
  std::ostringstream o;
  o << "experiment " << c.name << " (" << to_string(c.scenario) << ", " << to_string(c.mode) << ", "
    << c.n_theta << "x" << c.n_phi << ", T=" << c.T << ", dt_out=" << c.dt_out << ")\n";
  o << "ambient " << c.ambient.family << " m=" << c.ambient.mass;
  if (!c.schedule.parameter.empty())
    o << "  schedule " << c.schedule.parameter << " = " << c.schedule.base << " * " << c.schedule.ratio << "^i";
  o << "\n\n";
  char line[512];
  std::snprintf(line, sizeof line, "%3s %11s %11s %11s %11s %11s %11s %11s %8s  %s\n", "i", "value", "m_H(T)",
                "target", "lemma22", "crucial", "slack_stmt", "slack_prf", "seconds", "status");
  o << line;
  for (const auto& r : res.runs) {
    if (!r.ok) {
      std::snprintf(line, sizeof line, "%3d %11.4g  run failed: %s\n", r.member.index, r.member.value,
                    r.error.c_str());
      o << line;
      continue;
    }
    std::snprintf(line, sizeof line, "%3d %11.4g %11.4g %11.4g %11.3g %11.3g %11.3g %11.3g %8.2f  %s\n",
                  r.member.index, r.member.value, r.m_HT, r.chain.target, r.lemma22_max, r.crucial_max,
                  r.slack_statement, r.slack_proof, r.seconds, r.passed() ? "PASS" : "FAIL");
    o << line;
    for (const auto& ch : r.checks)
      if (!ch.passed) o << "      failed " << ch.name << ": " << fmt(ch.value) << " (limit " << fmt(ch.limit) << ")\n";
  }
  if (!res.trend.empty()) {
    o << "\ntrend\n";
    for (const auto& ch : res.trend)
      o << "  " << ch.name << ": " << fmt(ch.value) << " (limit " << fmt(ch.limit) << ") "
        << (ch.passed ? "PASS" : "FAIL") << "\n";
  }
  o << "\nverdict " << (res.passed() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& res) {
  const auto dir = output_directory(res.config);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  auto put = [&](const std::string& name, const std::string& body) {
    const auto p = dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + p.string());
    files.push_back(p);
  };
  const auto& n = res.config.name;
  for (const auto& r : res.runs)
    if (r.ok) put(n + "_run" + std::to_string(r.member.index) + ".csv", run_csv(r));
  put(n + "_summary.csv", summary_csv(res));
  if (!res.trend.empty()) put(n + "_trend.csv", trend_csv(res));
  put(n + "_report.txt", emit_report(res));
  return files;
}

std::vector<ExperimentConfig> builtin_suite(const std::string& name) {
  std::vector<ExperimentConfig> out;
  auto add = [&](const std::string& fam, double mass, double scale, FlowMode mode) {
    ExperimentConfig c;
    c.name = "suite_" + fam + "_" + to_string(mode);
    c.scenario = ScenarioKind::IdentitySuite;
    c.ambient.family = fam;
    c.ambient.mass = mass;
    c.ambient.scale = scale;
    c.mode = mode;
    c.s0 = fam == "euclidean" ? 1.0 : 3.0;
    c.T = 1.0;
    c.dt_out = mode == FlowMode::OdeRotsym ? 0.01 : 0.02;
    c.n_theta = mode == FlowMode::OdeRotsym ? 12 : 16;
    c.n_phi = 2 * c.n_theta;
    c.weak_ricci = true;
    c.evolution_checks = true;
    out.push_back(c);
  };
  const bool all = name == "all";
  if (all || name == "euclidean") {
    add("euclidean", 0.0, 1.0, FlowMode::OdeRotsym);
    add("euclidean", 0.0, 1.0, FlowMode::PdeGraph);
  }
  if (all || name == "schwarzschild") {
    add("schwarzschild", 1.0, 1.0, FlowMode::OdeRotsym);
    add("schwarzschild", 1.0, 1.0, FlowMode::PdeGraph);
  }
  if (all || name == "rotsym") {
    add("rotsym", 1.0, 1.5, FlowMode::OdeRotsym);
    add("rotsym", 1.0, 1.5, FlowMode::PdeGraph);
  }
  if (out.empty()) throw ConfigError("unknown suite '" + name + "'");
  return out;
}

}  // namespace imcf::lab
