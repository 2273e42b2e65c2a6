#pragma once
// Experiment runner: configured flow families, per-run summaries, trend
// verdicts and CSV / text output.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "imcf/flow.hpp"
#include "imcf/metric_chain.hpp"

namespace imcf::lab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { PmtStability, RpiStability, SingleRun, IdentitySuite };

std::string to_string(ScenarioKind k);

struct HarmonicBump {
  double amplitude = 0.0;
  int l = 2, m = 0;
};

struct AmbientSpec {
  std::string family = "euclidean";  // euclidean | schwarzschild | rotsym
  double mass = 0.0;
  double scale = 1.0;                // rotsym profile scale
  HarmonicBump perturbation;         // compactly supported metric bump; amplitude 0 disables
  double cutoff_inner = 10.0, cutoff_outer = 20.0;
};

// Member i = 1..count takes parameter = base * ratio^i.
struct Schedule {
  std::string parameter;  // "" (single member) | mass | ambient_eps | surface_eps | s0
  double base = 0.0;
  double ratio = 0.5;
  int count = 1;
};

struct Tolerances {
  double area_ode = 1e-8, area_pde = 1e-4;
  double identity_ode = 1e-6, identity_pde = 1e-3;
  double slack = -1e-6;        // integrated slack of the stated crucial inequality
  double geroch = -1e-8;       // lower bound on m_H increments
  double roundness = 1e-8;     // pmt: roundness deficit of every member
  double trend_ratio = 1e-4;   // pmt: last / first target distance
  double evolution_ode = 1e-6, evolution_pde = 1e-3;  // sandwich, length and isoperimetric bounds
};

struct ExperimentConfig {
  std::string name = "experiment";
  ScenarioKind scenario = ScenarioKind::SingleRun;
  AmbientSpec ambient;
  HarmonicBump surface;  // initial radius s0 (1 + amplitude Y_lm)
  Schedule schedule;
  double s0 = 1.0, T = 1.0, dt_out = 0.02;
  int n_theta = 16, n_phi = 32;
  FlowMode mode = FlowMode::OdeRotsym;
  Integrator integrator = Integrator::Rkc;
  int spectral_stride = 0;
  bool evolution_checks = false;  // sandwich, length and isoperimetric bands
  bool weak_ricci = false;        // three test functions per run
  int threads = 0;                // 0: hardware concurrency
  std::string output_dir = "imcf_out";
  Tolerances tol;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// One resolved family member.
struct Member {
  int index = 1;
  double value = 0.0;
  AmbientMetric ambient = AmbientMetric::euclidean();
  double mass = 0.0;
  double s0 = 1.0;
  double surface_eps = 0.0;
};

std::vector<Member> family_members(const ExperimentConfig& cfg);
AmbientMetric make_ambient(const AmbientSpec& spec);
Surface make_initial_surface(const ExperimentConfig& cfg, const Member& m);

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct RunSummary {
  Member member;
  bool ok = false;  // run completed
  std::string error;
  double seconds = 0.0;
  long substeps = 0;
  double m_H0 = kNaN, m_HT = kNaN;
  bool inside_class = false;
  std::size_t violations = 0;
  double H_min = kNaN, A_max = kNaN;
  double area_law = kNaN;
  double lemma22_max = kNaN, crucial_max = kNaN;
  double slack_statement = kNaN, slack_proof = kNaN;
  double geroch_drop = kNaN;
  double weak_ricci_max = kNaN, weak_ricci_printed_max = kNaN;
  double sandwich = kNaN, length = kNaN, isoperimetric = kNaN;
  double roundness_max = kNaN;
  double h_concentration_mid = kNaN;
  ChainReport chain;
  FlowTrace trace;
  std::vector<Check> checks;

  bool passed() const {
    if (!ok) return false;
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunSummary> runs;
  std::vector<Check> trend;  // family-level assertions
  bool passed() const;
};

RunSummary run_member(const ExperimentConfig& cfg, const Member& m);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Files written: <name>_run<i>.csv, <name>_summary.csv, <name>_trend.csv, <name>_report.txt.
std::filesystem::path output_directory(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& res);
std::string run_csv(const RunSummary& run);
std::string summary_csv(const ExperimentResult& res);
std::string trend_csv(const ExperimentResult& res);
std::string emit_report(const ExperimentResult& res);

// Built-in identity suites: "euclidean", "schwarzschild", "rotsym" or "all".
std::vector<ExperimentConfig> builtin_suite(const std::string& name);

}  // namespace imcf::lab
