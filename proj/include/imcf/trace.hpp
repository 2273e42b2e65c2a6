#pragma once
// Time-ordered flow output: states, class-bound violations and per-state diagnostics.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/geometry.hpp"

namespace imcf {

enum class FlowMode { OdeRotsym, PdeGraph };

inline std::string to_string(FlowMode m) { return m == FlowMode::OdeRotsym ? "ode" : "pde"; }

enum class ViolationPolicy { Abort, RecordAndContinue };

struct ClassBounds {
  double H0 = 1e-8;   // lower bound on H
  double H1 = 1e8;    // upper bound on H
  double A1 = 1e8;    // upper bound on |A|
};

struct ClassViolation {
  double t = 0.0;
  std::string bound;  // "H0", "H1" or "A1"
  double value = 0.0;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One row of per-state integral quantities. Entries that need neighbouring
// states (time derivatives) or that are computed on a stride are NaN where
// unavailable.
struct DiagnosticsRecord {
  double t = 0.0;
  double area = 0.0;
  double m_H = 0.0;
  double int_H2 = 0.0;
  double avg_H2 = 0.0;
  double H_bar = 0.0;
  double H_min = 0.0, H_max = 0.0, A_max = 0.0;
  double dt_int_H2 = kNaN;
  double geroch_rate = kNaN;
  double lemma22_rhs = kNaN;
  double lemma22_residual = kNaN;
  double crucial_rhs = kNaN;  // 4 pi chi - int[2|dH|^2/H^2 + (l1-l2)^2/2 + R + H^2/2]
  double crucial_residual = kNaN;
  // m_H C / 2 - (d/dt int H^2 + I) and m_H C - (d/dt int H^2 + I), with
  // C = (16 pi)^{3/2} / |Sigma|^{1/2} and I = int[2|dH|^2/H^2 + (l1-l2)^2/2 + R]
  double slack_statement = kNaN;
  double slack_proof = kNaN;
  double int_gradH = 0.0;        // int |grad H|^2 / H^2
  double int_shear = 0.0;        // int (l1 - l2)^2
  double int_R = 0.0, int_Rc = 0.0, int_K12 = 0.0;
  double int_A2 = 0.0, int_prod = 0.0;
  double chi = 0.0;
  double chi_intrinsic = 0.0;
  double lambda1_neumann = kNaN;
  double in1_upper = kNaN;
  double l2_H_minus_avg = 0.0;
  double roundness_deficit = kNaN;
};

struct FlowTrace {
  AmbientMetric ambient = AmbientMetric::euclidean();
  FlowMode mode = FlowMode::OdeRotsym;
  ClassBounds bounds;
  double r0 = 0.0;  // area radius of the initial surface
  double dt_out = 0.0;
  std::vector<FlowState> states;
  std::vector<DiagnosticsRecord> diagnostics;
  std::vector<ClassViolation> class_violations;
  bool aborted = false;
  std::string abort_reason;
  long substeps = 0;

  std::size_t size() const { return states.size(); }
  std::vector<double> times() const {
    std::vector<double> t;
    for (const auto& s : states) t.push_back(s.t);
    return t;
  }
  bool inside_class() const { return class_violations.empty() && !aborted; }

  // Extremes over the run: max |A| and min H, used as A_0 and H_0 in the
  // length and isoperimetric evolution bounds.
  double max_A() const {
    double a = 0.0;
    for (const auto& st : states) {
      const auto A2 = st.A_norm_sq();
      for (double v : A2.values) a = std::max(a, std::sqrt(v));
    }
    return a;
  }
  double min_H() const {
    double h = std::numeric_limits<double>::infinity();
    for (const auto& st : states)
      for (double v : st.H.values) h = std::min(h, v);
    return h;
  }
};

}  // namespace imcf
