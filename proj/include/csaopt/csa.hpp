#ifndef CSAOPT_CSA_HPP
#define CSAOPT_CSA_HPP

#include <optional>
#include <vector>

#include "csaopt/oracle.hpp"

namespace csaopt {

enum class CsaMode {
  general_constant,  // s = 1, constant gamma/eta ~ 1/sqrt(N)
  general_variable,  // s = ceil(N/2), gamma/eta ~ 1/sqrt(k)
  strongly_convex,   // s = ceil(N/2), gamma ~ 1/k, rho-weighted output
};

struct StrongConstants {
  double mu_F = 0;
  double mu_G = 0;
  double Q = 1;
};

// Stepsizes gamma_k, tolerances eta_k and the averaging window {s..N}.
// Raw values follow the published schedules exactly and are then multiplied
// by the scaling factors c_g, c_e. In strongly convex mode gamma_k depends on
// whether iteration k lands in B, which is only known at run time, so
// gamma() takes the membership flag.
class CsaSchedule {
 public:
  static CsaSchedule make(CsaMode mode, int N, double D, double M_F, double M_G,
                          std::optional<StrongConstants> strong = std::nullopt,
                          double c_g = 1.0, double c_e = 1.0);

  double gamma(int k, bool feasible = true) const;
  double eta(int k) const;

  CsaMode mode() const { return mode_; }
  int N() const { return N_; }
  int s() const { return s_; }
  int window_size() const { return N_ - s_ + 1; }
  double D() const { return D_; }
  double M_F() const { return M_F_; }
  double M_G() const { return M_G_; }
  const StrongConstants& strong() const { return strong_; }
  double c_gamma() const { return c_g_; }
  double c_eta() const { return c_e_; }
  bool is_strong() const { return mode_ == CsaMode::strongly_convex; }

 private:
  CsaMode mode_ = CsaMode::general_constant;
  int N_ = 0, s_ = 1;
  double D_ = 0, M_F_ = 0, M_G_ = 0;
  StrongConstants strong_;
  double c_g_ = 1, c_e_ = 1;
};

struct TraceEntry {
  int k = 0;
  bool feasible = false;  // k in B
  double g_sample = 0;    // G(x_k, xi_k)
  double gamma = 0;
  double eta = 0;
  double weight = 0;  // gamma_k (general) or rho_k = gamma_k / A_k (strong)
  Vector x;           // populated while iterate storage is on
};

// Window record of one run: iterates, the B / N-set partition, sampled
// constraint values and averaging weights. Iterates are stored for
// N <= 10^5; beyond that only the running weighted sums are kept (the
// output is identical, the trace is thinned).
struct RunTrace {
  CsaMode mode = CsaMode::general_constant;
  int N = 0, s = 1;
  bool stored_iterates = true;
  std::vector<TraceEntry> window;  // k = s..N in order
  Vector weighted_sum;             // sum of weight * x over B
  double weight_total = 0;         // sum of weight over B
  double wall_seconds = 0;

  long b_count() const;
  long n_count() const;
};

struct ConditionDiagnostic {
  bool holds = false;
  double lhs = 0, rhs = 0;
};

// Raised when the feasibility test never passed inside the window; carries
// the trace and the well-definedness condition evaluated on the realized
// split so the caller can retry with a larger eta or N.
class EmptyBError : public std::runtime_error {
 public:
  EmptyBError(RunTrace trace, ConditionDiagnostic diag);
  const RunTrace& trace() const { return trace_; }
  const ConditionDiagnostic& diagnostic() const { return diag_; }

 private:
  RunTrace trace_;
  ConditionDiagnostic diag_;
};

struct CsaResult {
  RunTrace trace;
  Vector x_bar;
};

// Algorithm: from the prox-center, for k = 1..N sample xi_k, test
// G(x_k, xi_k) <= eta_k, step along F' when it holds and along G' otherwise,
// x_{k+1} = prox(x_k, gamma_k h_k). Output averages the B iterates with
// gamma (general) or rho (strong) weights.
CsaResult run_csa(const StochasticProblem& problem, const ProxGeometry& geom,
                  const CsaSchedule& sched, SampleStream& zeta_stream,
                  SampleStream& xi_stream);

// Weighted average over B per the schedule mode; requires nonempty B.
Vector average_output(const RunTrace& trace, const CsaSchedule& sched);

// A-priori well-definedness condition with the worst-case split at the given
// |B| fraction (the split maximizing the right-hand side). Diagnostic only.
ConditionDiagnostic check_condition(const CsaSchedule& sched, double D, double M_F, double M_G,
                                    double assumed_B_fraction);

// Same condition evaluated on the split a run actually realized.
ConditionDiagnostic check_condition_realized(const RunTrace& trace, const CsaSchedule& sched,
                                             double D, double M_F, double M_G);

struct StrongWeights {
  std::vector<double> a;    // a_k, index k-1
  std::vector<double> A;    // A_1 = 1, A_k = (1 - a_k) A_{k-1}
  std::vector<double> rho;  // gamma_k / A_k
};

// The strongly convex weight recursion over all k = 1..N; a_k switches
// between mu_F and mu_G with the membership flag.
StrongWeights strong_weights(const CsaSchedule& sched, const std::vector<bool>& feasible_by_k);

}  // namespace csaopt

#endif
