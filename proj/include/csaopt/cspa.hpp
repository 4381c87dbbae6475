#ifndef CSAOPT_CSPA_HPP
#define CSAOPT_CSPA_HPP

#include <optional>
#include <vector>

#include "csaopt/csa.hpp"
#include "csaopt/oracle.hpp"

namespace csaopt {

enum class CspaMode { general, strongly_convex };

// A coupled parameter-feasibility problem: find x in X with E[G(x,xi)] <= 0
// and y minimizing E[Phi(x,y,zeta)] over Y. Phi is convex in y (possibly not
// jointly); G is convex in x.
struct ParameterizedProblem {
  std::string name;
  ParamOracle objective;        // Phi(x, y, zeta), subgradient in y
  StochasticOracle constraint;  // G(x, xi), subgradient in x
  ProxGeometry geom_x = ProxGeometry::interval(0, 1);
  ProxGeometry geom_y = ProxGeometry::interval(0, 1);
  // When set, one token per iteration feeds both oracles (zeta = xi coupling).
  bool shared_stream = false;

  // Toy-instance extras for gap diagnostics.
  std::function<double(const Vector&, const Vector&)> exact_phi;
  std::function<double(const Vector&)> exact_g;
  std::function<Vector(const Vector&)> y_star;  // argmin_y phi(x, y)
  std::string constants_note;
};

struct CspaStrongConstants {
  double mu_Phi = 0;
  double mu_G = 0;
  double Q = 1;
};

class CspaSchedule {
 public:
  static CspaSchedule make(CspaMode mode, int N, double D_X, double D_Y, double M_G,
                           double M_Phi,
                           std::optional<CspaStrongConstants> strong = std::nullopt,
                           double c_g = 1.0, double c_e = 1.0);

  // General mode stepsize, a function of the iteration index only.
  double gamma(int k) const;
  // Strong mode stepsize, a function of the position counter within the set
  // the iteration lands in (tau_B or tau_N) and the membership flag.
  double gamma_strong(int position, bool feasible) const;
  double eta(int k) const;

  CspaMode mode() const { return mode_; }
  int N() const { return N_; }
  int s() const { return s_; }
  int window_size() const { return N_ - s_ + 1; }
  double D_X() const { return D_X_; }
  double D_Y() const { return D_Y_; }
  double M_G() const { return M_G_; }
  double M_Phi() const { return M_Phi_; }
  double nu() const { return nu_; }
  const CspaStrongConstants& strong() const { return strong_; }
  double c_gamma() const { return c_g_; }
  double c_eta() const { return c_e_; }
  bool is_strong() const { return mode_ == CspaMode::strongly_convex; }

 private:
  CspaMode mode_ = CspaMode::general;
  int N_ = 0, s_ = 1;
  double D_X_ = 0, D_Y_ = 0, M_G_ = 0, M_Phi_ = 0, nu_ = 0;
  CspaStrongConstants strong_;
  double c_g_ = 1, c_e_ = 1;
};

// tau_B / tau_N: how many window iterations have landed in each set so far.
struct PositionCounters {
  int tau_B = 0;
  int tau_N = 0;
};

struct CspaEntry {
  int k = 0;
  bool feasible = false;
  double g_sample = 0;
  double gamma = 0;
  double eta = 0;
  double rho = 0;  // per-set gamma_k / A_k in strong mode, gamma_k otherwise
  int position = 0;  // tau within its set, 1-based
  Vector x, y;
};

struct CspaTrace {
  CspaMode mode = CspaMode::general;
  int N = 0, s = 1;
  std::vector<CspaEntry> window;
  double wall_seconds = 0;

  long b_count() const;
  long n_count() const;
};

struct CspaResult {
  CspaTrace trace;
  Vector x_out, y_out;
  int R = 0;
};

// Algorithm: on a feasible draw update y along Phi' and keep x; otherwise
// update x along G' and keep y. The output pair is (x_R, y_R) with R drawn
// from B proportionally to gamma_R (general) or rho_R (strong).
CspaResult run_cspa(const ParameterizedProblem& problem, const CspaSchedule& sched,
                    SampleStream& zeta_stream, SampleStream& xi_stream,
                    SampleStream& selector_stream,
                    std::optional<std::pair<Vector, Vector>> initial = std::nullopt);

// Draw the output index from a recorded trace.
int sample_output_index(const CspaTrace& trace, CspaMode mode, SampleStream& stream);

// Well-definedness condition of the general mode: (W/2) min gamma_k eta_k >
// D_X^2 + (M_G^2/2) sum_{k in N} gamma_k^2; when it holds, |B| >= W/2.
ConditionDiagnostic cspa_condition_realized(const CspaTrace& trace, const CspaSchedule& sched,
                                            double D_X, double M_G);
// Strong-mode analogue: sum_{k=s..N} rho_k eta_k > (1 - mu_G gamma_s / Q) D_X^2
// + (M_G^2/2) sum_{k in N} rho_k gamma_k.
ConditionDiagnostic cspa_condition_strong_realized(const CspaTrace& trace,
                                                   const CspaSchedule& sched, double D_X,
                                                   double M_G);

struct Candidate {
  Vector x, y;
  double g_bar = std::numeric_limits<double>::quiet_NaN();
  double phi_bar = std::numeric_limits<double>::quiet_NaN();
};

// T^2 candidates partitioned in arrival order into T sets of T.
struct CandidatePool {
  int T = 0;
  std::vector<Candidate> candidates;
  std::vector<int> set_winners;  // index of the min-g_bar candidate per set
  int best = -1;                 // min-phi_bar among the winners
};

// Post-optimization validation: per-candidate g_bar over a fresh sample of
// size S (or one shared sample), then phi_bar for the per-set winners only.
// Ties break toward the lowest candidate index.
void validate_candidates(CandidatePool& pool, const ParameterizedProblem& problem, int S,
                         std::uint64_t seed, bool shared_samples = false);

struct TwoPhaseConfig {
  int T = 1;
  int N = 2;
  int S = 1;
  CspaMode mode = CspaMode::general;
  double D_X = 1.0, D_Y = 1.0, M_G = 1.0, M_Phi = 1.0;
  double c_g = 1.0;
  double c_e = 1.0;
  std::optional<CspaStrongConstants> strong;
  bool shared_validation_samples = false;
};

struct TwoPhaseResult {
  Vector x, y;
  CandidatePool pool;
  double wall_seconds = 0;
};

// T^2 warm-started CSPA runs (each starting from the previous output),
// then the two-step validation pick. An inner run with empty B is retried
// once with the eta scale doubled.
TwoPhaseResult run_two_phase(const ParameterizedProblem& problem, const TwoPhaseConfig& config,
                             std::uint64_t seed);

struct TwoPhaseParams {
  int T = 0;
  long N = 0;
  long S = 0;
};

// Default (T, N, S) for a target accuracy eps and confidence 1 - Lambda;
// the log is base 2 (matching the 2^-T term) and everything rounds up.
TwoPhaseParams two_phase_parameters(double eps, double Lambda, double D_X, double D_Y,
                                    double M_G, double M_Phi, double sigma);

}  // namespace csaopt

#endif
