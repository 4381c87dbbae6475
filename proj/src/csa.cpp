#include "csaopt/csa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace csaopt {
namespace {

constexpr long kStoreIterateLimit = 100000;

int ceil_half(int n) { return (n + 1) / 2; }

}  // namespace

CsaSchedule CsaSchedule::make(CsaMode mode, int N, double D, double M_F, double M_G,
                              std::optional<StrongConstants> strong, double c_g, double c_e) {
  if (N < 2) throw ConfigError("schedule: N must be >= 2");
  if (!(D > 0) || !(M_F > 0) || !(M_G > 0))
    throw ConfigError("schedule: D, M_F, M_G must be positive");
  if (!(c_g > 0) || !(c_e >= 0)) throw ConfigError("schedule: scale factors must be positive");

  CsaSchedule s;
  s.mode_ = mode;
  s.N_ = N;
  s.D_ = D;
  s.M_F_ = M_F;
  s.M_G_ = M_G;
  s.c_g_ = c_g;
  s.c_e_ = c_e;

  if (mode == CsaMode::strongly_convex) {
    if (!strong || !(strong->mu_F > 0) || !(strong->mu_G > 0) || !(strong->Q >= 1))
      throw ConfigError("schedule: strongly convex mode needs mu_F > 0, mu_G > 0 and Q >= 1");
    s.strong_ = *strong;
    s.s_ = ceil_half(N);
    // a_k = mu gamma_k / Q = 2 c_g / (k+1) must stay below 1 from k = 2 on,
    // otherwise the A_k recursion loses positivity.
    if (2.0 * c_g / 3.0 >= 1.0)
      throw ConfigError("schedule: c_g too large for the strongly convex weights (needs c_g < 1.5)");
  } else {
    s.s_ = (mode == CsaMode::general_constant) ? 1 : ceil_half(N);
  }
  return s;
}

double CsaSchedule::gamma(int k, bool feasible) const {
  switch (mode_) {
    case CsaMode::general_constant:
      return c_g_ * D_ / (std::sqrt(static_cast<double>(N_)) * (M_F_ + M_G_));
    case CsaMode::general_variable:
      return c_g_ * D_ / (std::sqrt(static_cast<double>(k)) * (M_F_ + M_G_));
    case CsaMode::strongly_convex: {
      const double mu = feasible ? strong_.mu_F : strong_.mu_G;
      return c_g_ * 2.0 * strong_.Q / (mu * (k + 1));
    }
  }
  return 0;
}

double CsaSchedule::eta(int k) const {
  switch (mode_) {
    case CsaMode::general_constant:
      return c_e_ * 4.0 * (M_F_ + M_G_) * D_ / std::sqrt(static_cast<double>(N_));
    case CsaMode::general_variable:
      return c_e_ * 4.0 * D_ * (M_F_ + M_G_) / std::sqrt(static_cast<double>(k));
    case CsaMode::strongly_convex: {
      const double ratio = std::max(M_F_ * M_F_ / (strong_.mu_F * strong_.mu_F),
                                    M_G_ * M_G_ / (strong_.mu_G * strong_.mu_G));
      return c_e_ * (2.0 * strong_.mu_G * strong_.Q / k) * (2.0 * D_ * D_ / k + ratio);
    }
  }
  return 0;
}

long RunTrace::b_count() const {
  long n = 0;
  for (const auto& e : window) n += e.feasible ? 1 : 0;
  return n;
}

long RunTrace::n_count() const { return static_cast<long>(window.size()) - b_count(); }

EmptyBError::EmptyBError(RunTrace trace, ConditionDiagnostic diag)
    : std::runtime_error("csa: B is empty, output undefined (condition lhs=" +
                         std::to_string(diag.lhs) + " rhs=" + std::to_string(diag.rhs) +
                         (diag.holds ? ", condition held" : ", condition violated") + ")"),
      trace_(std::move(trace)),
      diag_(diag) {}

CsaResult run_csa(const StochasticProblem& problem, const ProxGeometry& geom,
                  const CsaSchedule& sched, SampleStream& zeta_stream, SampleStream& xi_stream) {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = sched.N(), s = sched.s();

  RunTrace trace;
  trace.mode = sched.mode();
  trace.N = N;
  trace.s = s;
  trace.stored_iterates = N <= kStoreIterateLimit;
  trace.window.reserve(trace.stored_iterates ? sched.window_size() : 0);
  trace.weighted_sum = Vector::Zero(geom.dimension());

  // Strong mode: A_k runs over all iterations regardless of membership.
  double A = 1.0;

  Vector x = geom.prox_center();
  for (int k = 1; k <= N; ++k) {
    const SampleToken xi = xi_stream.draw();
    const OracleEval g = problem.constraint.eval(x, xi);
    const double eta_k = sched.eta(k);
    const bool feasible = g.value <= eta_k;
    const double gamma_k = sched.gamma(k, feasible);

    double weight = gamma_k;
    if (sched.is_strong()) {
      const double mu = feasible ? sched.strong().mu_F : sched.strong().mu_G;
      const double a_k = mu * gamma_k / sched.strong().Q;
      if (k >= 2) A *= 1.0 - a_k;
      if (!(A > 0)) throw ConfigError("csa: strong-mode weight recursion left (0,1]");
      weight = gamma_k / A;
    }

    if (k >= s) {
      if (feasible) {
        trace.weighted_sum += weight * x;
        trace.weight_total += weight;
      }
      TraceEntry e;
      e.k = k;
      e.feasible = feasible;
      e.g_sample = g.value;
      e.gamma = gamma_k;
      e.eta = eta_k;
      e.weight = weight;
      if (trace.stored_iterates) e.x = x;
      trace.window.push_back(std::move(e));
    }

    const OracleEval step =
        feasible ? problem.objective.eval(x, zeta_stream.draw()) : g;
    x = geom.prox_map(x, gamma_k * step.subgradient);
  }

  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (trace.weight_total <= 0) {
    auto diag = check_condition_realized(trace, sched, sched.D(), sched.M_F(), sched.M_G());
    throw EmptyBError(std::move(trace), diag);
  }

  CsaResult out;
  out.x_bar = trace.weighted_sum / trace.weight_total;
  out.trace = std::move(trace);
  return out;
}

Vector average_output(const RunTrace& trace, const CsaSchedule& sched) {
  (void)sched;  // weights were fixed when the trace was recorded
  if (trace.stored_iterates && !trace.window.empty() && trace.window.front().x.size() > 0) {
    Vector sum = Vector::Zero(trace.window.front().x.size());
    double total = 0;
    for (const auto& e : trace.window) {
      if (!e.feasible) continue;
      sum += e.weight * e.x;
      total += e.weight;
    }
    if (total <= 0) throw DomainError("average_output: B is empty");
    return sum / total;
  }
  if (trace.weight_total <= 0) throw DomainError("average_output: B is empty");
  return trace.weighted_sum / trace.weight_total;
}

namespace {

// Condition sides shared by the a-priori and realized variants. gamma_of(k)
// must respect the assumed/realized membership; weight_of is gamma in the
// general modes and rho in strong mode.
ConditionDiagnostic condition_from_split(const CsaSchedule& sched, double D, double M_F,
                                         double M_G, const std::vector<bool>& feasible,
                                         const std::vector<double>& gamma,
                                         const std::vector<double>& weight) {
  const int W = static_cast<int>(feasible.size());
  double min_we = std::numeric_limits<double>::infinity();
  double sum_B = 0, sum_N = 0;
  bool any_infeasible = false;
  for (int i = 0; i < W; ++i) {
    const int k = sched.s() + i;
    if (feasible[i]) {
      sum_B += weight[i] * gamma[i] * M_F * M_F;
    } else {
      any_infeasible = true;
      sum_N += weight[i] * gamma[i] * M_G * M_G;
      min_we = std::min(min_we, weight[i] * sched.eta(k));
    }
  }
  // An empty N-set makes the min vacuous; the condition then holds trivially.
  ConditionDiagnostic d;
  if (!any_infeasible) {
    d.lhs = std::numeric_limits<double>::infinity();
    d.rhs = 0;
    d.holds = true;
    return d;
  }
  double lead = 1.0;
  if (sched.is_strong() && !gamma.empty()) {
    const double mu_s = feasible.front() ? sched.strong().mu_F : sched.strong().mu_G;
    lead = std::max(0.0, 1.0 - mu_s * gamma.front() / sched.strong().Q);
  }
  d.lhs = 0.5 * W * min_we;
  d.rhs = lead * D * D + 0.5 * sum_B + 0.5 * sum_N;
  d.holds = d.lhs > d.rhs;
  return d;
}

}  // namespace

ConditionDiagnostic check_condition(const CsaSchedule& sched, double D, double M_F, double M_G,
                                    double assumed_B_fraction) {
  const int W = sched.window_size();
  const double f = std::clamp(assumed_B_fraction, 0.0, 1.0);
  int b_size = static_cast<int>(std::lround(f * W));

  // Conservative split: assign the largest gamma^2 terms to the side with the
  // bigger constant so the right side is maximal.
  std::vector<int> order(W);
  for (int i = 0; i < W; ++i) order[i] = i;
  std::vector<double> g2(W);
  for (int i = 0; i < W; ++i) {
    const int k = sched.s() + i;
    const double gb = sched.gamma(k, true), gn = sched.gamma(k, false);
    g2[i] = std::max(gb * gb, gn * gn);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return g2[a] > g2[b]; });

  std::vector<bool> feasible(W, false);
  const bool big_first_to_B = M_F >= M_G;
  int assigned_b = 0;
  for (int idx : order) {
    if (big_first_to_B) {
      if (assigned_b < b_size) {
        feasible[idx] = true;
        ++assigned_b;
      }
    } else {
      if (assigned_b < W - b_size) {
        ++assigned_b;  // leave in N-set
      } else {
        feasible[idx] = true;
      }
    }
  }

  std::vector<double> gamma(W), weight(W);
  double A = 1.0;
  for (int k = 1; k <= sched.N(); ++k) {
    const int i = k - sched.s();
    const bool feas = (i >= 0 && i < W) ? feasible[i] : true;
    const double gk = sched.gamma(k, feas);
    double w = gk;
    if (sched.is_strong()) {
      const double mu = feas ? sched.strong().mu_F : sched.strong().mu_G;
      if (k >= 2) A *= 1.0 - mu * gk / sched.strong().Q;
      w = gk / std::max(A, 1e-300);
    }
    if (i >= 0 && i < W) {
      gamma[i] = gk;
      weight[i] = sched.is_strong() ? w : gk;
    }
  }
  return condition_from_split(sched, D, M_F, M_G, feasible, gamma, weight);
}

ConditionDiagnostic check_condition_realized(const RunTrace& trace, const CsaSchedule& sched,
                                             double D, double M_F, double M_G) {
  const int W = static_cast<int>(trace.window.size());
  std::vector<bool> feasible(W);
  std::vector<double> gamma(W), weight(W);
  for (int i = 0; i < W; ++i) {
    feasible[i] = trace.window[i].feasible;
    gamma[i] = trace.window[i].gamma;
    weight[i] = sched.is_strong() ? trace.window[i].weight : trace.window[i].gamma;
  }
  return condition_from_split(sched, D, M_F, M_G, feasible, gamma, weight);
}

StrongWeights strong_weights(const CsaSchedule& sched, const std::vector<bool>& feasible_by_k) {
  if (!sched.is_strong()) throw ConfigError("strong_weights: schedule is not strongly convex");
  if (static_cast<int>(feasible_by_k.size()) != sched.N())
    throw InputError("strong_weights: membership flags must cover k = 1..N");
  StrongWeights w;
  w.a.resize(sched.N());
  w.A.resize(sched.N());
  w.rho.resize(sched.N());
  double A = 1.0;
  for (int k = 1; k <= sched.N(); ++k) {
    const bool feas = feasible_by_k[k - 1];
    const double gk = sched.gamma(k, feas);
    const double mu = feas ? sched.strong().mu_F : sched.strong().mu_G;
    const double a_k = mu * gk / sched.strong().Q;
    if (k >= 2) A *= 1.0 - a_k;
    w.a[k - 1] = a_k;
    w.A[k - 1] = A;
    w.rho[k - 1] = gk / A;
  }
  return w;
}

}  // namespace csaopt
