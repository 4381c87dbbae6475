#include "csaopt/cspa.hpp"

#include <chrono>
#include <cmath>

namespace csaopt {

CspaSchedule CspaSchedule::make(CspaMode mode, int N, double D_X, double D_Y, double M_G,
                                double M_Phi, std::optional<CspaStrongConstants> strong,
                                double c_g, double c_e) {
  if (N < 2) throw ConfigError("cspa schedule: N must be >= 2");
  if (!(D_X > 0) || !(D_Y > 0) || !(M_G > 0) || !(M_Phi > 0))
    throw ConfigError("cspa schedule: D_X, D_Y, M_G, M_Phi must be positive");
  if (!(c_g > 0) || !(c_e >= 0)) throw ConfigError("cspa schedule: scale factors must be positive");

  CspaSchedule s;
  s.mode_ = mode;
  s.N_ = N;
  s.D_X_ = D_X;
  s.D_Y_ = D_Y;
  s.M_G_ = M_G;
  s.M_Phi_ = M_Phi;
  s.nu_ = (M_G * D_Y) / (M_Phi * D_X);
  s.c_g_ = c_g;
  s.c_e_ = c_e;

  if (mode == CspaMode::strongly_convex) {
    if (!strong || !(strong->mu_Phi > 0) || !(strong->mu_G > 0) || !(strong->Q >= 1))
      throw ConfigError("cspa schedule: strong mode needs mu_Phi > 0, mu_G > 0 and Q >= 1");
    s.strong_ = *strong;
    s.s_ = 1;
    if (2.0 * c_g / 3.0 >= 1.0)
      throw ConfigError("cspa schedule: c_g too large for the strong weights (needs c_g < 1.5)");
  } else {
    s.s_ = (N + 1) / 2 + 1;
  }
  return s;
}

double CspaSchedule::gamma(int k) const {
  if (mode_ != CspaMode::general)
    throw ConfigError("cspa schedule: position-free gamma is general mode only");
  return c_g_ * D_X_ / (M_G_ * std::sqrt(static_cast<double>(k)));
}

double CspaSchedule::gamma_strong(int position, bool feasible) const {
  if (mode_ != CspaMode::strongly_convex)
    throw ConfigError("cspa schedule: positional gamma is strong mode only");
  const double mu = feasible ? strong_.mu_Phi : strong_.mu_G;
  return c_g_ * 2.0 * strong_.Q / (mu * (position + 1));
}

double CspaSchedule::eta(int k) const {
  if (mode_ == CspaMode::general)
    return c_e_ * 8.0 * M_G_ * D_X_ / std::sqrt(static_cast<double>(k));
  return c_e_ * 8.0 * strong_.Q * M_G_ * M_G_ / (k * strong_.mu_G);
}

long CspaTrace::b_count() const {
  long n = 0;
  for (const auto& e : window) n += e.feasible ? 1 : 0;
  return n;
}

long CspaTrace::n_count() const { return static_cast<long>(window.size()) - b_count(); }

CspaResult run_cspa(const ParameterizedProblem& problem, const CspaSchedule& sched,
                    SampleStream& zeta_stream, SampleStream& xi_stream,
                    SampleStream& selector_stream,
                    std::optional<std::pair<Vector, Vector>> initial) {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = sched.N(), s = sched.s();

  CspaTrace trace;
  trace.mode = sched.mode();
  trace.N = N;
  trace.s = s;
  trace.window.reserve(sched.window_size());

  Vector x = initial ? initial->first : problem.geom_x.prox_center();
  Vector y = initial ? initial->second : problem.geom_y.prox_center();
  if (!problem.geom_x.contains(x) || !problem.geom_y.contains(y))
    throw DomainError("cspa: initial point is not feasible");

  // Strong mode keeps per-set position counters and per-set A products;
  // the product skips the first member of each set (A = 1 there).
  PositionCounters tau;
  double A_B = 1.0, A_N = 1.0;

  for (int k = 1; k <= N; ++k) {
    const SampleToken xi = xi_stream.draw();
    const OracleEval g = problem.constraint.eval(x, xi);
    const double eta_k = sched.eta(k);
    const bool feasible = g.value <= eta_k;

    int position;
    double gamma_k, rho_k;
    if (sched.is_strong()) {
      if (feasible) {
        position = ++tau.tau_B;
        gamma_k = sched.gamma_strong(position, true);
        const double a_k = sched.strong().mu_Phi * gamma_k / sched.strong().Q;
        if (position >= 2) A_B *= 1.0 - a_k;
        if (!(A_B > 0)) throw ConfigError("cspa: strong-mode weight recursion left (0,1]");
        rho_k = gamma_k / A_B;
      } else {
        position = ++tau.tau_N;
        gamma_k = sched.gamma_strong(position, false);
        const double a_k = sched.strong().mu_G * gamma_k / sched.strong().Q;
        if (position >= 2) A_N *= 1.0 - a_k;
        if (!(A_N > 0)) throw ConfigError("cspa: strong-mode weight recursion left (0,1]");
        rho_k = gamma_k / A_N;
      }
    } else {
      position = feasible ? ++tau.tau_B : ++tau.tau_N;
      gamma_k = sched.gamma(k);
      rho_k = gamma_k;
    }

    if (k >= s) {
      CspaEntry e;
      e.k = k;
      e.feasible = feasible;
      e.g_sample = g.value;
      e.gamma = gamma_k;
      e.eta = eta_k;
      e.rho = rho_k;
      e.position = position;
      e.x = x;
      e.y = y;
      trace.window.push_back(std::move(e));
    }

    if (feasible) {
      const SampleToken zeta = problem.shared_stream ? xi : zeta_stream.draw();
      const OracleEval phi = problem.objective.eval(x, y, zeta);
      y = problem.geom_y.prox_map(y, gamma_k * phi.subgradient);
    } else {
      x = problem.geom_x.prox_map(x, gamma_k * g.subgradient);
    }
  }

  trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (trace.b_count() == 0) {
    auto diag = sched.is_strong()
                    ? cspa_condition_strong_realized(trace, sched, sched.D_X(), sched.M_G())
                    : cspa_condition_realized(trace, sched, sched.D_X(), sched.M_G());
    throw EmptyBError(RunTrace{}, diag);
  }

  CspaResult out;
  out.R = sample_output_index(trace, sched.mode(), selector_stream);
  for (const auto& e : trace.window) {
    if (e.k == out.R) {
      out.x_out = e.x;
      out.y_out = e.y;
      break;
    }
  }
  out.trace = std::move(trace);
  return out;
}

int sample_output_index(const CspaTrace& trace, CspaMode mode, SampleStream& stream) {
  double total = 0;
  for (const auto& e : trace.window)
    if (e.feasible) total += (mode == CspaMode::strongly_convex) ? e.rho : e.gamma;
  if (!(total > 0)) throw DomainError("sample_output_index: B is empty");

  const double u = stream.draw().u01(0) * total;
  double acc = 0;
  int last = -1;
  for (const auto& e : trace.window) {
    if (!e.feasible) continue;
    acc += (mode == CspaMode::strongly_convex) ? e.rho : e.gamma;
    last = e.k;
    if (u <= acc) return e.k;
  }
  return last;  // u landed on the rounding edge
}

ConditionDiagnostic cspa_condition_realized(const CspaTrace& trace, const CspaSchedule& sched,
                                            double D_X, double M_G) {
  const int W = static_cast<int>(trace.window.size());
  double min_ge = std::numeric_limits<double>::infinity();
  double sum_N = 0;
  bool any_infeasible = false;
  for (const auto& e : trace.window) {
    if (e.feasible) continue;
    any_infeasible = true;
    min_ge = std::min(min_ge, e.gamma * e.eta);
    sum_N += e.gamma * e.gamma;
  }
  ConditionDiagnostic d;
  if (!any_infeasible) {
    d.lhs = std::numeric_limits<double>::infinity();
    d.rhs = 0;
    d.holds = true;
    return d;
  }
  d.lhs = 0.5 * W * min_ge;
  d.rhs = D_X * D_X + 0.5 * M_G * M_G * sum_N;
  d.holds = d.lhs > d.rhs;
  (void)sched;
  return d;
}

ConditionDiagnostic cspa_condition_strong_realized(const CspaTrace& trace,
                                                   const CspaSchedule& sched, double D_X,
                                                   double M_G) {
  double lhs = 0, sum_N = 0;
  for (const auto& e : trace.window) {
    lhs += e.rho * e.eta;
    if (!e.feasible) sum_N += e.rho * e.gamma;
  }
  ConditionDiagnostic d;
  d.lhs = lhs;
  const double gamma_s = trace.window.empty() ? 0 : trace.window.front().gamma;
  const double lead = std::max(0.0, 1.0 - sched.strong().mu_G * gamma_s / sched.strong().Q);
  d.rhs = lead * D_X * D_X + 0.5 * M_G * M_G * sum_N;
  d.holds = d.lhs > d.rhs;
  return d;
}

void validate_candidates(CandidatePool& pool, const ParameterizedProblem& problem, int S,
                         std::uint64_t seed, bool shared_samples) {
  if (S < 1) throw InputError("validate_candidates: S must be >= 1");
  if (pool.T < 1 || pool.candidates.size() != static_cast<size_t>(pool.T) * pool.T)
    throw InputError("validate_candidates: pool must hold T^2 candidates");

  for (size_t i = 0; i < pool.candidates.size(); ++i) {
    SampleStream xi(seed, stream_id::validation_base +
                              (shared_samples ? 0 : static_cast<std::uint64_t>(i)));
    double sum = 0;
    for (int j = 0; j < S; ++j)
      sum += problem.constraint.eval(pool.candidates[i].x, xi.draw()).value;
    pool.candidates[i].g_bar = sum / S;
  }

  pool.set_winners.assign(pool.T, -1);
  for (int set = 0; set < pool.T; ++set) {
    int best = set * pool.T;
    for (int j = set * pool.T; j < (set + 1) * pool.T; ++j)
      if (pool.candidates[j].g_bar < pool.candidates[best].g_bar) best = j;
    pool.set_winners[set] = best;
  }

  pool.best = -1;
  for (int set = 0; set < pool.T; ++set) {
    const int idx = pool.set_winners[set];
    SampleStream zeta(seed, stream_id::validation_base + 1000 +
                                (shared_samples ? 0 : static_cast<std::uint64_t>(idx)));
    double sum = 0;
    for (int j = 0; j < S; ++j) {
      auto& c = pool.candidates[idx];
      sum += problem.objective.eval(c.x, c.y, zeta.draw()).value;
    }
    pool.candidates[idx].phi_bar = sum / S;
    if (pool.best < 0 || pool.candidates[idx].phi_bar < pool.candidates[pool.best].phi_bar)
      pool.best = idx;
  }
}

TwoPhaseResult run_two_phase(const ParameterizedProblem& problem, const TwoPhaseConfig& config,
                             std::uint64_t seed) {
  if (config.T < 1) throw ConfigError("two_phase: T must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  TwoPhaseResult out;
  out.pool.T = config.T;
  out.pool.candidates.reserve(static_cast<size_t>(config.T) * config.T);

  SampleStream zeta(seed, stream_id::objective);
  SampleStream xi(seed, stream_id::constraint);
  SampleStream selector(seed, stream_id::output_selector);

  std::optional<std::pair<Vector, Vector>> warm;
  for (int t = 0; t < config.T * config.T; ++t) {
    CspaResult r;
    bool ok = false;
    for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
      const double eta_scale = attempt == 0 ? 1.0 : 2.0;
      auto sched = CspaSchedule::make(config.mode, config.N, config.D_X, config.D_Y, config.M_G,
                                      config.M_Phi, config.strong, config.c_g,
                                      config.c_e * eta_scale);
      try {
        r = run_cspa(problem, sched, zeta, xi, selector, warm);
        ok = true;
      } catch (const EmptyBError&) {
        if (attempt == 1) throw;
      }
    }
    warm = std::make_pair(r.x_out, r.y_out);
    out.pool.candidates.push_back(Candidate{r.x_out, r.y_out, 0, 0});
  }

  validate_candidates(out.pool, problem, config.S, seed, config.shared_validation_samples);
  out.x = out.pool.candidates[out.pool.best].x;
  out.y = out.pool.candidates[out.pool.best].y;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

TwoPhaseParams two_phase_parameters(double eps, double Lambda, double D_X, double D_Y,
                                    double M_G, double M_Phi, double sigma) {
  if (!(eps > 0) || !(Lambda > 0) || !(Lambda < 1))
    throw ConfigError("two_phase_parameters: need eps > 0 and Lambda in (0,1)");
  const double nu = (M_G * D_Y) / (M_Phi * D_X);
  const double nu2 = std::max(nu * nu, 1.0 / (nu * nu));
  TwoPhaseParams p;
  p.T = static_cast<int>(std::ceil(std::log2(2.0 / Lambda)));
  p.T = std::max(p.T, 1);
  p.N = static_cast<long>(std::ceil(32.0 * 32.0 * D_Y * D_Y * M_Phi * M_Phi * nu2 / (eps * eps)));
  p.S = static_cast<long>(
      std::ceil(64.0 * (p.T + 1.0) * (p.T + 1.0) * sigma * sigma / (eps * eps * Lambda * Lambda)));
  return p;
}

}  // namespace csaopt
