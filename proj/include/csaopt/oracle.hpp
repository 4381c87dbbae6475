#ifndef CSAOPT_ORACLE_HPP
#define CSAOPT_ORACLE_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "csaopt/geometry.hpp"
#include "csaopt/random.hpp"

namespace csaopt {

struct OracleEval {
  double value = 0;
  Vector subgradient;
};

// Stochastic first-order oracle: evaluate-and-subgradient at (point, sample),
// plus the declared constants the stepsize schedules need:
//   bound M   with E|sub|_*^2 <= M^2,
//   modulus   strong convexity mu (0 for merely convex),
//   noise     sigma with E exp{(value - mean)^2 / sigma^2} <= e.
// Oracles are stateless given a sample token.
class StochasticOracle {
 public:
  using EvalFn = std::function<OracleEval(const Vector&, const SampleToken&)>;

  StochasticOracle() = default;
  StochasticOracle(EvalFn fn, double bound, double modulus = 0.0, double noise = 0.0)
      : fn_(std::move(fn)), bound_(bound), modulus_(modulus), noise_(noise) {}

  OracleEval eval(const Vector& x, const SampleToken& tok) const;

  double bound() const { return bound_; }
  double modulus() const { return modulus_; }
  double noise() const { return noise_; }
  void set_bound(double m) { bound_ = m; }
  void set_noise(double s) { noise_ = s; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  EvalFn fn_;
  double bound_ = 0;
  double modulus_ = 0;
  double noise_ = 0;
};

// Parameterized objective Phi(x, y, zeta); the subgradient is taken in y only.
class ParamOracle {
 public:
  using EvalFn = std::function<OracleEval(const Vector&, const Vector&, const SampleToken&)>;

  ParamOracle() = default;
  ParamOracle(EvalFn fn, double bound, double modulus = 0.0, double noise = 0.0)
      : fn_(std::move(fn)), bound_(bound), modulus_(modulus), noise_(noise) {}

  OracleEval eval(const Vector& x, const Vector& y, const SampleToken& tok) const;

  double bound() const { return bound_; }
  double modulus() const { return modulus_; }
  double noise() const { return noise_; }
  void set_bound(double m) { bound_ = m; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  EvalFn fn_;
  double bound_ = 0;
  double modulus_ = 0;
  double noise_ = 0;
};

// A constrained stochastic problem: min E[F(x,zeta)] s.t. E[G(x,xi)] <= 0
// over the geometry's feasible set. Benchmark instances additionally carry a
// known optimum and noiseless evaluators for gap diagnostics; real instances
// leave those empty.
struct StochasticProblem {
  std::string name;
  StochasticOracle objective;
  StochasticOracle constraint;
  ProxGeometry geometry = ProxGeometry::interval(0, 1);

  std::optional<Vector> x_star;
  std::optional<double> f_star;
  std::function<double(const Vector&)> exact_objective;            // noiseless f
  std::function<double(const Vector&)> exact_constraint;           // noiseless g
  std::function<Vector(const Vector&)> exact_objective_subgrad;    // noiseless f'
  std::string constants_note;  // how M, mu, sigma were obtained
};

struct ConstantEstimate {
  double bound = 0;  // M-hat, inflated by 1.5
  double noise = 0;  // sigma-hat at the prox-center
};

// Pilot estimation of the oracle constants: M-hat = 1.5 * sqrt(mean |sub|_*^2)
// over pilot_size feasible points (one sample each), sigma-hat = sample
// standard deviation of the values at the prox-center.
ConstantEstimate estimate_constants(const StochasticOracle& oracle, const ProxGeometry& geom,
                                    int pilot_size, SampleStream& stream);

}  // namespace csaopt

#endif
