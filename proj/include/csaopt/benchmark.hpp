#ifndef CSAOPT_BENCHMARK_HPP
#define CSAOPT_BENCHMARK_HPP

#include "csaopt/cspa.hpp"
#include "csaopt/oracle.hpp"

namespace csaopt {

enum class BenchmarkKind { convex, strongly_convex };

// Synthetic rate-test instances with a known optimum.
//   convex:          F(x,zeta) = |x - c|_2 + <zeta, x>, G(x,xi) = <a,x> - b + xi
//   strongly_convex: F(x,zeta) = 0.5 |x - c - zeta|^2,  G(x,xi) = 0.5 |x - e|^2 - r^2/2 + xi
// over the box [0,1]^dim with zero-mean Gaussian noise of scale sigma. The
// instance parameters are drawn from the stream; the generated constraint is
// slack at c (x* = c), so gaps stay nonnegative. The optimum is computed at
// construction by the deterministic reference projection below.
StochasticProblem make_synthetic_benchmark(BenchmarkKind kind, int dim, double sigma,
                                           SampleStream& stream);

// Fully specified instances (binding-constraint cases in particular).
StochasticProblem make_benchmark_convex(int dim, double sigma, Vector c, Vector a, double b);
StochasticProblem make_benchmark_strong(int dim, double sigma, Vector c, Vector e, double r);

// Euclidean projection onto box /\ {<a,x> <= b} resp. box /\ ball(e,r) by
// Dykstra's alternating projections; the reference solver behind x_star.
Vector project_box_halfspace(const Vector& point, const Vector& lo, const Vector& hi,
                             const Vector& a, double b);
Vector project_box_ball(const Vector& point, const Vector& lo, const Vector& hi, const Vector& e,
                        double r);

// Coupled 1-d toys with analytic y*(x) = x on X = Y = [0,1].
//   general: Phi = (y-x)^2 + zeta*y,            G = x - 0.3 + xi
//   strong:  Phi = (y-x)^2 + zeta*y (mu = 2),   G = 0.5 (x-0.8)^2 - 0.045 + xi (mu = 1)
ParameterizedProblem make_toy_coupled(double noise_phi, double noise_g);
ParameterizedProblem make_toy_coupled_strong(double noise_phi, double noise_g);

}  // namespace csaopt

#endif
