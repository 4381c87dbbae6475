#include "csaopt/benchmark.hpp"

#include <cmath>

namespace csaopt {
namespace {

Vector clip_box(const Vector& x, const Vector& lo, const Vector& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

Vector proj_halfspace(const Vector& x, const Vector& a, double b) {
  const double v = a.dot(x) - b;
  if (v <= 0) return x;
  return x - (v / a.squaredNorm()) * a;
}

Vector proj_ball(const Vector& x, const Vector& e, double r) {
  Vector d = x - e;
  const double n = d.norm();
  if (n <= r) return x;
  return e + (r / n) * d;
}

template <typename ProjB>
Vector dykstra(const Vector& point, const Vector& lo, const Vector& hi, ProjB&& proj_b) {
  Vector x = point;
  Vector p = Vector::Zero(point.size()), q = Vector::Zero(point.size());
  for (int it = 0; it < 200000; ++it) {
    const Vector y = proj_b(x + p);
    p = x + p - y;
    const Vector xn = clip_box(y + q, lo, hi);
    q = y + q - xn;
    const double step = (xn - x).norm();
    x = xn;
    if (step < 1e-14 && it > 2) break;
  }
  return x;
}

// Max distance from c to a corner of the box.
double max_box_distance(const Vector& c, const Vector& lo, const Vector& hi) {
  double s = 0;
  for (int i = 0; i < c.size(); ++i) {
    const double d = std::max(std::abs(c[i] - lo[i]), std::abs(hi[i] - c[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Vector project_box_halfspace(const Vector& point, const Vector& lo, const Vector& hi,
                             const Vector& a, double b) {
  return dykstra(point, lo, hi, [&](const Vector& x) { return proj_halfspace(x, a, b); });
}

Vector project_box_ball(const Vector& point, const Vector& lo, const Vector& hi, const Vector& e,
                        double r) {
  return dykstra(point, lo, hi, [&](const Vector& x) { return proj_ball(x, e, r); });
}

StochasticProblem make_benchmark_convex(int dim, double sigma, Vector c, Vector a, double b) {
  if (dim < 1) throw ConfigError("benchmark: dim must be >= 1");
  const Vector lo = Vector::Zero(dim), hi = Vector::Ones(dim);

  StochasticProblem p;
  p.name = "benchmark_convex";
  p.geometry = ProxGeometry::box(lo, hi);

  const Vector c0 = c;
  p.objective = StochasticOracle(
      [c0, sigma, dim](const Vector& x, const SampleToken& tok) {
        Vector d = x - c0;
        const double n = d.norm();
        OracleEval e;
        e.subgradient = n > 0 ? Vector((1.0 / n) * d) : Vector(Vector::Zero(dim));
        e.value = n;
        for (int i = 0; i < dim; ++i) {
          const double z = sigma * tok.normal(i);
          e.value += z * x[i];
          e.subgradient[i] += z;
        }
        return e;
      },
      std::sqrt(1.0 + dim * sigma * sigma), 0.0, sigma * std::sqrt(static_cast<double>(dim)));

  const Vector a0 = a;
  p.constraint = StochasticOracle(
      [a0, b, sigma](const Vector& x, const SampleToken& tok) {
        OracleEval e;
        e.value = a0.dot(x) - b + sigma * tok.normal(0);
        e.subgradient = a0;
        return e;
      },
      a.norm(), 0.0, sigma);

  p.exact_objective = [c0](const Vector& x) { return (x - c0).norm(); };
  p.exact_constraint = [a0, b](const Vector& x) { return a0.dot(x) - b; };
  p.exact_objective_subgrad = [c0](const Vector& x) {
    Vector d = x - c0;
    const double n = d.norm();
    return n > 0 ? Vector((1.0 / n) * d) : Vector(Vector::Zero(d.size()));
  };
  p.x_star = project_box_halfspace(c, lo, hi, a, b);
  p.f_star = (*p.x_star - c).norm();
  p.constants_note = "analytic: M_F = sqrt(1 + dim sigma^2), M_G = |a|, sigma from generator";
  return p;
}

StochasticProblem make_benchmark_strong(int dim, double sigma, Vector c, Vector e, double r) {
  if (dim < 1) throw ConfigError("benchmark: dim must be >= 1");
  const Vector lo = Vector::Zero(dim), hi = Vector::Ones(dim);

  StochasticProblem p;
  p.name = "benchmark_strong";
  p.geometry = ProxGeometry::box(lo, hi);

  const Vector c0 = c;
  p.objective = StochasticOracle(
      [c0, sigma, dim](const Vector& x, const SampleToken& tok) {
        Vector d = x - c0;
        for (int i = 0; i < dim; ++i) d[i] -= sigma * tok.normal(i);
        OracleEval ev;
        ev.value = 0.5 * d.squaredNorm();
        ev.subgradient = d;
        return ev;
      },
      std::sqrt(max_box_distance(c, lo, hi) * max_box_distance(c, lo, hi) +
                dim * sigma * sigma),
      1.0, sigma);

  const Vector e0 = e;
  p.constraint = StochasticOracle(
      [e0, r, sigma](const Vector& x, const SampleToken& tok) {
        OracleEval ev;
        ev.value = 0.5 * (x - e0).squaredNorm() - 0.5 * r * r + sigma * tok.normal(0);
        ev.subgradient = x - e0;
        return ev;
      },
      max_box_distance(e, lo, hi), 1.0, sigma);

  p.exact_objective = [c0](const Vector& x) { return 0.5 * (x - c0).squaredNorm(); };
  p.exact_constraint = [e0, r](const Vector& x) {
    return 0.5 * (x - e0).squaredNorm() - 0.5 * r * r;
  };
  p.exact_objective_subgrad = [c0](const Vector& x) { return Vector(x - c0); };
  p.x_star = project_box_ball(c, lo, hi, e, r);
  p.f_star = 0.5 * (*p.x_star - c).squaredNorm();
  p.constants_note = "analytic: M from box corner distances, mu_F = mu_G = 1";
  return p;
}

StochasticProblem make_synthetic_benchmark(BenchmarkKind kind, int dim, double sigma,
                                           SampleStream& stream) {
  const SampleToken tok = stream.draw();
  Vector c(dim);
  for (int i = 0; i < dim; ++i) c[i] = 0.15 + 0.3 * tok.u01(i);

  if (kind == BenchmarkKind::convex) {
    Vector a(dim);
    for (int i = 0; i < dim; ++i) a[i] = 0.5 + 0.5 * tok.u01(dim + i);
    a /= a.norm();
    // Slack at c by a quarter of the remaining range, so x* = c.
    const double span = a.dot(Vector::Ones(dim)) - a.dot(c);
    const double b = a.dot(c) + 0.25 * span;
    return make_benchmark_convex(dim, sigma, c, a, b);
  }
  const Vector e = Vector::Constant(dim, 0.5);
  const double r = (c - e).norm() + 0.25;
  return make_benchmark_strong(dim, sigma, c, e, r);
}

ParameterizedProblem make_toy_coupled(double noise_phi, double noise_g) {
  ParameterizedProblem p;
  p.name = "toy_coupled";
  p.geom_x = ProxGeometry::interval(0, 1);
  p.geom_y = ProxGeometry::interval(0, 1);

  p.objective = ParamOracle(
      [noise_phi](const Vector& x, const Vector& y, const SampleToken& tok) {
        const double z = noise_phi * tok.normal(0);
        OracleEval e;
        e.value = (y[0] - x[0]) * (y[0] - x[0]) + z * y[0];
        e.subgradient = Vector::Constant(1, 2.0 * (y[0] - x[0]) + z);
        return e;
      },
      std::sqrt(4.0 + noise_phi * noise_phi), 0.0, noise_phi);

  p.constraint = StochasticOracle(
      [noise_g](const Vector& x, const SampleToken& tok) {
        OracleEval e;
        e.value = x[0] - 0.3 + noise_g * tok.normal(0);
        e.subgradient = Vector::Ones(1);
        return e;
      },
      1.0, 0.0, noise_g);

  p.exact_phi = [](const Vector& x, const Vector& y) {
    return (y[0] - x[0]) * (y[0] - x[0]);
  };
  p.exact_g = [](const Vector& x) { return x[0] - 0.3; };
  p.y_star = [](const Vector& x) { return x; };
  p.constants_note = "analytic";
  return p;
}

ParameterizedProblem make_toy_coupled_strong(double noise_phi, double noise_g) {
  ParameterizedProblem p = make_toy_coupled(noise_phi, noise_g);
  p.name = "toy_coupled_strong";

  p.objective = ParamOracle(
      [noise_phi](const Vector& x, const Vector& y, const SampleToken& tok) {
        const double z = noise_phi * tok.normal(0);
        OracleEval e;
        e.value = (y[0] - x[0]) * (y[0] - x[0]) + z * y[0];
        e.subgradient = Vector::Constant(1, 2.0 * (y[0] - x[0]) + z);
        return e;
      },
      std::sqrt(4.0 + noise_phi * noise_phi), 2.0, noise_phi);

  p.constraint = StochasticOracle(
      [noise_g](const Vector& x, const SampleToken& tok) {
        OracleEval e;
        e.value = 0.5 * (x[0] - 0.8) * (x[0] - 0.8) - 0.045 + noise_g * tok.normal(0);
        e.subgradient = Vector::Constant(1, x[0] - 0.8);
        return e;
      },
      0.8, 1.0, noise_g);

  p.exact_g = [](const Vector& x) {
    return 0.5 * (x[0] - 0.8) * (x[0] - 0.8) - 0.045;
  };
  return p;
}

}  // namespace csaopt
