#include "csaopt/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace csaopt {
namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

void require_size(const Vector& v, int dim, const char* what) {
  if (v.size() != dim)
    throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                     ", got " + std::to_string(v.size()));
}

Matrix unflatten(const Vector& v, int side) {
  return Eigen::Map<const Matrix>(v.data(), side, side);
}

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

// Exact Euclidean projection onto {A >= 0, Tr A <= C}: symmetrize,
// eigendecompose, clip eigenvalues at zero, then bisect a uniform shift
// when the trace cap is still violated.
Matrix project_psd_trace(const Matrix& m, double cap) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Vector lam = eig.eigenvalues().cwiseMax(0.0);
  const double tr = lam.sum();
  if (tr > cap) {
    double lo = 0.0, hi = lam.maxCoeff();
    for (int it = 0; it < 200; ++it) {
      const double t = 0.5 * (lo + hi);
      const double s = (lam.array() - t).max(0.0).sum();
      (s > cap ? lo : hi) = t;
      if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    lam = (lam.array() - 0.5 * (lo + hi)).max(0.0).matrix();
  }
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

ProxGeometry ProxGeometry::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw ConfigError("box: bound vectors must be nonempty and equally sized");
  if (!lower.allFinite() || !upper.allFinite())
    throw ConfigError("box: bounds must be finite (unbounded sets have no diameter)");
  if (((upper - lower).array() < 0).any()) throw ConfigError("box: lower > upper");
  ProxGeometry g;
  g.kind_ = GeomKind::euclidean_box;
  g.dim_ = static_cast<int>(lower.size());
  g.lower_ = std::move(lower);
  g.upper_ = std::move(upper);
  g.center_ = 0.5 * (g.lower_ + g.upper_);
  return g;
}

ProxGeometry ProxGeometry::interval(double lo, double hi) {
  Vector l(1), u(1);
  l[0] = lo;
  u[0] = hi;
  return box(std::move(l), std::move(u));
}

ProxGeometry ProxGeometry::ball(Vector center, double radius) {
  if (center.size() == 0) throw ConfigError("ball: empty center");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("ball: radius must be positive");
  ProxGeometry g;
  g.kind_ = GeomKind::euclidean_ball;
  g.dim_ = static_cast<int>(center.size());
  g.ball_center_ = std::move(center);
  g.radius_ = radius;
  g.center_ = g.ball_center_;
  return g;
}

ProxGeometry ProxGeometry::simplex(int dim) {
  if (dim < 1) throw ConfigError("simplex: dimension must be >= 1");
  ProxGeometry g;
  g.kind_ = GeomKind::simplex_entropy;
  g.dim_ = dim;
  g.center_ = Vector::Constant(dim, 1.0 / dim);
  return g;
}

ProxGeometry ProxGeometry::psd_trace_ball(int side, double trace_cap) {
  if (side < 1) throw ConfigError("psd_trace_ball: side must be >= 1");
  if (!(trace_cap > 0)) throw ConfigError("psd_trace_ball: trace cap must be positive");
  ProxGeometry g;
  g.kind_ = GeomKind::psd_trace_ball;
  g.side_ = side;
  g.dim_ = side * side;
  g.trace_cap_ = trace_cap;
  g.center_ = flatten(Matrix::Identity(side, side) * (trace_cap / (2.0 * side)));
  return g;
}

ProxGeometry ProxGeometry::product(std::vector<ProxGeometry> parts) {
  if (parts.empty()) throw ConfigError("product: needs at least one component");
  ProxGeometry g;
  g.kind_ = GeomKind::product;
  g.parts_ = std::move(parts);
  g.dim_ = 0;
  for (const auto& p : g.parts_) g.dim_ += p.dimension();
  g.center_.resize(g.dim_);
  int off = 0;
  for (const auto& p : g.parts_) {
    g.center_.segment(off, p.dimension()) = p.prox_center();
    off += p.dimension();
  }
  return g;
}

Vector ProxGeometry::prox_map(const Vector& x, const Vector& v) const {
  require_size(x, dim_, "prox_map point");
  require_size(v, dim_, "prox_map step");
  require_finite(v, "prox_map step");
  if (!contains(x)) throw DomainError("prox_map: point is not feasible");

  switch (kind_) {
    case GeomKind::euclidean_box:
      return (x - v).cwiseMax(lower_).cwiseMin(upper_);
    case GeomKind::euclidean_ball: {
      Vector y = x - v - ball_center_;
      const double n = y.norm();
      if (n > radius_) y *= radius_ / n;
      return ball_center_ + y;
    }
    case GeomKind::simplex_entropy: {
      if ((x.array() <= 0).any())
        throw DomainError("prox_map: entropy prox requires a strictly positive point");
      // Multiplicative closed form z_i ~ x_i * exp(-v_i), max-subtracted.
      Vector w = x.array().log().matrix() - v;
      w.array() -= w.maxCoeff();
      Vector z = w.array().exp().matrix();
      return z / z.sum();
    }
    case GeomKind::psd_trace_ball:
      return flatten(project_psd_trace(unflatten(x - v, side_), trace_cap_));
    case GeomKind::product: {
      Vector out(dim_);
      int off = 0;
      for (const auto& p : parts_) {
        const int d = p.dimension();
        out.segment(off, d) = p.prox_map(x.segment(off, d), v.segment(off, d));
        off += d;
      }
      return out;
    }
  }
  throw InputError("prox_map: unknown geometry kind");
}

double ProxGeometry::bregman(const Vector& z, const Vector& x) const {
  require_size(z, dim_, "bregman center");
  require_size(x, dim_, "bregman point");
  switch (kind_) {
    case GeomKind::euclidean_box:
    case GeomKind::euclidean_ball:
    case GeomKind::psd_trace_ball:
      return 0.5 * (x - z).squaredNorm();
    case GeomKind::simplex_entropy: {
      // KL(x || z); both on the simplex, z interior.
      double s = 0;
      for (int i = 0; i < dim_; ++i) {
        if (z[i] <= 0) throw DomainError("bregman: entropy center on the boundary");
        if (x[i] < 0) throw DomainError("bregman: negative simplex coordinate");
        if (x[i] > 0) s += x[i] * std::log(x[i] / z[i]);
      }
      return std::max(s, 0.0);
    }
    case GeomKind::product: {
      double s = 0;
      int off = 0;
      for (const auto& p : parts_) {
        const int d = p.dimension();
        s += p.bregman(z.segment(off, d), x.segment(off, d));
        off += d;
      }
      return s;
    }
  }
  throw InputError("bregman: unknown geometry kind");
}

double ProxGeometry::diameter() const {
  switch (kind_) {
    case GeomKind::euclidean_box:
      return std::sqrt(0.5 * (upper_ - lower_).squaredNorm());
    case GeomKind::euclidean_ball:
      return radius_ * std::sqrt(2.0);
    case GeomKind::simplex_entropy:
      return std::sqrt(std::log(static_cast<double>(dim_)));
    case GeomKind::psd_trace_ball:
      // max |A - B|_F^2 = 2 C^2 (orthogonal rank-one extremes) for side >= 2.
      return side_ >= 2 ? trace_cap_ : trace_cap_ / std::sqrt(2.0);
    case GeomKind::product: {
      double s = 0;
      for (const auto& p : parts_) {
        const double d = p.diameter();
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  throw InputError("diameter: unknown geometry kind");
}

std::optional<double> ProxGeometry::growth_constant() const {
  switch (kind_) {
    case GeomKind::euclidean_box:
    case GeomKind::euclidean_ball:
    case GeomKind::psd_trace_ball:
      return 1.0;
    case GeomKind::simplex_entropy:
      return std::nullopt;
    case GeomKind::product: {
      double q = 1.0;
      for (const auto& p : parts_) {
        auto pq = p.growth_constant();
        if (!pq) return std::nullopt;
        q = std::max(q, *pq);
      }
      return q;
    }
  }
  return std::nullopt;
}

double ProxGeometry::dual_norm(const Vector& v) const {
  require_size(v, dim_, "dual_norm");
  require_finite(v, "dual_norm");
  switch (kind_) {
    case GeomKind::euclidean_box:
    case GeomKind::euclidean_ball:
    case GeomKind::psd_trace_ball:
      return v.norm();
    case GeomKind::simplex_entropy:
      return v.lpNorm<Eigen::Infinity>();
    case GeomKind::product: {
      double s = 0;
      int off = 0;
      for (const auto& p : parts_) {
        const int d = p.dimension();
        const double n = p.dual_norm(v.segment(off, d));
        s += n * n;
        off += d;
      }
      return std::sqrt(s);
    }
  }
  throw InputError("dual_norm: unknown geometry kind");
}

bool ProxGeometry::contains(const Vector& p, double tol) const {
  if (p.size() != dim_ || !p.allFinite()) return false;
  switch (kind_) {
    case GeomKind::euclidean_box:
      return ((p - lower_).array() >= -tol).all() && ((upper_ - p).array() >= -tol).all();
    case GeomKind::euclidean_ball:
      return (p - ball_center_).norm() <= radius_ + tol;
    case GeomKind::simplex_entropy:
      return (p.array() >= -tol).all() && std::abs(p.sum() - 1.0) <= tol * dim_ + tol;
    case GeomKind::psd_trace_ball: {
      const Matrix m = unflatten(p, side_);
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
        return false;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()),
                                                Eigen::EigenvaluesOnly);
      return eig.eigenvalues().minCoeff() >= -tol && m.trace() <= trace_cap_ + tol;
    }
    case GeomKind::product: {
      int off = 0;
      for (const auto& p_i : parts_) {
        const int d = p_i.dimension();
        if (!p_i.contains(p.segment(off, d), tol)) return false;
        off += d;
      }
      return true;
    }
  }
  return false;
}

Vector ProxGeometry::sample_point(const SampleToken& tok) const {
  return sample_point_impl(tok, 0);
}

Vector ProxGeometry::sample_point_impl(const SampleToken& tok, std::uint64_t base) const {
  switch (kind_) {
    case GeomKind::euclidean_box: {
      Vector p(dim_);
      for (int i = 0; i < dim_; ++i)
        p[i] = lower_[i] + tok.u01(base + i) * (upper_[i] - lower_[i]);
      return p;
    }
    case GeomKind::euclidean_ball: {
      Vector d(dim_);
      for (int i = 0; i < dim_; ++i) d[i] = tok.normal(base + i);
      const double n = d.norm();
      const double r = radius_ * std::pow(tok.u01(base + dim_), 1.0 / dim_);
      return ball_center_ + (n > 0 ? (r / n) * d : d);
    }
    case GeomKind::simplex_entropy: {
      // Dirichlet(1, ..., 1) = uniform over the simplex.
      Vector p(dim_);
      for (int i = 0; i < dim_; ++i) p[i] = -std::log(tok.u01(base + i));
      return p / p.sum();
    }
    case GeomKind::psd_trace_ball: {
      Matrix g(side_, side_);
      for (int i = 0; i < side_ * side_; ++i) g(i / side_, i % side_) = tok.normal(base + i);
      Matrix a = g * g.transpose();
      a *= trace_cap_ * tok.u01(base + side_ * side_) / std::max(a.trace(), 1e-300);
      return flatten(a);
    }
    case GeomKind::product: {
      Vector p(dim_);
      int off = 0;
      std::uint64_t slot = base;
      for (const auto& part : parts_) {
        const int d = part.dimension();
        p.segment(off, d) = part.sample_point_impl(tok, slot);
        off += d;
        slot += static_cast<std::uint64_t>(2 * d + 8);
      }
      return p;
    }
  }
  throw InputError("sample_point: unknown geometry kind");
}

Matrix psd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
  const Vector lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace csaopt
