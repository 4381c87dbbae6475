#include "csaopt/oracle.hpp"

#include <cmath>

namespace csaopt {

OracleEval StochasticOracle::eval(const Vector& x, const SampleToken& tok) const {
  if (!fn_) throw ConfigError("oracle: not constructed");
  if (!x.allFinite()) throw InputError("oracle: non-finite point");
  OracleEval out = fn_(x, tok);
  if (!std::isfinite(out.value) || !out.subgradient.allFinite())
    throw DomainError("oracle: non-finite evaluation");
  return out;
}

OracleEval ParamOracle::eval(const Vector& x, const Vector& y, const SampleToken& tok) const {
  if (!fn_) throw ConfigError("oracle: not constructed");
  if (!x.allFinite() || !y.allFinite()) throw InputError("oracle: non-finite point");
  OracleEval out = fn_(x, y, tok);
  if (!std::isfinite(out.value) || !out.subgradient.allFinite())
    throw DomainError("oracle: non-finite evaluation");
  return out;
}

ConstantEstimate estimate_constants(const StochasticOracle& oracle, const ProxGeometry& geom,
                                    int pilot_size, SampleStream& stream) {
  if (pilot_size < 2) throw InputError("estimate_constants: pilot size must be >= 2");

  double sq_sum = 0;
  for (int i = 0; i < pilot_size; ++i) {
    const SampleToken point_tok = stream.draw();
    const SampleToken sample_tok = stream.draw();
    const Vector x = geom.sample_point(point_tok);
    const OracleEval e = oracle.eval(x, sample_tok);
    const double n = geom.dual_norm(e.subgradient);
    sq_sum += n * n;
  }

  double mean = 0, m2 = 0;
  for (int i = 0; i < pilot_size; ++i) {
    const double v = oracle.eval(geom.prox_center(), stream.draw()).value;
    const double d = v - mean;
    mean += d / (i + 1);
    m2 += d * (v - mean);
  }

  ConstantEstimate out;
  out.bound = 1.5 * std::sqrt(sq_sum / pilot_size);
  out.noise = std::sqrt(m2 / (pilot_size - 1));
  return out;
}

}  // namespace csaopt
