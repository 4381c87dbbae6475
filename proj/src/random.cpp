#include "csaopt/random.hpp"

#include <cmath>

namespace csaopt {
namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Strictly inside (0,1) so logs are always finite.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t SampleToken::raw(std::uint64_t slot, std::uint64_t family) const {
  std::uint64_t h = splitmix64(seed ^ 0xd1b54a32d192ed03ULL);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ (slot * 2 + family));
  return h;
}

double SampleToken::u01(std::uint64_t slot) const { return to_unit(raw(slot, 0)); }

double SampleToken::normal(std::uint64_t slot) const {
  const double u1 = to_unit(raw(2 * slot, 1));
  const double u2 = to_unit(raw(2 * slot + 1, 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t SampleToken::uniform_index(std::uint64_t n, std::uint64_t slot) const {
  return n == 0 ? 0 : raw(slot, 2) % n;
}

}  // namespace csaopt
