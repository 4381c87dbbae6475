#ifndef CSAOPT_RANDOM_HPP
#define CSAOPT_RANDOM_HPP

#include <cstdint>

namespace csaopt {

// Counter-based sample identity. A token names one realization of the
// underlying random element; oracles derive as many variates as they need
// from it through slot indices. Two draws with the same (seed, stream,
// index) are bit-identical regardless of call order or thread, so a token
// can be reused, e.g. for the feasibility check and the subgradient step
// within one iteration.
//
// u01(slot) and normal(slot) are independent families: normal(k) does not
// collide with u01(k).
struct SampleToken {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t index = 0;

  // Uniform on the open interval (0, 1).
  double u01(std::uint64_t slot) const;
  // Standard normal (Box-Muller).
  double normal(std::uint64_t slot) const;
  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n, std::uint64_t slot) const;

  std::uint64_t raw(std::uint64_t slot, std::uint64_t family) const;
};

// Monotone draw counter over one (seed, stream_id) sample sequence.
// Single-owner: one stream per oracle per trial.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), id_(stream_id) {}

  SampleToken draw() { return SampleToken{seed_, id_, counter_++}; }
  void reset() { counter_ = 0; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return id_; }
  std::uint64_t count() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t counter_ = 0;
};

// Fixed stream-id layout used by the experiment harness so that runs are
// reproducible from (seed, config) alone.
namespace stream_id {
constexpr std::uint64_t objective = 0;
constexpr std::uint64_t constraint = 1;
constexpr std::uint64_t output_selector = 2;
constexpr std::uint64_t evaluation = 3;
constexpr std::uint64_t pilot = 4;
constexpr std::uint64_t instance = 5;
constexpr std::uint64_t saa_freeze = 6;
constexpr std::uint64_t train_evaluation = 7;
constexpr std::uint64_t validation_base = 100;  // +candidate index
}  // namespace stream_id

}  // namespace csaopt

#endif
