#include "ift/rng.hpp"

#include "ift/errors.hpp"

namespace ift {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t CounterRng::mix(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next_u64() { return mix(key_ + (++counter_) * kGamma); }

double CounterRng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "below(0)");
  // Rejection keeps the result exactly uniform.
  std::uint64_t limit = -bound % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x >= limit) return x % bound;
  }
}

std::int64_t CounterRng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "between: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t CounterRng::child_seed(std::uint64_t index) const {
  return mix(key_ ^ mix(index * 0xD1B54A32D192ED03ull + 1));
}

}  // namespace ift
