#include "pdlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pdlab {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : key_(mix64(mix64(master_seed ^ 0x8BADF00DD15EA5E5ULL) + mix64(stream_id))),
      master_seed_(master_seed),
      stream_id_(stream_id) {}

RngStream::RngStream(std::uint64_t key, std::uint64_t master, std::uint64_t id)
    : key_(key), master_seed_(master), stream_id_(id) {}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(mix64(key_ ^ mix64(index + 0x0D1B54A32D192ED0ULL)),
                   master_seed_, index);
}

std::uint64_t RngStream::next_u64() { return mix64(key_ + (++counter_) * kGamma); }

double RngStream::uniform01() {
  // 53 random bits, shifted into (0,1): (k + 0.5) / 2^53.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential: rate must be positive and finite");
  }
  return -std::log(uniform01()) / rate;
}

double RngStream::normal() {
  if (has_normal_cache_) {
    has_normal_cache_ = false;
    return normal_cache_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform01()));
  const double theta = 6.283185307179586476925286766559 * uniform01();
  normal_cache_ = r * std::sin(theta);
  has_normal_cache_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson: mean must be nonnegative and finite");
  }
  // Knuth's product method below 30; split additively above to avoid
  // exp underflow (Poisson(a+b) = Poisson(a) + Poisson(b)).
  std::uint64_t total = 0;
  while (mean > 30.0) {
    const double half = mean * 0.5;
    total += poisson(half);
    mean -= half;
  }
  const double threshold = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01();
  } while (p > threshold);
  return total + k - 1;
}

}  // namespace pdlab
