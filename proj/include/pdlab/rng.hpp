#pragma once

#include <cstdint>
#include <limits>

namespace pdlab {

/// Counter-based random stream keyed by (master_seed, stream_id).
///
/// The i-th raw output is a bijective 64-bit mix of key + i*gamma (SplitMix64),
/// so a stream is fully determined by its key: identical (master_seed,
/// stream_id) pairs give bit-identical sequences regardless of thread
/// schedule, and distinct streams share no state. Substreams are derived by
/// mixing a child index into the key; with stream lengths ~1e8 and stream
/// counts ~1e6 the probability that two derived keys land on overlapping
/// counter ranges is < 1e-3 and of no statistical consequence here.
///
/// Distributions are implemented in-house (not <random>) so that draws are
/// identical across standard libraries. They still go through libm
/// (log/sqrt/cos), which is the one platform-dependent layer; see the
/// experiment manifest notes.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  /// Independent stream derived from this one's key and `index`.
  /// Does not consume randomness from the parent.
  RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform01();
  double uniform(double lo, double hi);
  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate);
  /// Standard normal (Box-Muller, second value cached).
  double normal();
  /// Poisson(mean); exact for any finite mean >= 0.
  std::uint64_t poisson(double mean);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  RngStream(std::uint64_t key, std::uint64_t master, std::uint64_t id);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  double normal_cache_ = 0.0;
  bool has_normal_cache_ = false;
};

}  // namespace pdlab
