#pragma once

#include <array>
#include <cstdint>

namespace manifit {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the Philox key; the 128-bit counter starts at zero and
/// is advanced once per block of four 32-bit words. Streams are split by
/// deriving new keys with derive_seed(), never by sharing a key:
///
///   trial_seed  = derive_seed(master_seed, trial_index)
///   purpose_key = derive_seed(trial_seed, purpose_id)
///
/// so every trial and every purpose inside a trial owns a disjoint stream
/// that does not depend on the order in which trials are run.
class Philox
{
public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{ 0 }; }

  std::uint64_t operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_below() { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller, both variates used).
  double normal();

  /// One Philox4x32-10 block, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  int next_word_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// SplitMix64 finalizer.
std::uint64_t
mix64(std::uint64_t z);

/// Child seed for stream `index` under `parent`.
std::uint64_t
derive_seed(std::uint64_t parent, std::uint64_t index);

} // namespace manifit
