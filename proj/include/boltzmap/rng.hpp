#pragma once

#include <cstdint>
#include <random>

namespace boltzmap {

/// splitmix64 finalizer; used to derive independent stream seeds from a
/// master seed without correlated low bits.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id);

/// Seeded random stream. All variates are generated from mt19937_64 through
/// the functions below (never std:: distributions), so sequences are
/// bit-identical across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `stream_id` derived from `master_seed` (counter-based splitting).
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix_seed(master_seed, stream_id));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; second variate of each pair is cached.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Poisson draw. Inversion by search below rate 30, Hormann's transformed
/// rejection with squeeze (PTRS) above; both are exact samplers.
/// Throws NumericError for rates that overflow the search range.
long sample_poisson(Rng& rng, double rate);

/// Standard normal conditioned on being >= lower. Plain rejection when the
/// bound is not too deep in the tail, Robert's shifted-exponential rejection
/// otherwise.
double sample_normal_lower_bounded(Rng& rng, double lower);

}  // namespace boltzmap
