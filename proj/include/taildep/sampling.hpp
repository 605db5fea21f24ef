// Seeded generation of uniform sphere directions, radial draws by inverse
// transform, and full elliptical samples X = R L U.
//
// The generator is counter-based (splitmix-style output function over
// key + counter) with explicit state and cheap forking, so row blocks can be
// generated independently and the output never depends on partitioning.

#ifndef TAILDEP_SAMPLING_HPP
#define TAILDEP_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "taildep/model_core.hpp"

namespace taildep {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  // Independent generator derived from this one; does not advance *this.
  CounterRng fork(std::uint64_t index) const {
    CounterRng child(0, 0);
    child.key_ = mix(key_ ^ mix(index + 0xD1B54A32D192ED03ULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

  // Uniform in [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform strictly inside (0, 1) — safe for quantile inversion.
  double next_open_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SampleMatrix {
  int n = 0;
  int k = 0;
  std::vector<double> data;  // row-major n x k
  std::uint64_t seed = 0;
  std::string model;

  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * k + j]; }
  std::vector<double> column(int j) const {
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = at(i, j);
    return col;
  }
};

// n rows of uniform unit-sphere directions in dimension k (row i drawn from
// rng.fork(i); rows with norm < 1e-12 are redrawn).
Matrix sample_sphere(int k, int n, const CounterRng& rng);

// Rows R_i (L u_i) with R_i from radial quantile inversion; deterministic
// under the seed.
SampleMatrix sample_elliptical(const EllipticalModel& model, int n, std::uint64_t seed);

}  // namespace taildep

#endif  // TAILDEP_SAMPLING_HPP
