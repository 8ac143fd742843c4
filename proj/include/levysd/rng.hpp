#pragma once

#include <cmath>
#include <cstdint>

namespace levysd {

// SplitMix64 finalizer; used to derive child stream identifiers.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Moro's rational approximation of the standard normal quantile.
double inverse_normal_cdf(double u);

// Slow path of normal_quantile: rational start plus Newton refinement.
double refined_normal_quantile(double u);

namespace detail {

struct PhiloxBlock {
  std::uint32_t x0, x1, x2, x3;
};

// Philox 4x32, 10 rounds: a pure function of (key, counter).
inline PhiloxBlock philox4x32_10(std::uint64_t key, std::uint64_t ctr_lo,
                                 std::uint64_t ctr_hi) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;

  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);

  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      k0 += kW0;
      k1 += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
    const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  return {c0, c1, c2, c3};
}

// Cubic Hermite interpolation of the normal quantile: uniform segments over
// the bulk, log-spaced octave segments toward the edges, Newton-refined
// nodes everywhere. Below u = 2^-30 (and mirrored above) the slow path runs.
struct QuantileTable {
  static constexpr int kSegments = 2048;
  static constexpr int kEdge = 16;  // main table hands over at u = kEdge/kSegments
  double c0[kSegments], c1[kSegments], c2[kSegments], c3[kSegments];

  // octaves u in [2^{-(o+8)}, 2^{-(o+7)}), o = 0..kOctaves-1
  static constexpr int kOctaves = 23;
  static constexpr int kOctSegs = 32;
  double e0[kOctaves * kOctSegs], e1[kOctaves * kOctSegs], e2[kOctaves * kOctSegs],
      e3[kOctaves * kOctSegs];

  QuantileTable();
};

const QuantileTable& quantile_table();
inline const QuantileTable& g_quantile_table = quantile_table();

inline double quantile_edge(double u) {
  // u in [2^-30, 2^-7)
  int exp2;
  const double frac = std::frexp(u, &exp2);  // u = frac * 2^exp2, frac in [0.5, 1)
  const int octave = -exp2 - 7;
  const double s = (frac - 0.5) * (2.0 * QuantileTable::kOctSegs);
  const int i = static_cast<int>(s);
  const double t = s - i;
  const int row = octave * QuantileTable::kOctSegs + i;
  const QuantileTable& tab = g_quantile_table;
  return tab.e0[row] + t * (tab.e1[row] + t * (tab.e2[row] + t * tab.e3[row]));
}

}  // namespace detail

// Table-driven standard normal quantile; max error below 1e-7.
inline double normal_quantile(double u) {
  constexpr double edge =
      static_cast<double>(detail::QuantileTable::kEdge) / detail::QuantileTable::kSegments;
  constexpr double floor = 0x1.0p-30;
  if (u >= edge) {
    if (u <= 1.0 - edge) {
      const detail::QuantileTable& tab = detail::g_quantile_table;
      const double s = u * detail::QuantileTable::kSegments;
      const int i = static_cast<int>(s);
      const double t = s - i;
      return tab.c0[i] + t * (tab.c1[i] + t * (tab.c2[i] + t * tab.c3[i]));
    }
    const double v = 1.0 - u;  // exact for u >= 1/2
    if (v >= floor) return -detail::quantile_edge(v);
    return refined_normal_quantile(u);
  }
  if (u >= floor) return detail::quantile_edge(u);
  return refined_normal_quantile(u);
}

// Counter-based random stream. A draw is a pure function of
// (seed, stream id, draw index), so any index can be read in any order and
// batches can run on disjoint streams without coordination.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), id_(stream_id) {}

  // Uniform draw in (0,1) at the given index.
  double uniform_at(std::uint64_t index) const {
    const std::uint64_t block = index >> 1;
    if (block != cached_block_) {
      const detail::PhiloxBlock b = detail::philox4x32_10(seed_, block, id_);
      cached_words_[0] = (static_cast<std::uint64_t>(b.x1) << 32) | b.x0;
      cached_words_[1] = (static_cast<std::uint64_t>(b.x3) << 32) | b.x2;
      cached_block_ = block;
    }
    const std::uint64_t w = cached_words_[index & 1];
    // 53-bit mantissa, offset by half an ulp so 0 and 1 are never returned.
    return static_cast<double>(w >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  double normal_at(std::uint64_t index) const {
    return normal_quantile(uniform_at(index));
  }

  double next_uniform() { return uniform_at(cursor_++); }
  double next_normal() { return normal_at(cursor_++); }

  // Child stream: deterministic function of this stream's id and the lane.
  RandomStream substream(std::uint64_t lane) const {
    return RandomStream(seed_, mix64(id_ ^ mix64(lane + 1)));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return id_; }
  std::uint64_t cursor() const { return cursor_; }
  void seek(std::uint64_t c) { cursor_ = c; }

 private:
  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t cursor_ = 0;
  // One-block cache: consecutive indices share a Philox evaluation.
  mutable std::uint64_t cached_block_ = ~0ull;
  mutable std::uint64_t cached_words_[2] = {0, 0};
};

}  // namespace levysd
