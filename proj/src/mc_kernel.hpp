#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace tailscale::detail {

using Rng = std::mt19937_64;
using Draw = std::function<double(Rng&)>;

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b);
};

Rng substream(std::uint64_t seed, unsigned index);

std::uint64_t substream_samples(std::uint64_t total, unsigned workers, unsigned index);

Moments run_substreams_serial(const Draw& draw, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers);
Moments run_substreams_parallel(const Draw& draw, std::uint64_t samples, std::uint64_t seed,
                                unsigned workers);

}  // namespace tailscale::detail
