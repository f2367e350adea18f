#include "mc_kernel.hpp"

namespace tailscale::detail {

Moments Moments::merge(const Moments& a, const Moments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / n;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
  return out;
}

Rng substream(std::uint64_t seed, unsigned index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x7a11u};
  return Rng(seq);
}

std::uint64_t substream_samples(std::uint64_t total, unsigned workers, unsigned index) {
  return total / workers + (index < total % workers ? 1 : 0);
}

namespace {

Moments run_one(const Draw& draw, std::uint64_t samples, std::uint64_t seed, unsigned workers,
                unsigned w) {
  Rng rng = substream(seed, w);
  Moments m;
  const std::uint64_t count = substream_samples(samples, workers, w);
  for (std::uint64_t i = 0; i < count; ++i) m.add(draw(rng));
  return m;
}

Moments reduce(const std::vector<Moments>& parts) {
  Moments total;
  for (const auto& p : parts) total = Moments::merge(total, p);
  return total;
}

}  // namespace

Moments run_substreams_serial(const Draw& draw, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers) {
  std::vector<Moments> parts(workers);
  for (unsigned w = 0; w < workers; ++w) parts[w] = run_one(draw, samples, seed, workers, w);
  return reduce(parts);
}

Moments run_substreams_parallel(const Draw& draw, std::uint64_t samples, std::uint64_t seed,
                                unsigned workers) {
  std::vector<Moments> parts(workers);
  const int nw = static_cast<int>(workers);
#pragma omp parallel for schedule(static)
  for (int w = 0; w < nw; ++w)
    parts[w] = run_one(draw, samples, seed, workers, static_cast<unsigned>(w));
  return reduce(parts);
}

}  // namespace tailscale::detail
