#include "kcover/sampler.hpp"

#include <stdexcept>

namespace kcover {

namespace {

// Substream tags for the X and Y streams; any fixed distinct values work.
constexpr std::uint64_t kStreamX = 0x584f5f535452454dULL;
constexpr std::uint64_t kStreamY = 0x594f5f535452454dULL;

void fill_uniform(const Region& region, std::size_t count, std::uint64_t stream_seed,
                  std::vector<double>& out) {
    const int d = region.dim();
    out.resize(count * static_cast<std::size_t>(d));
    Rng rng(stream_seed);
    for (std::size_t i = 0; i < count; ++i)
        region.sample_uniform(rng, {out.data() + i * static_cast<std::size_t>(d),
                                    static_cast<std::size_t>(d)});
}

} // namespace

ProcessPair sample_binomial(const DomainPair& pair, std::uint64_t n, std::uint64_t m,
                            std::uint64_t seed) {
    if (n == 0 || m == 0)
        throw std::invalid_argument("sample_binomial: n and m must be >= 1");
    ProcessPair out;
    out.dim = pair.A.dim();
    out.mode = SampleMode::binomial;
    out.seed = seed;
    fill_uniform(pair.A, n, mix_seed(seed, kStreamX), out.xs);
    fill_uniform(pair.B, m, mix_seed(seed, kStreamY), out.ys);
    return out;
}

ProcessPair sample_poisson(const DomainPair& pair, double t, double u, std::uint64_t seed) {
    if (!(t > 0.0) || !(u > 0.0))
        throw std::invalid_argument("sample_poisson: intensities must be positive");
    ProcessPair out;
    out.dim = pair.A.dim();
    out.mode = SampleMode::poisson;
    out.seed = seed;
    // counts first, from their own substreams, then the point coordinates
    Rng count_rng_x(mix_seed(seed, kStreamX ^ 1));
    Rng count_rng_y(mix_seed(seed, kStreamY ^ 1));
    const std::uint64_t n = count_rng_x.poisson(t);
    const std::uint64_t m = count_rng_y.poisson(u);
    fill_uniform(pair.A, n, mix_seed(seed, kStreamX), out.xs);
    fill_uniform(pair.B, m, mix_seed(seed, kStreamY), out.ys);
    return out;
}

} // namespace kcover
