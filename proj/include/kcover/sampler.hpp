#pragma once

#include <cstdint>
#include <vector>

#include "kcover/geometry.hpp"

namespace kcover {

enum class SampleMode { binomial, poisson };

// One realization of the two point processes. Coordinates are stored flat
// with stride dim (point j of xs occupies xs[j*dim .. j*dim+dim)).
struct ProcessPair {
    std::vector<double> xs; // X-sample, in A
    std::vector<double> ys; // Y-sample, in B
    int dim = 2;
    SampleMode mode = SampleMode::binomial;
    std::uint64_t seed = 0;

    std::size_t x_count() const { return xs.size() / static_cast<std::size_t>(dim); }
    std::size_t y_count() const { return ys.size() / static_cast<std::size_t>(dim); }
};

// n i.i.d. uniform points in A and m in B, from independent substreams of
// `seed`. Identical seed gives bitwise-identical output.
ProcessPair sample_binomial(const DomainPair& pair, std::uint64_t n, std::uint64_t m,
                            std::uint64_t seed);

// Poisson counts N ~ Po(t), M ~ Po(u) drawn first, then that many uniform
// points. M = 0 (empty Y-sample) is allowed.
ProcessPair sample_poisson(const DomainPair& pair, double t, double u, std::uint64_t seed);

} // namespace kcover
