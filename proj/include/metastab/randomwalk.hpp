#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace metastab {

/// Symmetric simple random walk on Z: S_0 = 0, S_{n+1} - S_n = +-1 with
/// probability 1/2 each.
struct WalkPath {
    std::vector<std::int8_t> steps;
    std::vector<std::int64_t> positions;  ///< S_0 .. S_n
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// n steps drawn from Philox stream (seed, stream).
WalkPath walk(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// S_{floor(n t)} / sqrt(n) at each requested time.
std::vector<double> diffusive_rescale(const WalkPath& path, std::size_t n, std::span<const double> t_grid);

/// Rescaled values at `t_grid` for `walks` independent walks (streams 0..walks-1)
/// of n * max(t_grid) steps; row w holds walk w.
std::vector<std::vector<double>> sample_rescaled_walks(std::size_t n, std::span<const double> t_grid,
                                                       std::size_t walks, std::uint64_t seed,
                                                       unsigned threads = 1);

}  // namespace metastab
