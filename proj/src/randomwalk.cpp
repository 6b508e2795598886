#include "metastab/randomwalk.hpp"

#include <algorithm>
#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"

namespace metastab {

WalkPath walk(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) throw InvalidArgument("a walk needs at least one step");
    Philox4x32 rng(seed, stream);
    WalkPath path;
    path.seed = seed;
    path.stream = stream;
    path.steps.resize(n);
    path.positions.resize(n + 1);
    path.positions[0] = 0;
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 32 == 0) bits = rng();
        path.steps[i] = (bits & 1u) ? std::int8_t{1} : std::int8_t{-1};
        bits >>= 1;
        path.positions[i + 1] = path.positions[i] + path.steps[i];
    }
    return path;
}

std::vector<double> diffusive_rescale(const WalkPath& path, std::size_t n, std::span<const double> t_grid) {
    if (n == 0) throw InvalidArgument("scaling parameter n must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const std::size_t len = path.steps.size();
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t >= 0.0)) throw OutOfRange("rescaling time must be nonnegative");
        const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
        if (idx > len) throw OutOfRange("rescaling time beyond the end of the walk");
        out.push_back(static_cast<double>(path.positions[idx]) * scale);
    }
    return out;
}

std::vector<std::vector<double>> sample_rescaled_walks(std::size_t n, std::span<const double> t_grid,
                                                       std::size_t walks, std::uint64_t seed, unsigned threads) {
    if (t_grid.empty()) throw InvalidArgument("empty time grid");
    const double t_end = *std::max_element(t_grid.begin(), t_grid.end());
    const auto length = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t_end)));
    std::vector<std::vector<double>> out(walks);
    parallel_for(walks, threads, [&](std::size_t w) { out[w] = diffusive_rescale(walk(length, seed, w), n, t_grid); });
    return out;
}

}  // namespace metastab
