#pragma once

#include "d2v/matrix.hpp"
#include "d2v/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace d2v {

/// One domain: an n x d feature sample, optional labels, and the rotation
/// angle when the domain was generated synthetically.
struct DomainDataset {
    std::string domain_id;
    Matrix features;
    std::optional<std::vector<int>> labels;
    std::optional<double> theta;

    size_t size() const { return features.rows; }
    size_t dim() const { return features.cols; }
};

struct SynthSpec {
    size_t num_domains = 1;
    size_t examples_per_domain = 1;
    uint64_t seed = 0;
};

inline constexpr size_t kTestDomainCount = 44;
inline constexpr size_t kTestExamplesPerDomain = 1024;

/// Draws n points uniformly from [-1,1] x [0,1], labels them by the sign of
/// the first coordinate (non-negative -> 1), then rotates every point by
/// theta. Labels are assigned before rotation.
DomainDataset generate_domain(double theta, size_t n, Rng& rng, std::string domain_id = {});

/// num_domains datasets with independent theta ~ Uniform[0, pi], each driven
/// by a per-domain RNG derived from (seed, domain index), so domain k is
/// identical regardless of num_domains.
std::vector<DomainDataset> generate_suite(const SynthSpec& spec);

/// The fixed evaluation suite: 44 domains of 1024 points, drawn from a seed
/// namespace disjoint from training suites.
std::vector<DomainDataset> test_suite(uint64_t seed);

} // namespace d2v
