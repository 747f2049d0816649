#include "d2v/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace d2v {

DomainDataset generate_domain(double theta, size_t n, Rng& rng, std::string domain_id) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw std::invalid_argument("generate_domain: theta " + std::to_string(theta) +
                                    " outside [0, pi]");
    }
    if (n == 0) throw std::invalid_argument("generate_domain: n must be >= 1");

    DomainDataset ds;
    ds.domain_id = std::move(domain_id);
    ds.features = Matrix(n, 2);
    ds.labels = std::vector<int>(n, 0);
    ds.theta = theta;

    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    for (size_t i = 0; i < n; ++i) {
        const double x1 = rng.uniform(-1.0, 1.0);
        const double x2 = rng.uniform(0.0, 1.0);
        (*ds.labels)[i] = x1 >= 0.0 ? 1 : 0;
        ds.features(i, 0) = cos_t * x1 - sin_t * x2;
        ds.features(i, 1) = sin_t * x1 + cos_t * x2;
    }
    return ds;
}

namespace {

std::vector<DomainDataset> make_suite(uint64_t seed, uint64_t stream, const char* id_prefix,
                                      size_t num_domains, size_t examples_per_domain) {
    std::vector<DomainDataset> suite;
    suite.reserve(num_domains);
    for (size_t k = 0; k < num_domains; ++k) {
        Rng rng(derive_seed(seed, stream, k));
        const double theta = rng.uniform(0.0, std::numbers::pi);
        suite.push_back(generate_domain(theta, examples_per_domain, rng,
                                        std::string(id_prefix) + std::to_string(k)));
    }
    return suite;
}

} // namespace

std::vector<DomainDataset> generate_suite(const SynthSpec& spec) {
    if (spec.num_domains == 0 || spec.examples_per_domain == 0) {
        throw std::invalid_argument("generate_suite: counts must be >= 1");
    }
    return make_suite(spec.seed, streams::kTrainDomain, "train_", spec.num_domains,
                      spec.examples_per_domain);
}

std::vector<DomainDataset> test_suite(uint64_t seed) {
    return make_suite(seed, streams::kTestDomain, "test_", kTestDomainCount,
                      kTestExamplesPerDomain);
}

} // namespace d2v
