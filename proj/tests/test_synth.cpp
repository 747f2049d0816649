#include "d2v/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace d2v;

TEST_CASE("generate_domain with theta 0 keeps points in the box and labels by x1") {
    Rng rng(1);
    const DomainDataset ds = generate_domain(0.0, 200, rng);
    REQUIRE(ds.size() == 200);
    REQUIRE(ds.labels.has_value());
    CHECK(ds.theta == doctest::Approx(0.0));
    for (size_t i = 0; i < ds.size(); ++i) {
        const double x1 = ds.features(i, 0);
        const double x2 = ds.features(i, 1);
        CHECK(x1 >= -1.0);
        CHECK(x1 <= 1.0);
        CHECK(x2 >= 0.0);
        CHECK(x2 <= 1.0);
        CHECK((*ds.labels)[i] == (x1 >= 0.0 ? 1 : 0));
    }
}

TEST_CASE("rotation by pi negates both coordinates and keeps pre-rotation labels") {
    // with theta = pi the point that was (x1, x2) lands on (-x1, -x2)
    Rng rng_a(77);
    Rng rng_b(77);
    const DomainDataset flat = generate_domain(0.0, 50, rng_a);
    const DomainDataset rotated = generate_domain(std::numbers::pi, 50, rng_b);
    for (size_t i = 0; i < 50; ++i) {
        CHECK(rotated.features(i, 0) == doctest::Approx(-flat.features(i, 0)).epsilon(1e-12));
        CHECK(rotated.features(i, 1) == doctest::Approx(-flat.features(i, 1)).epsilon(1e-12));
        CHECK((*rotated.labels)[i] == (*flat.labels)[i]);
    }
}

TEST_CASE("inverse rotation maps points back into the box with matching labels") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = rng.uniform(0.0, std::numbers::pi);
        Rng domain_rng(trial + 100);
        const DomainDataset ds = generate_domain(theta, 64, domain_rng);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (size_t i = 0; i < ds.size(); ++i) {
            const double x1 = c * ds.features(i, 0) + s * ds.features(i, 1);
            const double x2 = -s * ds.features(i, 0) + c * ds.features(i, 1);
            CHECK(x1 >= -1.0 - 1e-9);
            CHECK(x1 <= 1.0 + 1e-9);
            CHECK(x2 >= -1e-9);
            CHECK(x2 <= 1.0 + 1e-9);
            CHECK((*ds.labels)[i] == (x1 >= 0.0 ? 1 : 0));
        }
    }
}

TEST_CASE("generate_domain validates its inputs") {
    Rng rng(2);
    CHECK_THROWS_AS(generate_domain(-0.5, 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_domain(4.0, 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_domain(1.0, 0, rng), std::invalid_argument);
}

TEST_CASE("rotation preserves pairwise distances") {
    Rng rng_a(31);
    Rng rng_b(31);
    const DomainDataset flat = generate_domain(0.0, 40, rng_a);
    const DomainDataset rotated = generate_domain(2.1, 40, rng_b);
    for (size_t i = 0; i < 40; ++i) {
        for (size_t j = i + 1; j < 40; ++j) {
            const double d_flat = std::hypot(flat.features(i, 0) - flat.features(j, 0),
                                             flat.features(i, 1) - flat.features(j, 1));
            const double d_rot = std::hypot(rotated.features(i, 0) - rotated.features(j, 0),
                                            rotated.features(i, 1) - rotated.features(j, 1));
            CHECK(std::abs(d_flat - d_rot) < 1e-9);
        }
    }
}

TEST_CASE("equal theta and equal stream give identical domains") {
    Rng rng_a(90);
    Rng rng_b(90);
    const DomainDataset a = generate_domain(1.3, 32, rng_a);
    const DomainDataset b = generate_domain(1.3, 32, rng_b);
    CHECK(a.features.data == b.features.data);
    CHECK(*a.labels == *b.labels);
}

TEST_CASE("generate_suite is deterministic given the seed") {
    const SynthSpec spec{6, 16, 424242};
    const auto a = generate_suite(spec);
    const auto b = generate_suite(spec);
    REQUIRE(a.size() == 6);
    for (size_t k = 0; k < 6; ++k) {
        CHECK(a[k].features.data == b[k].features.data);
        CHECK(*a[k].labels == *b[k].labels);
        CHECK(*a[k].theta == *b[k].theta);
    }
}

TEST_CASE("a smaller suite is a prefix of a larger one under the same seed") {
    const auto small = generate_suite(SynthSpec{8, 12, 99});
    const auto large = generate_suite(SynthSpec{16, 12, 99});
    for (size_t k = 0; k < 8; ++k) {
        CHECK(small[k].features.data == large[k].features.data);
        CHECK(*small[k].theta == *large[k].theta);
    }
}

TEST_CASE("theta draws average to pi/2 over many domains") {
    const auto suite = generate_suite(SynthSpec{10000, 1, 7});
    double mean = 0.0;
    for (const auto& ds : suite) mean += *ds.theta;
    mean /= 10000.0;
    // standard error of Uniform[0, pi]: (pi / sqrt(12)) / 100
    const double three_se = 3.0 * std::numbers::pi / std::sqrt(12.0) / 100.0;
    CHECK(std::abs(mean - std::numbers::pi / 2.0) < three_se);
}

TEST_CASE("test_suite has 44 domains of 1024 points") {
    const auto tests = test_suite(123);
    REQUIRE(tests.size() == 44);
    for (const auto& ds : tests) {
        CHECK(ds.size() == 1024);
        CHECK(ds.dim() == 2);
        CHECK(ds.labels.has_value());
        CHECK(ds.theta.has_value());
    }
}

TEST_CASE("test suite thetas differ from training thetas under the same seed") {
    const auto train = generate_suite(SynthSpec{44, 1, 2024});
    const auto tests = test_suite(2024);
    for (size_t k = 0; k < 44; ++k) {
        CHECK(*train[k].theta != *tests[k].theta);
    }
}

TEST_CASE("test domains are roughly label balanced") {
    const auto tests = test_suite(0);
    for (const auto& ds : tests) {
        size_t positives = 0;
        for (int label : *ds.labels) positives += label;
        const double fraction = static_cast<double>(positives) / static_cast<double>(ds.size());
        CHECK(fraction > 0.45);
        CHECK(fraction < 0.55);
    }
}
