#include "d2v/similarity.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

using namespace d2v;

namespace {

DomainEmbedding emb(const std::string& id, std::vector<double> values) {
    return DomainEmbedding{id, std::move(values)};
}

} // namespace

TEST_CASE("identical embeddings have similarity one") {
    const auto sim = estimated_similarity({emb("p", {1.0, 2.0}), emb("q", {1.0, 2.0})}, 0.7);
    CHECK(sim.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sim.values(0, 0) == 1.0);
}

TEST_CASE("distance sigma maps to similarity 1/e") {
    const auto sim = estimated_similarity({emb("p", {0.0}), emb("q", {0.5})}, 0.5);
    CHECK(sim.values(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("estimated similarity matches a hand-computed 3x3 oracle") {
    const std::vector<DomainEmbedding> embeddings = {
        emb("a", {0.0, 0.0}), emb("b", {1.0, 0.0}), emb("c", {0.0, 2.0})};
    const double sigma = 1.5;
    const auto sim = estimated_similarity(embeddings, sigma);

    const double s_ab = std::exp(-1.0 / (sigma * sigma));        // ||a-b||^2 = 1
    const double s_ac = std::exp(-4.0 / (sigma * sigma));        // ||a-c||^2 = 4
    const double s_bc = std::exp(-5.0 / (sigma * sigma));        // ||b-c||^2 = 5
    CHECK(std::abs(sim.values(0, 1) - s_ab) < 1e-12);
    CHECK(std::abs(sim.values(0, 2) - s_ac) < 1e-12);
    CHECK(std::abs(sim.values(1, 2) - s_bc) < 1e-12);
    for (size_t p = 0; p < 3; ++p) {
        CHECK(sim.values(p, p) == 1.0);
        for (size_t q = 0; q < 3; ++q) CHECK(sim.values(p, q) == sim.values(q, p));
    }
}

TEST_CASE("estimated similarity validates sigma and dimensions") {
    CHECK_THROWS_AS(estimated_similarity({emb("a", {1.0})}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(estimated_similarity({emb("a", {1.0})}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(estimated_similarity({emb("a", {1.0}), emb("b", {1.0, 2.0})}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("known similarity handles the trivial angle cases") {
    const auto equal = known_similarity({"p", "q"}, {0.8, 0.8}, 1.0);
    CHECK(equal.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    const auto ends = known_similarity({"p", "q"}, {0.0, std::numbers::pi}, std::numbers::pi);
    CHECK(ends.values(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("known similarity matches a hand oracle on a 5-angle grid") {
    const std::vector<double> thetas = {0.0, 0.5, 1.0, 2.0, 3.0};
    const std::vector<std::string> ids = {"t0", "t1", "t2", "t3", "t4"};
    const double sigma = 0.9;
    const auto sim = known_similarity(ids, thetas, sigma);
    for (size_t p = 0; p < 5; ++p) {
        for (size_t q = 0; q < 5; ++q) {
            const double d = std::abs(thetas[p] - thetas[q]);
            CHECK(std::abs(sim.values(p, q) - std::exp(-d * d / (sigma * sigma))) < 1e-12);
        }
    }
}

TEST_CASE("random similarity of one domain is the 1x1 identity") {
    Rng rng(1);
    const auto sim = random_similarity(1, rng);
    CHECK(sim.values.rows == 1);
    CHECK(sim.values(0, 0) == 1.0);
}

TEST_CASE("random similarity is exactly symmetric with a unit diagonal") {
    Rng rng(2);
    const auto sim = random_similarity(10, rng);
    for (size_t p = 0; p < 10; ++p) {
        CHECK(sim.values(p, p) == 1.0);
        for (size_t q = 0; q < 10; ++q) {
            CHECK(sim.values(p, q) == sim.values(q, p));
            CHECK(sim.values(p, q) > 0.0);
            CHECK(sim.values(p, q) <= 1.0);
        }
    }
}

TEST_CASE("random similarity off-diagonals average to about one half") {
    Rng rng(3);
    const auto sim = random_similarity(100, rng);
    double sum = 0.0;
    size_t count = 0;
    for (size_t p = 0; p < 100; ++p) {
        for (size_t q = p + 1; q < 100; ++q) {
            sum += sim.values(p, q);
            ++count;
        }
    }
    CHECK(std::abs(sum / static_cast<double>(count) - 0.5) < 0.03);
}

TEST_CASE("compare of a matrix with itself is a perfect correlation") {
    Rng rng(4);
    const auto sim = random_similarity(6, rng);
    const Correlation corr = compare(sim, sim);
    CHECK(corr.pearson == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(corr.spearman == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compare rejects constant matrices instead of returning NaN") {
    SimilarityMatrix constant;
    constant.domain_ids = {"a", "b", "c"};
    constant.values = Matrix(3, 3, 0.5);
    for (size_t i = 0; i < 3; ++i) constant.values(i, i) = 1.0;
    constant.sigma = 1.0;

    Rng rng(5);
    const auto other = random_similarity(std::vector<std::string>{"a", "b", "c"}, rng);
    CHECK_THROWS_AS(compare(constant, other), std::invalid_argument);
}

TEST_CASE("compare rejects mismatched domain orderings") {
    Rng rng(6);
    const auto a = random_similarity(std::vector<std::string>{"x", "y", "z"}, rng);
    const auto b = random_similarity(std::vector<std::string>{"y", "x", "z"}, rng);
    CHECK_THROWS_AS(compare(a, b), std::invalid_argument);
}

TEST_CASE("known vs random similarity is essentially uncorrelated at m = 44") {
    Rng theta_rng(7);
    std::vector<double> thetas(44);
    std::vector<std::string> ids(44);
    for (size_t i = 0; i < 44; ++i) {
        thetas[i] = theta_rng.uniform(0.0, std::numbers::pi);
        ids[i] = "d" + std::to_string(i);
    }
    const auto known = known_similarity(ids, thetas, median_sigma_thetas(thetas));
    Rng rng(8);
    const auto random = random_similarity(ids, rng);
    const Correlation corr = compare(known, random);
    CHECK(std::abs(corr.pearson) < 0.3);
    CHECK(std::abs(corr.spearman) < 0.3);
}

TEST_CASE("estimated similarity is invariant under orthogonal transforms") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<DomainEmbedding> embeddings;
        for (size_t i = 0; i < 5; ++i) {
            embeddings.push_back(emb("e" + std::to_string(i),
                                     {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                                      rng.uniform(-2.0, 2.0)}));
        }
        // random rotation: compose Givens rotations in the (0,1), (0,2), (1,2) planes
        std::vector<DomainEmbedding> rotated = embeddings;
        const size_t planes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& plane : planes) {
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double c = std::cos(angle), s = std::sin(angle);
            for (auto& e : rotated) {
                const double u = e.values[plane[0]];
                const double v = e.values[plane[1]];
                e.values[plane[0]] = c * u - s * v;
                e.values[plane[1]] = s * u + c * v;
            }
        }
        const auto sim_a = estimated_similarity(embeddings, 1.3);
        const auto sim_b = estimated_similarity(rotated, 1.3);
        for (size_t i = 0; i < sim_a.values.data.size(); ++i) {
            CHECK(std::abs(sim_a.values.data[i] - sim_b.values.data[i]) < 1e-10);
        }
    }
}

TEST_CASE("similarity decreases strictly with distance") {
    std::vector<DomainEmbedding> embeddings = {emb("base", {0.0})};
    for (int i = 1; i <= 6; ++i) {
        embeddings.push_back(emb("e" + std::to_string(i), {0.3 * i}));
    }
    const auto sim = estimated_similarity(embeddings, 1.0);
    for (size_t q = 2; q < embeddings.size(); ++q) {
        CHECK(sim.values(0, q) < sim.values(0, q - 1));
    }
}

TEST_CASE("relabeling domains commutes with similarity computation") {
    Rng rng(10);
    std::vector<DomainEmbedding> embeddings;
    for (size_t i = 0; i < 4; ++i) {
        embeddings.push_back(emb("e" + std::to_string(i), {rng.uniform(), rng.uniform()}));
    }
    const auto sim = estimated_similarity(embeddings, 0.8);

    const std::vector<size_t> perm = {2, 0, 3, 1};
    std::vector<DomainEmbedding> permuted;
    for (size_t i : perm) permuted.push_back(embeddings[i]);
    const auto sim_perm = estimated_similarity(permuted, 0.8);

    for (size_t p = 0; p < 4; ++p) {
        CHECK(sim_perm.domain_ids[p] == sim.domain_ids[perm[p]]);
        for (size_t q = 0; q < 4; ++q) {
            CHECK(sim_perm.values(p, q) == sim.values(perm[p], perm[q]));
        }
    }
}

TEST_CASE("median heuristic returns the median pairwise distance") {
    // squared distances: 1, 4, 9 -> median 4 -> sigma 2
    const std::vector<DomainEmbedding> embeddings = {emb("a", {0.0}), emb("b", {1.0}),
                                                     emb("c", {3.0})};
    CHECK(median_sigma(embeddings) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("median heuristic rejects coincident embeddings") {
    const std::vector<DomainEmbedding> embeddings = {emb("a", {1.0}), emb("b", {1.0})};
    CHECK_THROWS_AS(median_sigma(embeddings), std::invalid_argument);
}

TEST_CASE("pgm heatmap bytes follow the P5 format with half-up rounding") {
    SimilarityMatrix sim;
    sim.domain_ids = {"a", "b"};
    sim.values = Matrix(2, 2, 0.5); // 127.5 -> 128
    sim.values(0, 0) = sim.values(1, 1) = 1.0;
    sim.sigma = 1.0;

    const std::string path = (std::filesystem::temp_directory_path() / "d2v_sim.pgm").string();
    write_similarity_pgm(sim, path);
    std::ifstream in(path, std::ios::binary);
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::remove(path.c_str());

    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(contents.size() == header.size() + 4);
    CHECK(contents.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(contents[header.size() + 0]) == 255);
    CHECK(static_cast<unsigned char>(contents[header.size() + 1]) == 128);
    CHECK(static_cast<unsigned char>(contents[header.size() + 2]) == 128);
    CHECK(static_cast<unsigned char>(contents[header.size() + 3]) == 255);
}

TEST_CASE("similarity csv carries domain ids in header and row labels") {
    SimilarityMatrix sim;
    sim.domain_ids = {"p", "q"};
    sim.values = Matrix(2, 2, 0.25);
    sim.values(0, 0) = sim.values(1, 1) = 1.0;
    sim.sigma = 1.0;

    const std::string path = (std::filesystem::temp_directory_path() / "d2v_sim.csv").string();
    write_similarity_csv(sim, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "domain,p,q");
    std::getline(in, line);
    CHECK(line == "p,1,0.25");
    in.close();
    std::remove(path.c_str());
}
