#include "d2v/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace d2v {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

SimilarityMatrix from_squared_distances(std::vector<std::string> ids, const Matrix& sq_dist,
                                        double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("similarity: sigma must be > 0");
    SimilarityMatrix sim;
    sim.domain_ids = std::move(ids);
    sim.sigma = sigma;
    const size_t m = sim.domain_ids.size();
    sim.values = Matrix(m, m);
    const double inv_sigma_sq = 1.0 / (sigma * sigma);
    for (size_t p = 0; p < m; ++p) {
        for (size_t q = 0; q < m; ++q) {
            sim.values(p, q) = std::exp(-sq_dist(p, q) * inv_sigma_sq);
        }
    }
    return sim;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: no values");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_sigma_from_sq(const std::vector<double>& sq_dists) {
    const double sigma_sq = median(sq_dists);
    if (!(sigma_sq > 0.0)) {
        throw std::invalid_argument("median heuristic: median squared distance is zero "
                                    "(degenerate embeddings); pass sigma explicitly");
    }
    return std::sqrt(sigma_sq);
}

// average ranks, ties averaged
std::vector<double> rank_transform(const std::vector<double>& values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg_rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw std::invalid_argument("compare: zero variance over off-diagonal entries, "
                                    "correlation undefined");
    }
    return cov / std::sqrt(var_x * var_y);
}

std::vector<double> upper_triangle(const Matrix& m) {
    std::vector<double> values;
    values.reserve(m.rows * (m.rows - 1) / 2);
    for (size_t p = 0; p < m.rows; ++p) {
        for (size_t q = p + 1; q < m.cols; ++q) values.push_back(m(p, q));
    }
    return values;
}

} // namespace

SimilarityMatrix estimated_similarity(const std::vector<DomainEmbedding>& embeddings, double sigma) {
    if (embeddings.empty()) throw std::invalid_argument("estimated_similarity: no embeddings");
    const size_t dim = embeddings.front().values.size();
    std::vector<std::string> ids;
    ids.reserve(embeddings.size());
    for (const auto& e : embeddings) {
        if (e.values.size() != dim) {
            throw std::invalid_argument("estimated_similarity: embedding dimensions differ (" +
                                        std::to_string(dim) + " vs " + std::to_string(e.values.size()) +
                                        " for '" + e.domain_id + "')");
        }
        ids.push_back(e.domain_id);
    }
    const size_t m = embeddings.size();
    Matrix sq(m, m);
    for (size_t p = 0; p < m; ++p) {
        for (size_t q = p + 1; q < m; ++q) {
            const double d = squared_distance(embeddings[p].values, embeddings[q].values);
            sq(p, q) = d;
            sq(q, p) = d;
        }
    }
    return from_squared_distances(std::move(ids), sq, sigma);
}

SimilarityMatrix known_similarity(const std::vector<std::string>& domain_ids,
                                  const std::vector<double>& thetas, double sigma) {
    if (thetas.empty()) throw std::invalid_argument("known_similarity: no thetas");
    if (domain_ids.size() != thetas.size()) {
        throw std::invalid_argument("known_similarity: " + std::to_string(domain_ids.size()) +
                                    " ids for " + std::to_string(thetas.size()) + " thetas");
    }
    const size_t m = thetas.size();
    Matrix sq(m, m);
    for (size_t p = 0; p < m; ++p) {
        for (size_t q = p + 1; q < m; ++q) {
            const double d = thetas[p] - thetas[q];
            sq(p, q) = d * d;
            sq(q, p) = d * d;
        }
    }
    return from_squared_distances(domain_ids, sq, sigma);
}

SimilarityMatrix random_similarity(const std::vector<std::string>& domain_ids, Rng& rng) {
    if (domain_ids.empty()) throw std::invalid_argument("random_similarity: m must be >= 1");
    SimilarityMatrix sim;
    sim.domain_ids = domain_ids;
    sim.sigma = 1.0;
    const size_t m = domain_ids.size();
    sim.values = Matrix(m, m);
    for (size_t p = 0; p < m; ++p) {
        sim.values(p, p) = 1.0;
        for (size_t q = p + 1; q < m; ++q) {
            const double u = rng.uniform_open();
            sim.values(p, q) = u;
            sim.values(q, p) = u;
        }
    }
    return sim;
}

SimilarityMatrix random_similarity(size_t m, Rng& rng) {
    std::vector<std::string> ids;
    ids.reserve(m);
    for (size_t i = 0; i < m; ++i) ids.push_back(std::to_string(i));
    return random_similarity(ids, rng);
}

double median_sigma(const std::vector<DomainEmbedding>& embeddings) {
    if (embeddings.size() < 2) {
        throw std::invalid_argument("median_sigma: need at least 2 embeddings");
    }
    std::vector<double> sq;
    for (size_t p = 0; p < embeddings.size(); ++p) {
        for (size_t q = p + 1; q < embeddings.size(); ++q) {
            sq.push_back(squared_distance(embeddings[p].values, embeddings[q].values));
        }
    }
    return median_sigma_from_sq(sq);
}

double median_sigma_thetas(const std::vector<double>& thetas) {
    if (thetas.size() < 2) throw std::invalid_argument("median_sigma_thetas: need at least 2 thetas");
    std::vector<double> sq;
    for (size_t p = 0; p < thetas.size(); ++p) {
        for (size_t q = p + 1; q < thetas.size(); ++q) {
            const double d = thetas[p] - thetas[q];
            sq.push_back(d * d);
        }
    }
    return median_sigma_from_sq(sq);
}

Correlation compare(const SimilarityMatrix& a, const SimilarityMatrix& b) {
    if (a.domain_ids != b.domain_ids) {
        throw std::invalid_argument("compare: domain orderings differ");
    }
    if (a.domain_ids.size() < 3) {
        throw std::invalid_argument("compare: need at least 3 domains for a meaningful correlation");
    }
    const std::vector<double> xs = upper_triangle(a.values);
    const std::vector<double> ys = upper_triangle(b.values);
    Correlation corr;
    corr.pearson = pearson(xs, ys);
    corr.spearman = pearson(rank_transform(xs), rank_transform(ys));
    return corr;
}

void write_similarity_csv(const SimilarityMatrix& sim, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_similarity_csv: cannot open '" + path + "'");
    out << "domain";
    for (const auto& id : sim.domain_ids) out << ',' << id;
    out << "\n";
    char buf[64];
    for (size_t p = 0; p < sim.values.rows; ++p) {
        out << sim.domain_ids[p];
        for (size_t q = 0; q < sim.values.cols; ++q) {
            std::snprintf(buf, sizeof(buf), "%.17g", sim.values(p, q));
            out << ',' << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_similarity_csv: write failed for '" + path + "'");
}

void write_similarity_pgm(const SimilarityMatrix& sim, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_similarity_pgm: cannot open '" + path + "'");
    const size_t m = sim.values.rows;
    out << "P5\n" << m << " " << m << "\n255\n";
    std::vector<unsigned char> pixels(m * m);
    for (size_t i = 0; i < m * m; ++i) {
        const double scaled = std::floor(255.0 * sim.values.data[i] + 0.5); // round half-up
        pixels[i] = static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
    }
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!out) throw std::runtime_error("write_similarity_pgm: write failed for '" + path + "'");
}

} // namespace d2v
