#pragma once

#include "d2v/model.hpp"

#include <string>
#include <vector>

namespace d2v {

/// Symmetric domain-to-domain similarity with unit diagonal, entries in (0,1].
struct SimilarityMatrix {
    std::vector<std::string> domain_ids;
    Matrix values; // m x m
    double sigma = 0.0;
};

/// S[p][q] = exp(-||d_p - d_q||^2 / sigma^2)
SimilarityMatrix estimated_similarity(const std::vector<DomainEmbedding>& embeddings, double sigma);

/// S[p][q] = exp(-|theta_p - theta_q|^2 / sigma^2)
SimilarityMatrix known_similarity(const std::vector<std::string>& domain_ids,
                                  const std::vector<double>& thetas, double sigma);

/// Unit diagonal, off-diagonals i.i.d. Uniform(0,1) mirrored across the
/// diagonal.
SimilarityMatrix random_similarity(const std::vector<std::string>& domain_ids, Rng& rng);
SimilarityMatrix random_similarity(size_t m, Rng& rng);

/// Median heuristic: sigma^2 = median of squared pairwise distances.
double median_sigma(const std::vector<DomainEmbedding>& embeddings);
double median_sigma_thetas(const std::vector<double>& thetas);

struct Correlation {
    double pearson = 0.0;
    double spearman = 0.0;
};

/// Pearson and Spearman correlation over the strict upper triangles of two
/// matrices with identical domain ordering. Zero variance on either side is
/// an error, never NaN.
Correlation compare(const SimilarityMatrix& a, const SimilarityMatrix& b);

/// CSV: header row of domain ids, then one row per domain.
void write_similarity_csv(const SimilarityMatrix& sim, const std::string& path);

/// Binary 8-bit PGM (P5) heatmap; pixel = 255 * S rounded half-up.
void write_similarity_pgm(const SimilarityMatrix& sim, const std::string& path);

} // namespace d2v
