#pragma once

#include "d2v/synth.hpp"

#include <string>
#include <vector>

namespace d2v {

/// Row-oriented view of a multi-domain feature dataset, as loaded from CSV.
/// Row order is preserved exactly.
struct FeatureTable {
    std::vector<std::string> domain_ids; // one per row
    std::vector<int> labels;             // one per row
    Matrix features;                     // rows x d

    size_t size() const { return features.rows; }
    size_t dim() const { return features.cols; }
};

/// Parses the `domain,label,f0,...,f{d-1}` schema. Feature dimension is
/// inferred from the header; malformed rows report their 1-based line number.
FeatureTable load_csv(const std::string& path);

/// Writes datasets to the same schema, one row per point, `%.17g` floats so
/// a load round-trips exactly.
void save_csv(const std::vector<DomainDataset>& datasets, const std::string& path);

FeatureTable to_table(const std::vector<DomainDataset>& datasets);

/// Groups rows by domain_id; domains keep first-appearance order and rows
/// keep file order within each domain.
std::vector<DomainDataset> to_datasets(const FeatureTable& table);

/// Leave-one-domain-out split: train on every other domain, evaluate on the
/// held-out target. Target labels are retained for scoring only.
struct LodoSplit {
    std::vector<DomainDataset> sources;
    DomainDataset target;
};

/// One split per distinct domain_id; requires >= 2 domains.
std::vector<LodoSplit> lodo_splits(const FeatureTable& table);

} // namespace d2v
