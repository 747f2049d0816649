#include "d2v/dataset_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace d2v {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_double(const std::string& text, const std::string& path, size_t line, size_t column) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::invalid_argument(path + " line " + std::to_string(line) + " column " +
                                    std::to_string(column) + ": non-numeric feature '" + text + "'");
    }
    return value;
}

int parse_label(const std::string& text, const std::string& path, size_t line) {
    char* end = nullptr;
    const long value = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || value < 0) {
        throw std::invalid_argument(path + " line " + std::to_string(line) +
                                    ": label must be a non-negative integer, got '" + text + "'");
    }
    return static_cast<int>(value);
}

} // namespace

FeatureTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");

    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 3 || header[0] != "domain" || header[1] != "label") {
        throw std::invalid_argument(path + " line 1: unknown header, expected "
                                    "'domain,label,f0,...'");
    }
    const size_t dim = header.size() - 2;
    for (size_t j = 0; j < dim; ++j) {
        if (header[2 + j] != "f" + std::to_string(j)) {
            throw std::invalid_argument(path + " line 1: unknown header column '" + header[2 + j] +
                                        "', expected 'f" + std::to_string(j) + "'");
        }
    }

    FeatureTable table;
    std::vector<double> values;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != dim + 2) {
            throw std::invalid_argument(path + " line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(dim + 2) + " fields, got " +
                                        std::to_string(fields.size()));
        }
        table.domain_ids.push_back(fields[0]);
        table.labels.push_back(parse_label(fields[1], path, line_no));
        for (size_t j = 0; j < dim; ++j) {
            values.push_back(parse_double(fields[2 + j], path, line_no, 3 + j));
        }
    }

    table.features.rows = table.domain_ids.size();
    table.features.cols = dim;
    table.features.data = std::move(values);
    return table;
}

void save_csv(const std::vector<DomainDataset>& datasets, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");

    size_t dim = 0;
    for (const auto& ds : datasets) {
        if (dim == 0) dim = ds.dim();
        if (ds.dim() != dim) {
            throw std::invalid_argument("save_csv: feature dimensions differ across datasets");
        }
        if (!ds.labels) {
            throw std::invalid_argument("save_csv: dataset '" + ds.domain_id + "' has no labels");
        }
    }

    out << "domain,label";
    for (size_t j = 0; j < dim; ++j) out << ",f" << j;
    out << "\n";

    char buf[64];
    for (const auto& ds : datasets) {
        for (size_t i = 0; i < ds.size(); ++i) {
            out << ds.domain_id << ',' << (*ds.labels)[i];
            for (size_t j = 0; j < dim; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
                out << ',' << buf;
            }
            out << "\n";
        }
    }
    if (!out) throw std::runtime_error("save_csv: write to '" + path + "' failed");
}

FeatureTable to_table(const std::vector<DomainDataset>& datasets) {
    FeatureTable table;
    size_t dim = datasets.empty() ? 0 : datasets.front().dim();
    size_t total = 0;
    for (const auto& ds : datasets) total += ds.size();
    table.features = Matrix(total, dim);
    size_t row = 0;
    for (const auto& ds : datasets) {
        if (ds.dim() != dim) throw std::invalid_argument("to_table: feature dimensions differ");
        if (!ds.labels) throw std::invalid_argument("to_table: dataset '" + ds.domain_id + "' has no labels");
        for (size_t i = 0; i < ds.size(); ++i, ++row) {
            table.domain_ids.push_back(ds.domain_id);
            table.labels.push_back((*ds.labels)[i]);
            for (size_t j = 0; j < dim; ++j) table.features(row, j) = ds.features(i, j);
        }
    }
    return table;
}

std::vector<DomainDataset> to_datasets(const FeatureTable& table) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<size_t>> rows_by_domain;
    for (size_t i = 0; i < table.size(); ++i) {
        auto [it, inserted] = rows_by_domain.try_emplace(table.domain_ids[i]);
        if (inserted) order.push_back(table.domain_ids[i]);
        it->second.push_back(i);
    }

    std::vector<DomainDataset> datasets;
    datasets.reserve(order.size());
    for (const auto& id : order) {
        const auto& rows = rows_by_domain[id];
        DomainDataset ds;
        ds.domain_id = id;
        ds.features = Matrix(rows.size(), table.dim());
        ds.labels = std::vector<int>(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            (*ds.labels)[i] = table.labels[rows[i]];
            for (size_t j = 0; j < table.dim(); ++j) ds.features(i, j) = table.features(rows[i], j);
        }
        datasets.push_back(std::move(ds));
    }
    return datasets;
}

std::vector<LodoSplit> lodo_splits(const FeatureTable& table) {
    const std::vector<DomainDataset> datasets = to_datasets(table);
    if (datasets.size() < 2) {
        throw std::invalid_argument("lodo_splits: need at least 2 distinct domains, got " +
                                    std::to_string(datasets.size()));
    }
    std::vector<LodoSplit> splits;
    splits.reserve(datasets.size());
    for (size_t t = 0; t < datasets.size(); ++t) {
        LodoSplit split;
        split.target = datasets[t];
        for (size_t s = 0; s < datasets.size(); ++s) {
            if (s != t) split.sources.push_back(datasets[s]);
        }
        splits.push_back(std::move(split));
    }
    return splits;
}

} // namespace d2v
