#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "toxconv/analysis.hpp"
#include "toxconv/labeling.hpp"
#include "toxconv/learner.hpp"

namespace toxconv::io {

// Shortest round-trip decimal; empty for NaN and infinities.
std::string format_number(double v);

// Header `series,bucket,x,y,ci_lo,ci_hi,n`, one row per bucket.
void write_series_csv(std::ostream& out, std::span<const analysis::BucketSeries> series);

// Header of feature names, then one row per instance; missing is an empty field.
void write_feature_matrix(std::ostream& out, const std::vector<std::string>& names,
                          std::span<const std::vector<double>> rows);

struct FeatureTable {
    std::vector<std::string> names;
    learner::Matrix X;
};
// Throws SchemaViolation on a ragged row or a non-numeric field.
FeatureTable read_feature_matrix(std::istream& in);

struct Dataset {
    std::string task;
    std::uint64_t seed = 0;
    std::vector<std::string> names;
    learner::Matrix X;
    std::vector<int> y;
    std::vector<std::string> groups;
};

// features.csv, labels.csv (group,label) and manifest.json under `dir`.
// Throws CatalogMismatch when instances disagree on feature names.
void save_dataset(const labeling::LabeledDataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);
std::string manifest_json(const labeling::LabeledDataset& ds);

// Non-empty lines, surrounding whitespace trimmed, '#' lines skipped.
std::set<std::string> read_word_list(const std::filesystem::path& path);

// Whole file; throws UnreadableInput.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace toxconv::io
