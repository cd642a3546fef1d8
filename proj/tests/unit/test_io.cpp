#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "toxconv/errors.hpp"
#include "toxconv/io.hpp"

using namespace toxconv;
namespace fs = std::filesystem;

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(2.0), "2");
    EXPECT_EQ(io::format_number(std::nan("")), "");
    EXPECT_EQ(io::format_number(INFINITY), "");
    double v = 1.0 / 3.0;
    EXPECT_EQ(std::stod(io::format_number(v)), v);
}

TEST(SeriesCsv, HeaderAndRows) {
    analysis::BucketSeries s{"demo", {{"1", 1.0, 0.5, {0.25, 0.75}, 4}}};
    std::ostringstream out;
    io::write_series_csv(out, std::span(&s, 1));
    EXPECT_EQ(out.str(), "series,bucket,x,y,ci_lo,ci_hi,n\ndemo,1,1,0.5,0.25,0.75,4\n");
}

TEST(FeatureMatrix, RoundTripWithMissing) {
    std::vector<std::string> names{"a", "b"};
    std::vector<std::vector<double>> rows{{1.5, std::nan("")}, {-2.0, 1e-300}};
    std::stringstream buf;
    io::write_feature_matrix(buf, names, rows);
    auto t = io::read_feature_matrix(buf);
    EXPECT_EQ(t.names, names);
    ASSERT_EQ(t.X.rows, 2u);
    EXPECT_EQ(t.X.at(0, 0), 1.5);
    EXPECT_TRUE(std::isnan(t.X.at(0, 1)));
    EXPECT_EQ(t.X.at(1, 1), 1e-300);
}

TEST(FeatureMatrix, RejectsBadRows) {
    std::istringstream ragged("a,b\n1\n");
    EXPECT_THROW(io::read_feature_matrix(ragged), SchemaViolation);
    std::istringstream text("a\nhello\n");
    EXPECT_THROW(io::read_feature_matrix(text), SchemaViolation);
}

TEST(Dataset, SaveLoadRoundTrip) {
    labeling::LabeledDataset ds;
    ds.catalog = "prefix k=1 [content_toxicity]";
    ds.seed = 5;
    for (int i = 0; i < 4; ++i) {
        labeling::Instance inst;
        inst.features.add("x", static_cast<double>(i));
        inst.features.add("y", i == 2 ? features::kMissing : 0.5 * i);
        inst.label = i % 2;
        inst.group = "g" + std::to_string(i);
        ds.instances.push_back(std::move(inst));
    }
    auto dir = fs::temp_directory_path() / "toxconv_io_dataset";
    fs::remove_all(dir);
    io::save_dataset(ds, dir);
    auto back = io::load_dataset(dir);
    EXPECT_EQ(back.names, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(back.y, (std::vector<int>{0, 1, 0, 1}));
    EXPECT_EQ(back.groups[3], "g3");
    EXPECT_EQ(back.seed, 5u);
    EXPECT_TRUE(std::isnan(back.X.at(2, 1)));
    EXPECT_EQ(back.X.at(3, 1), 1.5);

    ds.instances[1].features = {};
    ds.instances[1].features.add("z", 1.0);
    EXPECT_THROW(io::save_dataset(ds, dir), CatalogMismatch);
    fs::remove_all(dir);
}

TEST(Files, WordListAndErrors) {
    auto path = fs::temp_directory_path() / "toxconv_io_words.txt";
    io::write_file(path, "# accounts\n  alice \n\nbob\n");
    EXPECT_EQ(io::read_word_list(path), (std::set<std::string>{"alice", "bob"}));
    fs::remove(path);
    EXPECT_THROW(io::read_file(path), UnreadableInput);
}
