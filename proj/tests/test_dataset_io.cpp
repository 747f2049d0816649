#include "d2v/dataset_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

using namespace d2v;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("load_csv parses a 2-row file with 2 features") {
    const TempFile file("d2v_two_rows.csv",
                        "domain,label,f0,f1\n"
                        "a,0,0.5,-0.25\n"
                        "b,1,1.5,2.5\n");
    const FeatureTable table = load_csv(file.path);
    REQUIRE(table.size() == 2);
    REQUIRE(table.dim() == 2);
    CHECK(table.domain_ids[0] == "a");
    CHECK(table.domain_ids[1] == "b");
    CHECK(table.labels[0] == 0);
    CHECK(table.labels[1] == 1);
    CHECK(table.features(0, 0) == 0.5);
    CHECK(table.features(1, 1) == 2.5);
}

TEST_CASE("load_csv reports the line of a ragged row") {
    const TempFile file("d2v_ragged.csv",
                        "domain,label,f0,f1\n"
                        "a,0,0.5,0.5\n"
                        "a,1,0.5\n");
    CHECK_THROWS_WITH_AS(load_csv(file.path), doctest::Contains("line 3"), std::invalid_argument);
}

TEST_CASE("load_csv reports line and column of a non-numeric feature") {
    const TempFile file("d2v_nonnumeric.csv",
                        "domain,label,f0,f1\n"
                        "a,0,0.5,oops\n");
    try {
        load_csv(file.path);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("column 4") != std::string::npos);
    }
}

TEST_CASE("load_csv rejects unknown headers") {
    const TempFile file("d2v_badheader.csv", "domain,target,f0\na,0,1.0\n");
    CHECK_THROWS_WITH_AS(load_csv(file.path), doctest::Contains("header"), std::invalid_argument);

    const TempFile file2("d2v_badheader2.csv", "domain,label,x0\na,0,1.0\n");
    CHECK_THROWS_AS(load_csv(file2.path), std::invalid_argument);
}

TEST_CASE("load_csv rejects a missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/never.csv"), std::invalid_argument);
}

TEST_CASE("save then load round-trips a synthetic suite exactly") {
    const auto suite = generate_suite(SynthSpec{4, 25, 11});
    const std::string path = (std::filesystem::temp_directory_path() / "d2v_roundtrip.csv").string();
    save_csv(suite, path);
    const FeatureTable table = load_csv(path);
    std::remove(path.c_str());

    const auto loaded = to_datasets(table);
    REQUIRE(loaded.size() == suite.size());
    for (size_t k = 0; k < suite.size(); ++k) {
        CHECK(loaded[k].domain_id == suite[k].domain_id);
        REQUIRE(loaded[k].size() == suite[k].size());
        CHECK(*loaded[k].labels == *suite[k].labels);
        for (size_t i = 0; i < suite[k].size(); ++i) {
            for (size_t j = 0; j < 2; ++j) {
                CHECK(std::abs(loaded[k].features(i, j) - suite[k].features(i, j)) < 1e-12);
            }
        }
    }
}

TEST_CASE("to_datasets preserves first-appearance order and row order") {
    const TempFile file("d2v_order.csv",
                        "domain,label,f0\n"
                        "z,0,1\n"
                        "a,1,2\n"
                        "z,0,3\n");
    const auto datasets = to_datasets(load_csv(file.path));
    REQUIRE(datasets.size() == 2);
    CHECK(datasets[0].domain_id == "z");
    CHECK(datasets[1].domain_id == "a");
    CHECK(datasets[0].features(0, 0) == 1.0);
    CHECK(datasets[0].features(1, 0) == 3.0);
}

TEST_CASE("lodo_splits produce the leave-one-out pattern over 4 domains") {
    std::string contents = "domain,label,f0\n";
    for (const char* id : {"V", "L", "C", "S"}) {
        contents += std::string(id) + ",0,0.1\n";
        contents += std::string(id) + ",1,0.9\n";
    }
    const TempFile file("d2v_vlcs.csv", contents);
    const auto splits = lodo_splits(load_csv(file.path));
    REQUIRE(splits.size() == 4);

    const auto& v_split = splits[0];
    CHECK(v_split.target.domain_id == "V");
    std::set<std::string> source_ids;
    for (const auto& src : v_split.sources) source_ids.insert(src.domain_id);
    CHECK(source_ids == std::set<std::string>{"L", "C", "S"});
}

TEST_CASE("lodo_splits with 2 domains yield 2 one-source splits") {
    const TempFile file("d2v_two_dom.csv",
                        "domain,label,f0\n"
                        "p,0,1\n"
                        "q,1,2\n");
    const auto splits = lodo_splits(load_csv(file.path));
    REQUIRE(splits.size() == 2);
    CHECK(splits[0].sources.size() == 1);
    CHECK(splits[1].sources.size() == 1);
}

TEST_CASE("every lodo split partitions the table's rows") {
    const auto suite = generate_suite(SynthSpec{5, 7, 3});
    const FeatureTable table = to_table(suite);
    const auto splits = lodo_splits(table);
    REQUIRE(splits.size() == 5);
    for (const auto& split : splits) {
        size_t rows = split.target.size();
        for (const auto& src : split.sources) {
            rows += src.size();
            CHECK(src.domain_id != split.target.domain_id);
        }
        CHECK(rows == table.size());
    }
}

TEST_CASE("lodo_splits reject a single-domain table") {
    const TempFile file("d2v_single.csv",
                        "domain,label,f0\n"
                        "only,0,1\n"
                        "only,1,2\n");
    CHECK_THROWS_AS(lodo_splits(load_csv(file.path)), std::invalid_argument);
}
