// Dataset utilities: portable RNG, seeded splits, function-regression sets,
// IDX image corpus parsing, and the delimited cancer records loader.
// File-format tests generate their own synthetic fixtures in a temp dir.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "dctif/datasets.hpp"

using namespace dctif;
namespace fs = std::filesystem;

namespace {

fs::path fixture_dir() {
    const fs::path dir = fs::temp_directory_path() / "dctif_dataset_fixtures";
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void push_be32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(static_cast<unsigned char>(x >> 24));
    v.push_back(static_cast<unsigned char>(x >> 16));
    v.push_back(static_cast<unsigned char>(x >> 8));
    v.push_back(static_cast<unsigned char>(x));
}

std::vector<unsigned char> idx_images(const std::vector<std::vector<unsigned char>>& images,
                                      std::uint32_t rows, std::uint32_t cols,
                                      std::uint32_t magic = 0x00000803u) {
    std::vector<unsigned char> v;
    push_be32(v, magic);
    push_be32(v, static_cast<std::uint32_t>(images.size()));
    push_be32(v, rows);
    push_be32(v, cols);
    for (const auto& img : images) v.insert(v.end(), img.begin(), img.end());
    return v;
}

std::vector<unsigned char> idx_labels(const std::vector<unsigned char>& labels,
                                      std::uint32_t magic = 0x00000801u) {
    std::vector<unsigned char> v;
    push_be32(v, magic);
    push_be32(v, static_cast<std::uint32_t>(labels.size()));
    v.insert(v.end(), labels.begin(), labels.end());
    return v;
}

// Standard four-file image corpus layout with six 2x2 training images
// (digit labels 0,1,0,2,1,0) and three test images (labels 0,1,2).
fs::path make_idx_fixture() {
    const fs::path dir = fixture_dir() / "idx";
    fs::create_directories(dir);
    const std::vector<std::vector<unsigned char>> train_imgs = {
        {0, 51, 102, 153}, {10, 20, 30, 40},    {200, 210, 220, 230},
        {5, 15, 25, 35},   {101, 102, 103, 104}, {255, 0, 255, 0},
    };
    const std::vector<unsigned char> train_labels = {0, 1, 0, 2, 1, 0};
    const std::vector<std::vector<unsigned char>> test_imgs = {
        {1, 2, 3, 4}, {50, 60, 70, 80}, {90, 91, 92, 93}};
    const std::vector<unsigned char> test_labels = {0, 1, 2};
    write_bytes(dir / "train-images-idx3-ubyte", idx_images(train_imgs, 2, 2));
    write_bytes(dir / "train-labels-idx1-ubyte", idx_labels(train_labels));
    write_bytes(dir / "t10k-images-idx3-ubyte", idx_images(test_imgs, 2, 2));
    write_bytes(dir / "t10k-labels-idx1-ubyte", idx_labels(test_labels));
    return dir;
}

// Mirrors the published cancer records shape: 699 rows of
// id,9 attributes,class with 16 rows carrying '?' placeholders.
fs::path make_cancer_fixture() {
    const fs::path p = fixture_dir() / "breast-cancer-wisconsin.data";
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    for (int i = 0; i < 699; ++i) {
        out << (1000000 + i);
        for (int a = 0; a < 9; ++a) {
            if (i < 16 && a == 5) {
                out << ",?";  // first 16 records have a missing attribute
            } else {
                out << "," << (1 + (i + a) % 10);
            }
        }
        out << "," << (i % 3 == 0 ? 4 : 2);
        if (i % 50 == 0) out << '\r';  // a few CRLF line endings
        out << '\n';
    }
    return p;
}

}  // namespace

TEST_CASE("portable uniform draws are deterministic and in [0, 1)") {
    std::mt19937_64 a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = portable_uniform(a);
        CHECK(x == portable_uniform(b));
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("shuffled indices form a seeded permutation") {
    const auto p1 = shuffled_indices(600, 7);
    const auto p2 = shuffled_indices(600, 7);
    const auto p3 = shuffled_indices(600, 8);
    CHECK(p1 == p2);
    CHECK(p1 != p3);
    std::set<std::size_t> seen(p1.begin(), p1.end());
    CHECK(seen.size() == 600);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 599);
}

TEST_CASE("sinc handles the removable singularity") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(3.141592653589793) == Catch::Approx(0.0).margin(1e-15));
    CHECK(sinc(1.0) == Catch::Approx(std::sin(1.0)).epsilon(1e-12));
}

TEST_CASE("function regression datasets: 600 points, seeded 420/180 split") {
    const auto ds = make_sinc_dataset(7);
    CHECK(ds.name == "sinc");
    CHECK(ds.task == Task::Regression);
    REQUIRE(ds.train.size() == 420);
    REQUIRE(ds.test.size() == 180);
    std::set<double> xs;
    for (const auto& s : ds.train) xs.insert(s.x.at(0));
    for (const auto& s : ds.test) xs.insert(s.x.at(0));
    CHECK(xs.size() == 600);  // split partitions the grid, no duplication
    CHECK(*xs.begin() == Catch::Approx(-3.0));
    CHECK(*xs.rbegin() == Catch::Approx(3.0));
    for (const auto& s : ds.train) {
        REQUIRE(s.x.size() == 1);
        REQUIRE(s.y.size() == 1);
        CHECK(s.y[0] == Catch::Approx(sinc(s.x[0])).margin(1e-15));
    }

    const auto same = make_sinc_dataset(7);
    CHECK(same.train.front().x[0] == ds.train.front().x[0]);
    const auto other = make_sinc_dataset(8);
    bool any_diff = false;
    for (std::size_t i = 0; i < ds.train.size(); ++i)
        any_diff = any_diff || other.train[i].x[0] != ds.train[i].x[0];
    CHECK(any_diff);

    const auto sig = make_sigmoid_dataset(7);
    CHECK(sig.name == "sigmoid");
    for (const auto& s : sig.test)
        CHECK(s.y[0] == Catch::Approx(1.0 / (1.0 + std::exp(-s.x[0]))).margin(1e-15));
}

TEST_CASE("IDX corpus: per-class caps, scaling, one-hot labels") {
    const auto dir = make_idx_fixture();
    const auto ds = load_mnist(dir.string(), 1, 1);
    CHECK(ds.name == "mnist");
    CHECK(ds.task == Task::Classification);
    // One per class from {0,1,0,2,1,0}: images 0 (digit 0), 1 (digit 1), 3 (digit 2).
    REQUIRE(ds.train.size() == 3);
    REQUIRE(ds.test.size() == 3);
    REQUIRE(ds.train[0].x.size() == 4);
    CHECK(ds.train[0].x[0] == Catch::Approx(0.0));
    CHECK(ds.train[0].x[1] == Catch::Approx(51.0 / 255.0));
    CHECK(ds.train[0].x[3] == Catch::Approx(153.0 / 255.0));
    REQUIRE(ds.train[0].y.size() == 10);
    CHECK(ds.train[0].y[0] == 1.0);
    CHECK(ds.train[1].y[1] == 1.0);
    CHECK(ds.train[2].y[2] == 1.0);
    for (std::size_t k = 3; k < 10; ++k) CHECK(ds.train[2].y[k] == 0.0);

    // subset 0 loads everything.
    const auto full = load_mnist(dir.string(), 0);
    CHECK(full.train.size() == 6);
    CHECK(full.test.size() == 3);

    // Default test sizing: max(1, N/5) per class.
    const auto sized = load_mnist(dir.string(), 2);
    CHECK(sized.train.size() == 5);  // class 0 has 3, classes 1-2 capped at availability
    CHECK(sized.test.size() == 3);
}

TEST_CASE("IDX corpus: malformed files are rejected") {
    const auto dir = fixture_dir() / "idx_bad";
    fs::create_directories(dir);
    // Wrong image magic.
    write_bytes(dir / "train-images-idx3-ubyte", idx_images({{1, 2, 3, 4}}, 2, 2, 0x00000802u));
    write_bytes(dir / "train-labels-idx1-ubyte", idx_labels({0}));
    write_bytes(dir / "t10k-images-idx3-ubyte", idx_images({{1, 2, 3, 4}}, 2, 2));
    write_bytes(dir / "t10k-labels-idx1-ubyte", idx_labels({0}));
    CHECK_THROWS_WITH(load_mnist(dir.string(), 0),
                      Catch::Matchers::ContainsSubstring("magic"));

    // Fix the magic but truncate the pixel payload.
    auto img = idx_images({{1, 2, 3, 4}}, 2, 2);
    img.resize(img.size() - 2);
    write_bytes(dir / "train-images-idx3-ubyte", img);
    CHECK_THROWS_WITH(load_mnist(dir.string(), 0),
                      Catch::Matchers::ContainsSubstring("truncated"));

    // Image/label count mismatch.
    write_bytes(dir / "train-images-idx3-ubyte", idx_images({{1, 2, 3, 4}}, 2, 2));
    write_bytes(dir / "train-labels-idx1-ubyte", idx_labels({0, 1}));
    CHECK_THROWS_WITH(load_mnist(dir.string(), 0),
                      Catch::Matchers::ContainsSubstring("mismatch"));

    // Label outside 0..9.
    write_bytes(dir / "train-labels-idx1-ubyte", idx_labels({11}));
    CHECK_THROWS_WITH(load_mnist(dir.string(), 0),
                      Catch::Matchers::ContainsSubstring("label out of range"));

    CHECK_THROWS_WITH(load_mnist((fixture_dir() / "nowhere").string(), 0),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("cancer records: missing-value rows dropped, 80/20 seeded split") {
    const auto path = make_cancer_fixture();
    const auto ds = load_cancer(path.string(), 7);
    CHECK(ds.name == "cancer");
    CHECK(ds.task == Task::Classification);
    CHECK(ds.dropped_records == 16);
    CHECK(ds.train.size() + ds.test.size() == 683);
    CHECK(ds.train.size() == 546);  // floor(683 * 8/10)
    CHECK(ds.test.size() == 137);
    for (const auto& s : ds.train) {
        REQUIRE(s.x.size() == 9);
        for (double v : s.x) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);  // attributes 1..10 scaled by 1/10
        }
        REQUIRE(s.y.size() == 1);
        CHECK((s.y[0] == 0.0 || s.y[0] == 1.0));
    }
    // Split is deterministic per seed and reshuffles with the seed.
    const auto same = load_cancer(path.string(), 7);
    CHECK(same.train.front().x == ds.train.front().x);
    const auto other = load_cancer(path.string(), 9);
    CHECK(other.train.size() == ds.train.size());
}

TEST_CASE("cancer records: malformed rows and classes are rejected") {
    const auto dir = fixture_dir();
    const auto short_row = dir / "cancer_short.data";
    {
        std::ofstream out(short_row);
        out << "1,2,3\n";
    }
    CHECK_THROWS_WITH(load_cancer(short_row.string(), 1),
                      Catch::Matchers::ContainsSubstring("malformed record"));

    const auto bad_class = dir / "cancer_class.data";
    {
        std::ofstream out(bad_class);
        out << "1000,1,2,3,4,5,6,7,8,9,3\n";
    }
    CHECK_THROWS_WITH(load_cancer(bad_class.string(), 1),
                      Catch::Matchers::ContainsSubstring("unexpected class"));

    CHECK_THROWS_WITH(load_cancer((dir / "missing.data").string(), 1),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}
