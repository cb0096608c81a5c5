#pragma once
// Datasets for the activation-sensitivity study: synthetic sinc/sigmoid
// regression sets, the IDX-format image corpus loader, and the UCI-style
// comma-separated medical records loader.
//
// Randomness policy: splits and shuffles derive from mt19937_64 through
// portable arithmetic only (no std::uniform_* distributions, whose streams
// differ across standard libraries), so a seed pins byte-identical datasets
// everywhere.

#include <cstdint>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dctif {

// ---------------------------------------------------------------------------
// Portable randomness
// ---------------------------------------------------------------------------
inline double portable_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 eng(seed);
    for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates
        const auto j = static_cast<std::size_t>(portable_uniform(eng) * static_cast<double>(i));
        std::swap(idx[i - 1], idx[j < i ? j : i - 1]);
    }
    return idx;
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------
struct Sample {
    std::vector<double> x;
    std::vector<double> y;
};

enum class Task { Regression, Classification };

struct Dataset {
    std::string name;
    Task task = Task::Regression;
    std::vector<Sample> train;
    std::vector<Sample> test;
    int dropped_records = 0;  // records removed for missing attributes
};

// ---------------------------------------------------------------------------
// Synthetic regression sets: 600 points sampled uniformly on [-3, 3],
// seeded random 420/180 train/test split.
// ---------------------------------------------------------------------------
inline double sinc(double x) {
    return x == 0.0 ? 1.0 : std::sin(x) / x;  // removable singularity
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace detail {
inline Dataset make_function_dataset(const std::string& name, double (*f)(double),
                                     std::uint64_t seed) {
    constexpr int kPoints = 600, kTrain = 420;
    std::vector<Sample> all(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        const double x = -3.0 + 6.0 * i / (kPoints - 1);
        all[i] = Sample{{x}, {f(x)}};
    }
    const auto order = shuffled_indices(kPoints, seed);
    Dataset ds;
    ds.name = name;
    ds.task = Task::Regression;
    for (int i = 0; i < kPoints; ++i) {
        auto& dst = (i < kTrain) ? ds.train : ds.test;
        dst.push_back(all[order[static_cast<std::size_t>(i)]]);
    }
    return ds;
}
}  // namespace detail

inline Dataset make_sinc_dataset(std::uint64_t seed) {
    return detail::make_function_dataset("sinc", &sinc, seed);
}

inline Dataset make_sigmoid_dataset(std::uint64_t seed) {
    return detail::make_function_dataset("sigmoid", &logistic, seed);
}

// ---------------------------------------------------------------------------
// IDX image corpus (big-endian headers; magic 0x803 = images, 0x801 = labels)
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t off,
                               const std::filesystem::path& p) {
    if (off + 4 > b.size()) throw std::runtime_error("truncated IDX file " + p.string());
    return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
           (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

struct IdxImages {
    std::uint32_t count, rows, cols;
    std::size_t data_off;
    std::vector<unsigned char> bytes;
};

inline IdxImages read_idx_images(const std::filesystem::path& p) {
    IdxImages out;
    out.bytes = read_file_bytes(p);
    if (read_be32(out.bytes, 0, p) != 0x00000803u)
        throw std::runtime_error("bad IDX image magic in " + p.string());
    out.count = read_be32(out.bytes, 4, p);
    out.rows = read_be32(out.bytes, 8, p);
    out.cols = read_be32(out.bytes, 12, p);
    out.data_off = 16;
    if (out.bytes.size() < out.data_off + std::size_t{out.count} * out.rows * out.cols)
        throw std::runtime_error("truncated IDX image data in " + p.string());
    return out;
}

inline std::vector<unsigned char> read_idx_labels(const std::filesystem::path& p,
                                                  std::uint32_t expect_count) {
    const auto bytes = read_file_bytes(p);
    if (read_be32(bytes, 0, p) != 0x00000801u)
        throw std::runtime_error("bad IDX label magic in " + p.string());
    const auto count = read_be32(bytes, 4, p);
    if (count != expect_count)
        throw std::runtime_error("image/label count mismatch in " + p.string());
    if (bytes.size() < 8 + count) throw std::runtime_error("truncated IDX labels in " + p.string());
    return {bytes.begin() + 8, bytes.begin() + 8 + count};
}

inline void append_idx_split(std::vector<Sample>& dst, const std::filesystem::path& images,
                             const std::filesystem::path& labels, int per_class) {
    const auto img = read_idx_images(images);
    const auto lab = read_idx_labels(labels, img.count);
    const std::size_t dim = std::size_t{img.rows} * img.cols;
    std::vector<int> taken(10, 0);
    for (std::uint32_t n = 0; n < img.count; ++n) {
        const int digit = lab[n];
        if (digit < 0 || digit > 9) throw std::runtime_error("label out of range in " + labels.string());
        if (per_class > 0 && taken[static_cast<std::size_t>(digit)] >= per_class) continue;
        ++taken[static_cast<std::size_t>(digit)];
        Sample s;
        s.x.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            s.x[k] = img.bytes[img.data_off + std::size_t{n} * dim + k] / 255.0;
        s.y.assign(10, 0.0);
        s.y[static_cast<std::size_t>(digit)] = 1.0;
        dst.push_back(std::move(s));
    }
}

}  // namespace detail

// Loads the standard four-file IDX layout from `dir`. subset_per_class = 0
// loads everything; otherwise the first N training images per class are kept,
// with test_per_class defaulting to N/5 (the 500-train/100-test desk-scale
// ratio).
inline Dataset load_mnist(const std::string& dir, int subset_per_class = 500,
                          int test_per_class = -1) {
    if (subset_per_class < 0) throw std::invalid_argument("subset_per_class must be >= 0");
    if (test_per_class < 0)
        test_per_class = subset_per_class == 0 ? 0 : std::max(1, subset_per_class / 5);
    const std::filesystem::path root(dir);
    Dataset ds;
    ds.name = "mnist";
    ds.task = Task::Classification;
    detail::append_idx_split(ds.train, root / "train-images-idx3-ubyte",
                             root / "train-labels-idx1-ubyte", subset_per_class);
    detail::append_idx_split(ds.test, root / "t10k-images-idx3-ubyte",
                             root / "t10k-labels-idx1-ubyte", test_per_class);
    return ds;
}

// ---------------------------------------------------------------------------
// UCI-style cancer records: comma-separated `id,a1..a9,class` with '?' for
// missing attributes. Rows with missing values are dropped and counted.
// Attributes 1..10 are scaled to (0, 1]; class 2 -> 0 (benign), 4 -> 1.
// Seeded 80/20 train/test split.
// ---------------------------------------------------------------------------
inline Dataset load_cancer(const std::string& path, std::uint64_t split_seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Sample> rows;
    int dropped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 11)
            throw std::runtime_error("malformed record (" + std::to_string(fields.size()) +
                                     " fields) in " + path);
        bool missing = false;
        for (const auto& f : fields)
            if (f == "?") missing = true;
        if (missing) {
            ++dropped;
            continue;
        }
        Sample s;
        s.x.reserve(9);
        for (std::size_t k = 1; k <= 9; ++k) s.x.push_back(std::stod(fields[k]) / 10.0);
        const int cls = std::stoi(fields[10]);
        if (cls != 2 && cls != 4)
            throw std::runtime_error("unexpected class value '" + fields[10] + "' in " + path);
        s.y.push_back(cls == 4 ? 1.0 : 0.0);
        rows.push_back(std::move(s));
    }
    Dataset ds;
    ds.name = "cancer";
    ds.task = Task::Classification;
    ds.dropped_records = dropped;
    const auto order = shuffled_indices(rows.size(), split_seed);
    const std::size_t n_train = rows.size() * 8 / 10;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& dst = (i < n_train) ? ds.train : ds.test;
        dst.push_back(rows[order[i]]);
    }
    return ds;
}

}  // namespace dctif
