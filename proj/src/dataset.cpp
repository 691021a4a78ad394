#include "seprune/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "seprune/rng.hpp"

namespace seprune {

namespace {

constexpr char kMagic[4] = {'S', 'E', 'P', 'B'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

void write_le_f32(std::ostream& out, float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    write_le(out, bits);
}

template <typename T>
bool read_le(std::istream& in, T& value) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    value = static_cast<T>(v);
    return true;
}

bool read_le_f32(std::istream& in, float& value) {
    std::uint32_t bits;
    if (!read_le(in, bits)) return false;
    std::memcpy(&value, &bits, sizeof(value));
    return true;
}

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what, std::size_t row) {
    std::uint64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(what + " at row " + std::to_string(row) + ": '" + s + "'");
    return v;
}

float parse_f32(const std::string& s, std::size_t row) {
    float v = 0.0f;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        fail("unparseable feature value at row " + std::to_string(row) + ": '" + s + "'");
    return v;
}

}  // namespace

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::oracle: return "oracle";
        case Provenance::kmeans: return "kmeans";
        case Provenance::external: return "external";
    }
    return "external";
}

EmbeddingDataset EmbeddingDataset::create(std::vector<ExampleId> ids,
                                          std::vector<float> features, std::size_t d) {
    EmbeddingDataset out;
    out.n = ids.size();
    out.d = d;
    if (out.n < 1) fail("dataset must contain at least one example");
    if (d < 1) fail("dataset dimension must be at least 1");
    if (features.size() != out.n * d)
        fail("feature count " + std::to_string(features.size()) + " does not match n*d = " +
             std::to_string(out.n * d));
    for (std::size_t i = 0; i < out.n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(features[i * d + j]))
                fail("non-finite feature value at row " + std::to_string(i) + ", column " +
                     std::to_string(j));
        }
    }
    std::vector<ExampleId> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
        fail("duplicate example id " + std::to_string(*dup));
    out.ids = std::move(ids);
    out.features = std::move(features);
    return out;
}

std::unordered_map<ExampleId, std::size_t> EmbeddingDataset::index() const {
    std::unordered_map<ExampleId, std::size_t> map;
    map.reserve(n);
    for (std::size_t i = 0; i < n; ++i) map.emplace(ids[i], i);
    return map;
}

EmbeddingDataset EmbeddingDataset::subset(std::span<const ExampleId> keep) const {
    const auto map = index();
    EmbeddingDataset out;
    out.d = d;
    out.n = keep.size();
    out.ids.reserve(keep.size());
    out.features.reserve(keep.size() * d);
    for (const ExampleId id : keep) {
        const auto it = map.find(id);
        if (it == map.end()) fail("unknown example id " + std::to_string(id));
        out.ids.push_back(id);
        const auto r = row(it->second);
        out.features.insert(out.features.end(), r.begin(), r.end());
    }
    if (out.n == 0) fail("subset is empty");
    return out;
}

LabelAssignment LabelAssignment::create(std::vector<std::uint32_t> labels,
                                        std::uint32_t num_classes, Provenance provenance) {
    if (num_classes < 1) fail("class count must be at least 1");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= num_classes)
            fail("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                 " is outside [0, " + std::to_string(num_classes) + ")");
    }
    LabelAssignment out;
    out.labels = std::move(labels);
    out.num_classes = num_classes;
    out.provenance = provenance;
    return out;
}

LabelAssignment LabelAssignment::subset(std::span<const std::size_t> row_indices) const {
    LabelAssignment out;
    out.num_classes = num_classes;
    out.provenance = provenance;
    out.labels.reserve(row_indices.size());
    for (const std::size_t i : row_indices) out.labels.push_back(labels.at(i));
    return out;
}

EmbeddingFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? EmbeddingFormat::csv : EmbeddingFormat::binary;
}

namespace {

EmbeddingDataset load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        fail(path.string() + ": malformed header (bad magic)");
    std::uint32_t version = 0;
    if (!read_le(in, version) || version != kFormatVersion)
        fail(path.string() + ": unsupported format version " + std::to_string(version));
    std::uint64_t n = 0, d = 0;
    if (!read_le(in, n) || !read_le(in, d))
        fail(path.string() + ": malformed header (truncated sizes)");
    if (n == 0 || d == 0) fail(path.string() + ": header declares empty matrix");
    if (n > (1ULL << 32) || d > (1ULL << 24) || n * d > (1ULL << 34))
        fail(path.string() + ": header declares implausible sizes");
    std::vector<ExampleId> ids(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (!read_le(in, ids[i]))
            fail(path.string() + ": truncated id block at row " + std::to_string(i));
    }
    std::vector<float> features(n * d);
    for (std::uint64_t i = 0; i < n * d; ++i) {
        if (!read_le_f32(in, features[i]))
            fail(path.string() + ": truncated feature block at row " + std::to_string(i / d));
    }
    char extra;
    if (in.read(&extra, 1)) fail(path.string() + ": trailing bytes after feature block");
    return EmbeddingDataset::create(std::move(ids), std::move(features),
                                    static_cast<std::size_t>(d));
}

EmbeddingDataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(path.string() + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "id")
        fail(path.string() + ": malformed header, expected 'id,f0,...'");
    const std::size_t d = header.size() - 1;
    for (std::size_t j = 0; j < d; ++j) {
        if (header[j + 1] != "f" + std::to_string(j))
            fail(path.string() + ": malformed header, expected column 'f" + std::to_string(j) +
                 "' but found '" + header[j + 1] + "'");
    }
    std::vector<ExampleId> ids;
    std::vector<float> features;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != d + 1)
            fail(path.string() + ": row " + std::to_string(row) + " has " +
                 std::to_string(fields.size() - 1) + " features, expected " + std::to_string(d));
        ids.push_back(parse_u64(fields[0], "unparseable id", row));
        for (std::size_t j = 0; j < d; ++j) {
            const float v = parse_f32(fields[j + 1], row);
            if (!std::isfinite(v))
                fail(path.string() + ": non-finite feature value at row " + std::to_string(row) +
                     ", column " + std::to_string(j));
            features.push_back(v);
        }
        ++row;
    }
    if (ids.empty()) fail(path.string() + ": no data rows");
    return EmbeddingDataset::create(std::move(ids), std::move(features), d);
}

}  // namespace

EmbeddingDataset load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
    return format == EmbeddingFormat::binary ? load_binary(path) : load_csv(path);
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingDataset& data,
                      EmbeddingFormat format) {
    if (format == EmbeddingFormat::binary) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot write " + path.string());
        out.write(kMagic, 4);
        write_le(out, kFormatVersion);
        write_le(out, static_cast<std::uint64_t>(data.n));
        write_le(out, static_cast<std::uint64_t>(data.d));
        for (const ExampleId id : data.ids) write_le(out, id);
        for (const float f : data.features) write_le_f32(out, f);
        if (!out) fail("short write to " + path.string());
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("cannot write " + path.string());
    out << "id";
    for (std::size_t j = 0; j < data.d; ++j) out << ",f" << j;
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < data.n; ++i) {
        out << data.ids[i];
        for (std::size_t j = 0; j < data.d; ++j) {
            // 9 significant digits round-trips any f32 exactly
            std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(data.features[i * data.d + j]));
            out << ',' << buf;
        }
        out << "\n";
    }
    if (!out) fail("short write to " + path.string());
}

LabelAssignment load_labels(const std::filesystem::path& path,
                            std::span<const ExampleId> expected_ids, bool as_oracle) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(path.string() + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "id" || header[1] != "label")
        fail(path.string() + ": malformed header, expected 'id,label'");

    std::unordered_map<ExampleId, std::size_t> expected;
    expected.reserve(expected_ids.size());
    for (std::size_t i = 0; i < expected_ids.size(); ++i) expected.emplace(expected_ids[i], i);

    std::vector<std::uint32_t> labels(expected_ids.size(), 0);
    std::vector<bool> seen(expected_ids.size(), false);
    std::size_t row = 0;
    std::uint32_t max_label = 0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            fail(path.string() + ": row " + std::to_string(row) + " must have exactly id,label");
        const ExampleId id = parse_u64(fields[0], "unparseable id", row);
        if (!fields[1].empty() && fields[1][0] == '-')
            fail(path.string() + ": negative label at row " + std::to_string(row));
        const std::uint64_t label = parse_u64(fields[1], "unparseable label", row);
        if (label >= std::numeric_limits<std::uint32_t>::max())
            fail(path.string() + ": label out of range at row " + std::to_string(row));
        const auto it = expected.find(id);
        if (it == expected.end())
            fail(path.string() + ": unknown id " + std::to_string(id) + " at row " +
                 std::to_string(row));
        if (seen[it->second])
            fail(path.string() + ": duplicate id " + std::to_string(id) + " at row " +
                 std::to_string(row));
        seen[it->second] = true;
        labels[it->second] = static_cast<std::uint32_t>(label);
        max_label = std::max(max_label, static_cast<std::uint32_t>(label));
        ++count;
    }
    if (count != expected_ids.size())
        fail(path.string() + ": length mismatch, file has " + std::to_string(count) +
             " labels but dataset has " + std::to_string(expected_ids.size()));
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) fail(path.string() + ": missing id " + std::to_string(expected_ids[i]));
    }
    return LabelAssignment::create(std::move(labels), max_label + 1,
                                   as_oracle ? Provenance::oracle : Provenance::external);
}

void write_labels(const std::filesystem::path& path, std::span<const ExampleId> ids,
                  const LabelAssignment& labels) {
    if (ids.size() != labels.labels.size()) fail("id/label length mismatch");
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("cannot write " + path.string());
    out << "id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << ids[i] << ',' << labels.labels[i] << "\n";
    if (!out) fail("short write to " + path.string());
}

SplitSpec make_split(const EmbeddingDataset& data, const LabelAssignment& labels,
                     std::size_t per_class_labeled, double test_fraction, std::uint64_t seed) {
    if (labels.labels.size() != data.n) fail("label count does not match dataset");
    if (labels.num_classes < 2) fail("split requires at least 2 classes");
    if (per_class_labeled < 1) fail("per_class_labeled must be at least 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        fail("test_fraction must lie in (0,1)");

    const std::uint32_t k = labels.num_classes;
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < data.n; ++i) by_class[labels.labels[i]].push_back(i);

    Rng rng(seed, "split");
    SplitSpec out;
    out.per_class_labeled = per_class_labeled;
    for (std::uint32_t c = 0; c < k; ++c) {
        auto& rows = by_class[c];
        if (rows.size() < per_class_labeled + 1)
            fail("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                 " examples, need at least " + std::to_string(per_class_labeled + 1));
        rng.shuffle(rows);
        std::size_t test_count =
            static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
        // leave at least one example per class for the unlabeled pool
        if (per_class_labeled + test_count + 1 > rows.size())
            test_count = rows.size() - per_class_labeled - 1;
        std::size_t i = 0;
        for (; i < per_class_labeled; ++i) out.labeled_ids.push_back(data.ids[rows[i]]);
        for (; i < per_class_labeled + test_count; ++i) out.test_ids.push_back(data.ids[rows[i]]);
        for (; i < rows.size(); ++i) out.unlabeled_ids.push_back(data.ids[rows[i]]);
    }
    std::sort(out.labeled_ids.begin(), out.labeled_ids.end());
    std::sort(out.test_ids.begin(), out.test_ids.end());
    std::sort(out.unlabeled_ids.begin(), out.unlabeled_ids.end());
    return out;
}

}  // namespace seprune
