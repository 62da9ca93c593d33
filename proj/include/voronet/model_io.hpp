#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "voronet/network.hpp"
#include "voronet/sample_set.hpp"

namespace voronet {

struct ModelIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model container, little-endian throughout:
//
//   offset  size  field
//        0     4  magic "VNNM"
//        4     4  u32 format_version (currently 1)
//        8     4  u32 tie_mode (0 = lowest, 1 = paper)
//       12     4  u32 dim
//       16     8  u64 n
//       24     8  f64 epsilon
//       32  8nd   f64 points, row-major
//     +8nd    8n  f64 values
//      end-8   8  u64 FNV-1a checksum of all preceding bytes
//
// Doubles are stored as their exact binary64 bit patterns, and only the
// generator data is persisted: the derived n(n-1) weight table is a pure,
// deterministic function of the points and is rebuilt on load, so the
// round trip is bit-exact at a fraction of the size.

inline constexpr char kModelMagic[4] = {'V', 'N', 'N', 'M'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

namespace detail {

inline std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void put_f64(std::vector<unsigned char>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
    const unsigned char* data;
    std::size_t size;
    std::size_t pos = 0;

    void need(std::size_t bytes) const {
        if (pos + bytes > size)
            throw ModelIoError("truncated model file: need " + std::to_string(bytes) +
                               " bytes at offset " + std::to_string(pos) + ", file has " +
                               std::to_string(size));
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace detail

inline void save_model(const NetworkParams& params, const std::filesystem::path& path) {
    std::vector<unsigned char> buf;
    buf.reserve(40 + 8 * params.size() * (params.dim() + 1));
    buf.insert(buf.end(), kModelMagic, kModelMagic + 4);
    detail::put_u32(buf, kModelFormatVersion);
    detail::put_u32(buf, params.tie_mode() == TieMode::PaperFaithful ? 1u : 0u);
    detail::put_u32(buf, static_cast<std::uint32_t>(params.dim()));
    detail::put_u64(buf, params.size());
    detail::put_f64(buf, params.epsilon());
    for (double v : params.generators_flat()) detail::put_f64(buf, v);
    for (double v : params.output_weights()) detail::put_f64(buf, v);
    detail::put_u64(buf, detail::fnv1a64(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelIoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ModelIoError("write failed: " + path.string());
}

inline NetworkParams load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError("cannot open model file: " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    detail::ByteReader r{buf.data(), buf.size()};
    r.need(4);
    if (!std::equal(kModelMagic, kModelMagic + 4, buf.data()))
        throw ModelIoError("bad magic bytes: not a model file");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kModelFormatVersion)
        throw ModelIoError("unsupported format_version " + std::to_string(version) +
                           " (expected " + std::to_string(kModelFormatVersion) + ")");
    const std::uint32_t tie_raw = r.u32();
    if (tie_raw > 1) throw ModelIoError("corrupt field: tie_mode " + std::to_string(tie_raw));
    const std::uint32_t dim = r.u32();
    const std::uint64_t n = r.u64();
    const double epsilon = r.f64();
    if (dim == 0) throw ModelIoError("corrupt field: dim is zero");
    if (n < 2) throw ModelIoError("corrupt field: n = " + std::to_string(n));
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw ModelIoError("corrupt field: epsilon outside [0, 1)");

    const std::uint64_t expect = 32 + 8 * n * (dim + 1) + 8;
    if (buf.size() != expect)
        throw ModelIoError("file size " + std::to_string(buf.size()) + " does not match header (expected " +
                           std::to_string(expect) + " bytes)");
    const std::uint64_t expected_sum = detail::fnv1a64(buf.data(), buf.size() - 8);
    detail::ByteReader tail{buf.data(), buf.size(), buf.size() - 8};
    if (tail.u64() != expected_sum) throw ModelIoError("checksum failure: file is corrupt");

    std::vector<double> points(n * dim);
    std::vector<double> values(n);
    for (auto& v : points) v = r.f64();
    for (auto& v : values) v = r.f64();

    try {
        const SampleSet samples(dim, std::move(points), std::move(values));
        return build_network(samples, tie_raw == 1 ? TieMode::PaperFaithful : TieMode::LowestIndex,
                             epsilon);
    } catch (const std::invalid_argument& e) {
        throw ModelIoError(std::string("corrupt payload: ") + e.what());
    }
}

}  // namespace voronet
