#ifndef NSREG_IO_CHECKPOINT_HPP
#define NSREG_IO_CHECKPOINT_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "../field.hpp"

namespace nsreg::io {

// Layout (all little-endian):
//   0  char[8]  magic "NSRGCKPT"
//   8  u32      version (1)
//   12 u32      n
//   16 f64      box length
//   24 f64      time (NaN when the field carries none)
//   32 u32      component count (3)
//   36 f64[2 * 3 * n^3] payload: (re, im) interleaved, components in order, lattice in
//      row-major order over (k1, k2, k3) with non-negative wavenumbers first.
inline constexpr std::array<char, 8> checkpoint_magic{'N', 'S', 'R', 'G', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t checkpoint_version = 1;
inline constexpr std::size_t checkpoint_header_size = 36;

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}
inline void put_f64(std::vector<unsigned char>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}
inline std::uint32_t get_u32(std::span<const unsigned char> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return v;
}
inline double get_f64(std::span<const unsigned char> in, std::size_t at) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return std::bit_cast<double>(v);
}

} // namespace detail

inline std::vector<unsigned char> encode_checkpoint(const SpectralVectorField& f) {
    const auto& g = f.grid();
    std::vector<unsigned char> out(checkpoint_magic.begin(), checkpoint_magic.end());
    out.reserve(checkpoint_header_size + 2 * 3 * g.size() * 8);
    detail::put_u32(out, checkpoint_version);
    detail::put_u32(out, static_cast<std::uint32_t>(g.n()));
    detail::put_f64(out, g.box_length());
    detail::put_f64(out, f.meta().time.value_or(std::nan("")));
    detail::put_u32(out, 3);
    for (int c = 0; c < 3; ++c)
        for (const auto& v : f.component(c)) {
            detail::put_f64(out, v.real());
            detail::put_f64(out, v.imag());
        }
    return out;
}

/// Decode a checkpoint image. FormatError carries the byte offset of the first bad field.
/// The dealias fraction is not stored; the decoded grid uses `dealias_fraction`.
inline SpectralVectorField decode_checkpoint(std::span<const unsigned char> in,
                                             double dealias_fraction = GridSpec::default_dealias) {
    if (in.size() < checkpoint_header_size)
        throw FormatError("checkpoint header truncated: " + std::to_string(in.size()) + " of " +
                              std::to_string(checkpoint_header_size) + " bytes",
                          in.size());
    if (std::memcmp(in.data(), checkpoint_magic.data(), checkpoint_magic.size()) != 0)
        throw FormatError("bad checkpoint magic", 0);
    if (const auto v = detail::get_u32(in, 8); v != checkpoint_version)
        throw FormatError("unsupported checkpoint version " + std::to_string(v), 8);
    const auto n = detail::get_u32(in, 12);
    if (n < 4 || n % 2 != 0 || n > 4096) throw FormatError("invalid grid resolution " + std::to_string(n), 12);
    const double box = detail::get_f64(in, 16);
    if (!(box > 0.0) || !std::isfinite(box)) throw FormatError("invalid box length", 16);
    const double time = detail::get_f64(in, 24);
    if (const auto comps = detail::get_u32(in, 32); comps != 3)
        throw FormatError("expected 3 components, found " + std::to_string(comps), 32);

    const GridSpec grid(static_cast<int>(n), box, dealias_fraction);
    const std::size_t expected = checkpoint_header_size + 2 * 3 * grid.size() * 8;
    if (in.size() < expected)
        throw FormatError("checkpoint payload truncated: expected " + std::to_string(expected) + " bytes, found " +
                              std::to_string(in.size()),
                          in.size());
    if (in.size() > expected) throw FormatError("trailing bytes after checkpoint payload", expected);

    FieldMeta meta;
    if (!std::isnan(time)) meta.time = time;
    SpectralVectorField f(grid, meta);
    std::size_t at = checkpoint_header_size;
    for (int c = 0; c < 3; ++c)
        for (auto& v : f.component(c)) {
            v = Complex(detail::get_f64(in, at), detail::get_f64(in, at + 8));
            at += 16;
        }
    return f;
}

inline void write_checkpoint(const std::filesystem::path& path, const SpectralVectorField& f) {
    const auto bytes = encode_checkpoint(f);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error("failed writing " + path.string());
}

inline SpectralVectorField read_checkpoint(const std::filesystem::path& path,
                                           double dealias_fraction = GridSpec::default_dealias) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open checkpoint " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes, dealias_fraction);
}

} // namespace nsreg::io

#endif
