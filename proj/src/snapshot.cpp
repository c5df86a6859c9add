#include "fnls/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fnls {

namespace {

constexpr char kMagic[4] = {'F', 'N', 'L', 'S'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts unsupported");

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        T out;
        auto* a = reinterpret_cast<unsigned char*>(&v);
        auto* b = reinterpret_cast<unsigned char*>(&out);
        for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = a[sizeof(T) - 1 - i];
        return out;
    }
    return v;
}

template <typename T>
void put(std::ostream& out, T v) {
    if constexpr (sizeof(T) == 8) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        bits = to_little(bits);
        out.write(reinterpret_cast<const char*>(&bits), 8);
    } else {
        T lv = to_little(v);
        out.write(reinterpret_cast<const char*>(&lv), sizeof(T));
    }
}

template <typename T>
T get(std::istream& in) {
    if constexpr (sizeof(T) == 8) {
        std::uint64_t bits;
        in.read(reinterpret_cast<char*>(&bits), 8);
        bits = to_little(bits);
        T v;
        std::memcpy(&v, &bits, 8);
        return v;
    } else {
        T v;
        in.read(reinterpret_cast<char*>(&v), sizeof(T));
        return to_little(v);
    }
}

} // namespace

void write_snapshot(const std::string& path, const Field& field, double time,
                    double s, double p) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path);
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid->dim()));
    put<std::uint32_t>(out,
                       static_cast<std::uint32_t>(field.grid->points_per_dim()));
    put<double>(out, field.grid->half_length());
    put<double>(out, time);
    put<double>(out, s);
    put<double>(out, p);
    for (const Complex& z : field.values) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    if (!out) throw std::runtime_error("snapshot: write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("snapshot: unsupported version");
    const auto dim = get<std::uint32_t>(in);
    const auto m = get<std::uint32_t>(in);
    const double half_length = get<double>(in);

    Snapshot snap;
    snap.time = get<double>(in);
    snap.s = get<double>(in);
    snap.p = get<double>(in);
    snap.field = Field(make_grid(static_cast<int>(dim), m, half_length));
    for (Complex& z : snap.field.values) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = Complex(re, im);
    }
    if (!in) throw std::runtime_error("snapshot: truncated file " + path);
    return snap;
}

} // namespace fnls
