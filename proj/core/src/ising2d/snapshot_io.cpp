#include "kzc/ising2d/snapshot_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kzc::ising2d {

namespace {

constexpr char kMagic[4] = {'K', 'Z', 'I', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

void write_snapshot(const std::filesystem::path& path, const LatticeSnapshot& snapshot) {
    if (snapshot.lx < 1 || snapshot.ly < 1 ||
        snapshot.spins.size() != static_cast<std::size_t>(snapshot.lx) *
                                     static_cast<std::size_t>(snapshot.ly))
        throw std::invalid_argument("write_snapshot: inconsistent snapshot dimensions");

    std::string buf;
    buf.reserve(48 + snapshot.spins.size() / 8 + 1);
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(snapshot.lx));
    put_u32(buf, static_cast<std::uint32_t>(snapshot.ly));
    put_f64(buf, snapshot.time);
    put_f64(buf, snapshot.temperature);
    put_f64(buf, snapshot.energy_per_site);
    put_f64(buf, snapshot.magnetization);

    unsigned char byte = 0;
    int bit = 0;
    for (const auto s : snapshot.spins) {
        if (s > 0) byte |= static_cast<unsigned char>(1u << bit);
        if (++bit == 8) {
            buf.push_back(static_cast<char>(byte));
            byte = 0;
            bit = 0;
        }
    }
    if (bit != 0) buf.push_back(static_cast<char>(byte));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write_snapshot: write failed for " + path.string());
}

LatticeSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    constexpr std::size_t kHeader = 4 + 4 + 4 + 4 + 4 * 8;
    if (data.size() < kHeader)
        throw std::runtime_error("read_snapshot: truncated header in " + path.string());
    if (std::memcmp(data.data(), kMagic, 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path.string());

    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t version = get_u32(p + 4);
    if (version != kVersion)
        throw std::runtime_error("read_snapshot: unsupported version in " + path.string());

    LatticeSnapshot snap;
    snap.lx = static_cast<int>(get_u32(p + 8));
    snap.ly = static_cast<int>(get_u32(p + 12));
    if (snap.lx < 1 || snap.ly < 1 || snap.lx > (1 << 20) || snap.ly > (1 << 20))
        throw std::runtime_error("read_snapshot: impossible dimensions in " + path.string());
    snap.time = get_f64(p + 16);
    snap.temperature = get_f64(p + 24);
    snap.energy_per_site = get_f64(p + 32);
    snap.magnetization = get_f64(p + 40);

    const std::size_t n =
        static_cast<std::size_t>(snap.lx) * static_cast<std::size_t>(snap.ly);
    const std::size_t payload = (n + 7) / 8;
    if (data.size() != kHeader + payload)
        throw std::runtime_error("read_snapshot: payload size mismatch in " + path.string());

    snap.spins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char byte = p[kHeader + i / 8];
        snap.spins[i] = (byte >> (i % 8)) & 1u ? 1 : -1;
    }
    return snap;
}

} // namespace kzc::ising2d
