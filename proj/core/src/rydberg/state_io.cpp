#include "kzc/rydberg/state_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kzc::rydberg {

namespace {

constexpr char kMagic[4] = {'K', 'Z', 'R', 'Y'};
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

void write_state(const std::filesystem::path& path, const StateVector& psi) {
    if (psi.n_sites < 1 || psi.n_sites > 24 || psi.amp.size() != psi.dim())
        throw std::invalid_argument("write_state: malformed state vector");

    std::string buf;
    buf.reserve(20 + psi.amp.size() * 16);
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(psi.n_sites));
    put_f64(buf, psi.time);
    for (const auto& a : psi.amp) {
        put_f64(buf, a.real());
        put_f64(buf, a.imag());
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_state: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write_state: write failed for " + path.string());
}

StateVector read_state(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_state: cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    constexpr std::size_t kHeader = 4 + 4 + 4 + 8;
    if (data.size() < kHeader)
        throw std::runtime_error("read_state: truncated header in " + path.string());
    if (std::memcmp(data.data(), kMagic, 4) != 0)
        throw std::runtime_error("read_state: bad magic in " + path.string());

    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t version = get_u32(p + 4);
    if (version != kVersion)
        throw std::runtime_error("read_state: unsupported version in " + path.string());

    StateVector psi;
    const std::uint32_t n_sites = get_u32(p + 8);
    if (n_sites < 1 || n_sites > 24)
        throw std::runtime_error("read_state: impossible site count in " + path.string());
    psi.n_sites = static_cast<int>(n_sites);
    psi.time = get_f64(p + 12);

    const std::size_t dim = std::size_t{1} << n_sites;
    if (data.size() != kHeader + dim * 16)
        throw std::runtime_error("read_state: payload size mismatch in " + path.string());

    psi.amp.resize(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        const unsigned char* q = p + kHeader + s * 16;
        psi.amp[s] = {get_f64(q), get_f64(q + 8)};
    }
    return psi;
}

} // namespace kzc::rydberg
