#include "mixnorm/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

namespace mixnorm {

namespace {

constexpr unsigned char kMagic[4] = {0x42, 0x53, 0x46, 0x31};  // "BSF1"

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(unsigned char* p, std::uint32_t v) {
    p[0] = v & 0xff;
    p[1] = (v >> 8) & 0xff;
    p[2] = (v >> 16) & 0xff;
    p[3] = (v >> 24) & 0xff;
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

// Samples and L are stored as little-endian f64; this code assumes a
// little-endian host (asserted nowhere else in the toolkit).
void write_header(std::FILE* f, int ncomp, const Grid3& grid, const std::string& path) {
    unsigned char hdr[28];
    std::memcpy(hdr, kMagic, 4);
    hdr[4] = 1;
    hdr[5] = (unsigned char)ncomp;
    hdr[6] = hdr[7] = 0;
    put_u32(hdr + 8, std::uint32_t(grid.n()));
    put_u32(hdr + 12, std::uint32_t(grid.n()));
    put_u32(hdr + 16, std::uint32_t(grid.n()));
    double L = grid.L();
    std::memcpy(hdr + 20, &L, 8);
    if (std::fwrite(hdr, 1, sizeof hdr, f) != sizeof hdr)
        throw FormatError("write failed: " + path, 0);
}

void write_samples(std::FILE* f, const Eigen::ArrayXd& data, const std::string& path) {
    if (std::fwrite(data.data(), 8, std::size_t(data.size()), f) != std::size_t(data.size()))
        throw FormatError("write failed: " + path, 28);
}

struct Header {
    int ncomp;
    Grid3 grid;
};

Header read_header(std::FILE* f, const std::string& path) {
    unsigned char hdr[28];
    std::size_t got = std::fread(hdr, 1, sizeof hdr, f);
    if (got < sizeof hdr) throw FormatError("truncated header in " + path, got);
    if (std::memcmp(hdr, kMagic, 4) != 0) throw FormatError("bad magic in " + path, 0);
    if (hdr[4] != 1) throw FormatError("unsupported version in " + path, 4);
    int ncomp = hdr[5];
    if (ncomp != 1 && ncomp != 3) throw FormatError("bad component count in " + path, 5);
    if (hdr[6] != 0 || hdr[7] != 0) throw FormatError("reserved bytes nonzero in " + path, 6);
    std::uint32_t nx = get_u32(hdr + 8), ny = get_u32(hdr + 12), nz = get_u32(hdr + 16);
    if (nx != ny || ny != nz) throw FormatError("dimension mismatch in " + path, 8);
    double L;
    std::memcpy(&L, hdr + 20, 8);
    if (nx < 8 || (nx & (nx - 1)) != 0)
        throw InvalidInput("field file " + path + ": n must be a power of two >= 8");
    if (!(L > 0.0)) throw FormatError("non-positive box length in " + path, 20);
    return {ncomp, Grid3(int(nx), L)};
}

Eigen::ArrayXd read_samples(std::FILE* f, std::int64_t count, std::size_t offset,
                            const std::string& path) {
    Eigen::ArrayXd data(count);
    std::size_t got = std::fread(data.data(), 8, std::size_t(count), f);
    if (got != std::size_t(count)) throw FormatError("truncated samples in " + path, offset + got * 8);
    return data;
}

}  // namespace

void write_field(const ScalarField& fld, const std::string& path) {
    fld.validate();
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw FormatError("cannot open for writing: " + path, 0);
    write_header(f.get(), 1, fld.grid, path);
    write_samples(f.get(), fld.data, path);
}

void write_field(const VectorField& u, const std::string& path) {
    u.validate();
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw FormatError("cannot open for writing: " + path, 0);
    write_header(f.get(), 3, u.grid, path);
    for (const auto& c : u.comp) write_samples(f.get(), c, path);
}

AnyField read_field(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw FormatError("cannot open: " + path, 0);
    Header h = read_header(f.get(), path);
    const std::int64_t nvox = h.grid.size();
    try {
        if (h.ncomp == 1) {
            ScalarField fld(h.grid, read_samples(f.get(), nvox, 28, path));
            fld.validate();
            return fld;
        }
        VectorField u(h.grid);
        for (int c = 0; c < 3; ++c)
            u.comp[c] = read_samples(f.get(), nvox, 28 + std::size_t(c) * nvox * 8, path);
        u.validate();
        return u;
    } catch (const FormatError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw FormatError(std::string(e.what()) + " in " + path, 28);
    }
}

ScalarField read_scalar_field(const std::string& path) {
    AnyField any = read_field(path);
    if (auto* s = std::get_if<ScalarField>(&any)) return std::move(*s);
    throw InvalidInput("expected a 1-component field in " + path);
}

VectorField read_vector_field(const std::string& path) {
    AnyField any = read_field(path);
    if (auto* v = std::get_if<VectorField>(&any)) return std::move(*v);
    throw InvalidInput("expected a 3-component field in " + path);
}

}  // namespace mixnorm
