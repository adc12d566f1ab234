#include "pdpsim/array_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pdpsim {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'P', 'A', 'R', 'R', '0', '1'};
constexpr uint32_t kComplex128 = 1;

}  // namespace

void write_array(const std::string& path, const std::vector<uint64_t>& dims,
                 const std::vector<cplx>& data) {
    uint64_t expect = 1;
    for (uint64_t d : dims) expect *= d;
    if (expect != data.size())
        throw std::invalid_argument("write_array: dims do not match the data size");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_array: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    const uint32_t dtype = kComplex128;
    const uint32_t ndim = static_cast<uint32_t>(dims.size());
    out.write(reinterpret_cast<const char*>(&dtype), sizeof(dtype));
    out.write(reinterpret_cast<const char*>(&ndim), sizeof(ndim));
    for (uint64_t d : dims) out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    for (const cplx& z : data) {
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
    if (!out) throw std::runtime_error("write_array: short write to " + path);
}

ArrayFile read_array(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_array: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_array: bad magic in " + path);
    uint32_t dtype = 0, ndim = 0;
    in.read(reinterpret_cast<char*>(&dtype), sizeof(dtype));
    in.read(reinterpret_cast<char*>(&ndim), sizeof(ndim));
    if (!in || dtype != kComplex128)
        throw std::runtime_error("read_array: unsupported dtype in " + path);
    ArrayFile f;
    f.dims.resize(ndim);
    uint64_t total = 1;
    for (auto& d : f.dims) {
        in.read(reinterpret_cast<char*>(&d), sizeof(d));
        total *= d;
    }
    f.data.resize(total);
    for (auto& z : f.data) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(re));
        in.read(reinterpret_cast<char*>(&im), sizeof(im));
        z = cplx(re, im);
    }
    if (!in) throw std::runtime_error("read_array: truncated file " + path);
    return f;
}

}  // namespace pdpsim
