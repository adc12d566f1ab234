#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdpsim/types.hpp"

namespace pdpsim {

/// Minimal binary array container used for field dumps:
///   bytes 0-7   magic "PDPARR01"
///   u32         dtype tag (1 = complex128 as two little-endian f64)
///   u32         ndim
///   u64 * ndim  dims
///   body        row-major elements
/// Little-endian throughout.
struct ArrayFile {
    std::vector<uint64_t> dims;
    std::vector<cplx> data;
};

void write_array(const std::string& path, const std::vector<uint64_t>& dims,
                 const std::vector<cplx>& data);

ArrayFile read_array(const std::string& path);

}  // namespace pdpsim
