#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>

namespace reks {

/// Serializes doubles as little-endian float32 (lossy) and back.
void write_f32(std::ostream& out, const double* data, std::size_t n);
void read_f32(std::istream& in, double* data, std::size_t n);

/// Reads the newline-terminated JSON header that precedes binary blobs.
std::string read_header_line(std::istream& in, const std::string& what);

}  // namespace reks
