#include "reks/io.hpp"

#include <bit>
#include <vector>

#include "reks/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary artifact format requires a little-endian host");

namespace reks {

void write_f32(std::ostream& out, const double* data, std::size_t n) {
    std::vector<float> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = static_cast<float>(data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(n * sizeof(float)));
    if (!out) throw DataError("binary write failed");
}

void read_f32(std::istream& in, double* data, std::size_t n) {
    std::vector<float> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(n * sizeof(float))) {
        throw DataError("binary read truncated");
    }
    for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<double>(buf[i]);
}

std::string read_header_line(std::istream& in, const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("missing header line in " + what);
    return line;
}

}  // namespace reks
