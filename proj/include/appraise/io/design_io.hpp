#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "appraise/types.hpp"

namespace appraise::io {

enum class DType : std::uint8_t { f32 = 0, f64 = 1 };

/// DMX1: "DMX1", u32 n, u32 m, u8 dtype, then n*m row-major little-endian values.
void write_dmx1(std::ostream& out, const DesignMatrix& d, DType dtype = DType::f64);
DesignMatrix read_dmx1(std::istream& in);
void write_dmx1(const std::string& path, const DesignMatrix& d, DType dtype = DType::f64);
DesignMatrix read_dmx1(const std::string& path);

/// One sample per line, comma separated; a non-numeric first line is taken as a header.
DesignMatrix read_csv(std::istream& in);
DesignMatrix read_csv(const std::string& path);

/// DMX1 if the file starts with the magic, CSV otherwise.
DesignMatrix read_design(const std::string& path);

/// Newline-delimited non-negative integers.
std::vector<Index> read_indices(std::istream& in);
std::vector<Index> read_indices(const std::string& path);
std::vector<Index> read_labels(const std::string& path, Index n);

}  // namespace appraise::io
