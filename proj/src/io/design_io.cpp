#include "appraise/io/design_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::io {

static_assert(std::endian::native == std::endian::little, "DMX1 I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataFormatError(std::string("DMX1: truncated ") + what);
  return v;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

void write_dmx1(std::ostream& out, const DesignMatrix& d, DType dtype) {
  if (d.rows() > std::numeric_limits<std::uint32_t>::max() ||
      d.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("DMX1: matrix too large");
  }
  out.write("DMX1", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.cols()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (dtype == DType::f32) {
        put<float>(out, static_cast<float>(d(i, j)));
      } else {
        put<double>(out, d(i, j));
      }
    }
  }
  if (!out) throw DataFormatError("DMX1: write failed");
}

DesignMatrix read_dmx1(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DMX1", 4) != 0) throw DataFormatError("DMX1: bad magic");
  const auto n = get<std::uint32_t>(in, "header");
  const auto m = get<std::uint32_t>(in, "header");
  const auto dtype = get<std::uint8_t>(in, "header");
  if (dtype > 1) {
    std::ostringstream msg;
    msg << "DMX1: unknown dtype " << static_cast<int>(dtype);
    throw DataFormatError(msg.str());
  }
  DesignMatrix d(n, m);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      d(i, j) = dtype == 0 ? static_cast<double>(get<float>(in, "payload")) : get<double>(in, "payload");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataFormatError("DMX1: trailing bytes after payload");
  }
  return d;
}

void write_dmx1(const std::string& path, const DesignMatrix& d, DType dtype) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open " + path + " for writing");
  write_dmx1(out, d, dtype);
}

DesignMatrix read_dmx1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open " + path);
  return read_dmx1(in);
}

DesignMatrix read_csv(std::istream& in) {
  std::vector<double> values;
  Index cols = 0;
  Index rows = 0;
  std::string line;
  Index line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    row.clear();
    bool numeric = true;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      double v = 0.0;
      if (!parse_double(rest.substr(0, comma), v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!numeric) {
      if (rows == 0 && cols == 0 && values.empty()) {
        cols = std::numeric_limits<Index>::max();  // header seen, width from first data row
        continue;
      }
      std::ostringstream msg;
      msg << "CSV: non-numeric field on line " << line_no;
      throw DataFormatError(msg.str());
    }
    if (cols == 0 || cols == std::numeric_limits<Index>::max()) cols = row.size();
    if (row.size() != cols) {
      std::ostringstream msg;
      msg << "CSV: line " << line_no << " has " << row.size() << " fields, expected " << cols;
      throw DataFormatError(msg.str());
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw DataFormatError("CSV: no data rows");
  DesignMatrix d(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::memcpy(d.data(), values.data(), values.size() * sizeof(double));
  return d;
}

DesignMatrix read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open " + path);
  return read_csv(in);
}

DesignMatrix read_design(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  const bool dmx = in.gcount() == 4 && std::memcmp(magic, "DMX1", 4) == 0;
  in.clear();
  in.seekg(0);
  return dmx ? read_dmx1(in) : read_csv(in);
}

std::vector<Index> read_indices(std::istream& in) {
  std::vector<Index> out;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    Index v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected a non-negative integer, got '" << t << "'";
      throw DataFormatError(msg.str());
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Index> read_indices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot open " + path);
  try {
    return read_indices(in);
  } catch (const DataFormatError& e) {
    throw DataFormatError(path + ": " + e.what());
  }
}

std::vector<Index> read_labels(const std::string& path, Index n) {
  auto labels = read_indices(path);
  if (labels.size() != n) {
    std::ostringstream msg;
    msg << path << ": " << labels.size() << " labels for " << n << " samples";
    throw DataFormatError(msg.str());
  }
  return labels;
}

}  // namespace appraise::io
