#include "appraise/classic/similarity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "appraise/errors.hpp"

namespace appraise::classic {

static_assert(std::endian::native == std::endian::little, "SIM1 I/O assumes a little-endian host");

SparseSimilarity::SparseSimilarity(Index n, Index top_k, std::vector<std::vector<SimEntry>> columns)
    : n_(n), top_k_(top_k), columns_(std::move(columns)), rows_(n) {
  if (columns_.size() != n_) throw InvalidArgument("SparseSimilarity: expected one column per element");
  for (Index j = 0; j < n_; ++j) {
    if (columns_[j].size() > top_k_) {
      throw InvalidArgument("SparseSimilarity: column exceeds top_k entries");
    }
    for (const SimEntry& e : columns_[j]) {
      if (e.index >= n_) throw InvalidArgument("SparseSimilarity: index out of range");
      if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
        throw InvalidArgument("SparseSimilarity: similarities must be finite and >= 0");
      }
      rows_[e.index].push_back({static_cast<std::uint32_t>(j), e.value});
    }
  }
}

Index SparseSimilarity::nonzeros() const {
  Index nnz = 0;
  for (const auto& c : columns_) nnz += c.size();
  return nnz;
}

bool SparseSimilarity::operator==(const SparseSimilarity& other) const {
  if (n_ != other.n_ || top_k_ != other.top_k_) return false;
  for (Index j = 0; j < n_; ++j) {
    const auto& a = columns_[j];
    const auto& b = other.columns_[j];
    if (a.size() != b.size()) return false;
    for (Index t = 0; t < a.size(); ++t) {
      if (a[t].index != b[t].index || a[t].value != b[t].value) return false;
    }
  }
  return true;
}

SparseSimilarity build_similarity(const DesignMatrix& design, Kernel kernel, Index top_k) {
  if (top_k < 1) throw InvalidArgument("build_similarity: top_k must be >= 1");
  if (kernel.kind == KernelKind::rbf && !(kernel.sigma > 0.0)) {
    throw InvalidArgument("build_similarity: rbf sigma must be > 0");
  }
  const Index n = static_cast<Index>(design.rows());
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("build_similarity: ground set too large for 32-bit indices");
  }
  Matrix x = design;
  const Vector sq = x.rowwise().squaredNorm();
  if (kernel.kind == KernelKind::cosine) {
    for (Index i = 0; i < n; ++i) {
      const double norm = std::sqrt(sq[i]);
      if (!(norm > 0.0)) {
        std::ostringstream msg;
        msg << "build_similarity: row " << i << " is zero, cosine similarity undefined";
        throw InvalidArgument(msg.str());
      }
      x.row(i) /= norm;
    }
  }
  const Index keep = std::min(top_k, n);
  std::vector<std::vector<SimEntry>> columns(n);

#pragma omp parallel
  {
    Vector col(n);
    std::vector<SimEntry> all(n);
#pragma omp for schedule(dynamic, 16)
    for (Index j = 0; j < n; ++j) {
      col.noalias() = x * x.row(j).transpose();
      for (Index i = 0; i < n; ++i) {
        double s = col[i];
        if (kernel.kind == KernelKind::rbf) {
          s = std::exp(-std::max(0.0, sq[i] + sq[j] - 2.0 * s) / kernel.sigma);
          if (i == j) s = 1.0;
        } else {
          s = std::max(0.0, s);
        }
        all[i] = {static_cast<std::uint32_t>(i), s};
      }
      const auto better = [](const SimEntry& a, const SimEntry& b) {
        return a.value > b.value || (a.value == b.value && a.index < b.index);
      };
      std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), better);
      columns[j].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
    }
  }
  return SparseSimilarity(n, top_k, std::move(columns));
}

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataFormatError("SIM1: truncated file");
  return v;
}

}  // namespace

void write_sim1(std::ostream& out, const SparseSimilarity& sim) {
  out.write("SIM1", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(sim.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(sim.top_k()));
  for (Index j = 0; j < sim.size(); ++j) put<std::uint32_t>(out, static_cast<std::uint32_t>(sim.column(j).size()));
  for (Index j = 0; j < sim.size(); ++j) {
    for (const SimEntry& e : sim.column(j)) {
      put<std::uint32_t>(out, e.index);
      put<double>(out, e.value);
    }
  }
  if (!out) throw DataFormatError("SIM1: write failed");
}

SparseSimilarity read_sim1(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SIM1", 4) != 0) throw DataFormatError("SIM1: bad magic");
  const Index n = get<std::uint32_t>(in);
  const Index top_k = get<std::uint32_t>(in);
  std::vector<Index> counts(n);
  for (Index j = 0; j < n; ++j) {
    counts[j] = get<std::uint32_t>(in);
    if (counts[j] > top_k) throw DataFormatError("SIM1: column count exceeds top_k");
  }
  std::vector<std::vector<SimEntry>> columns(n);
  for (Index j = 0; j < n; ++j) {
    columns[j].resize(counts[j]);
    for (auto& e : columns[j]) {
      e.index = get<std::uint32_t>(in);
      e.value = get<double>(in);
    }
  }
  try {
    return SparseSimilarity(n, top_k, std::move(columns));
  } catch (const InvalidArgument& e) {
    throw DataFormatError(std::string("SIM1: ") + e.what());
  }
}

void write_sim1(const std::string& path, const SparseSimilarity& sim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("SIM1: cannot open " + path + " for writing");
  write_sim1(out, sim);
}

SparseSimilarity read_sim1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("SIM1: cannot open " + path);
  return read_sim1(in);
}

}  // namespace appraise::classic
