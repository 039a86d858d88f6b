#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "appraise/types.hpp"

namespace appraise::classic {

enum class KernelKind { dot, cosine, rbf };

struct Kernel {
  KernelKind kind = KernelKind::rbf;
  double sigma = 1.0;  // rbf: exp(-||xi - xj||^2 / sigma)

  static Kernel dot() { return {KernelKind::dot, 1.0}; }
  static Kernel cosine() { return {KernelKind::cosine, 1.0}; }
  static Kernel rbf(double sigma) { return {KernelKind::rbf, sigma}; }
};

struct SimEntry {
  std::uint32_t index;
  double value;
};

/// Column-oriented top-k similarities: column j lists the (i, s_ij) pairs with
/// the largest s_ij, sorted descending (ties by lower i). All values >= 0.
class SparseSimilarity {
 public:
  SparseSimilarity() = default;
  SparseSimilarity(Index n, Index top_k, std::vector<std::vector<SimEntry>> columns);

  Index size() const { return n_; }
  Index top_k() const { return top_k_; }
  const std::vector<SimEntry>& column(Index j) const { return columns_[j]; }
  /// Entries (j, s_ij) for fixed i: every column where i was retained.
  const std::vector<SimEntry>& row(Index i) const { return rows_[i]; }
  Index nonzeros() const;

  bool operator==(const SparseSimilarity& other) const;

 private:
  Index n_ = 0;
  Index top_k_ = 0;
  std::vector<std::vector<SimEntry>> columns_;
  std::vector<std::vector<SimEntry>> rows_;
};

inline constexpr Index kDefaultTopK = 256;

SparseSimilarity build_similarity(const DesignMatrix& design, Kernel kernel,
                                  Index top_k = kDefaultTopK);

void write_sim1(std::ostream& out, const SparseSimilarity& sim);
SparseSimilarity read_sim1(std::istream& in);
void write_sim1(const std::string& path, const SparseSimilarity& sim);
SparseSimilarity read_sim1(const std::string& path);

}  // namespace appraise::classic
