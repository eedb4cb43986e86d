#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <vector>

#include "object.hpp"  // for InvalidInput

namespace platkh {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse matrix over Z.  Entry growth in Smith reduction is unbounded, so
/// arbitrary precision is mandatory.
class SparseIntMatrix {
  public:
    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, BigInt v);
    void add(int r, int c, const BigInt& v);
    BigInt get(int r, int c) const;
    const std::map<std::pair<int, int>, BigInt>& entries() const { return entries_; }
    size_t nnz() const { return entries_.size(); }

    static SparseIntMatrix identity(int n);
    SparseIntMatrix transposed() const;
    SparseIntMatrix operator*(const SparseIntMatrix& o) const;
    bool operator==(const SparseIntMatrix& o) const = default;

  private:
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, BigInt> entries_;  // no zeros stored
};

struct SmithResult {
    std::vector<BigInt> invariant_factors;  // each divides the next
    int rank = 0;
    // optional unimodular transforms with U * M * V = diag(factors)
    std::optional<SparseIntMatrix> U, V;
};

/// Smith normal form.  Markowitz-style fill-minimizing pivoting with a
/// magnitude tie-break, deterministic.
SmithResult smith(const SparseIntMatrix& m, bool with_transforms = false);

/// Solves A x = b over the integers; returns the solution produced by the
/// Smith transform (deterministic), or nullopt when unsolvable.
std::optional<std::vector<BigInt>> solve_z(const SparseIntMatrix& a, const std::vector<BigInt>& b);

struct HomologySummary {
    int free_rank = 0;
    std::vector<BigInt> torsion;  // orders >= 2, each divides the next
    bool operator==(const HomologySummary&) const = default;
};

/// Homology at the middle of  src --d_in--> mid --d_out--> tgt.
/// Requires d_out * d_in = 0.
HomologySummary homology_at(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out);

}  // namespace platkh
