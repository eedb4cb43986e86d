#include "platkh/sparse_int.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "platkh/engine.hpp"  // InternalError

namespace platkh {

void SparseIntMatrix::set(int r, int c, BigInt v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw InvalidInput("matrix index out of range");
    if (v == 0)
        entries_.erase({r, c});
    else
        entries_[{r, c}] = std::move(v);
}

void SparseIntMatrix::add(int r, int c, const BigInt& v) { set(r, c, get(r, c) + v); }

BigInt SparseIntMatrix::get(int r, int c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? BigInt(0) : it->second;
}

SparseIntMatrix SparseIntMatrix::identity(int n) {
    SparseIntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

SparseIntMatrix SparseIntMatrix::transposed() const {
    SparseIntMatrix m(cols_, rows_);
    for (const auto& [rc, v] : entries_) m.set(rc.second, rc.first, v);
    return m;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& o) const {
    if (cols_ != o.rows_) throw InvalidInput("matrix product: dimension mismatch");
    SparseIntMatrix out(rows_, o.cols_);
    std::map<std::pair<int, int>, BigInt> acc;
    for (const auto& [rc, v] : entries_) {
        auto lo = o.entries_.lower_bound({rc.second, 0});
        auto hi = o.entries_.lower_bound({rc.second + 1, 0});
        for (auto it = lo; it != hi; ++it) acc[{rc.first, it->first.second}] += v * it->second;
    }
    for (auto& [rc, v] : acc)
        if (v != 0) out.set(rc.first, rc.second, std::move(v));
    return out;
}

namespace {

struct Work {
    int rows, cols;
    std::vector<std::unordered_map<int, BigInt>> row;
    std::vector<std::unordered_set<int>> col_rows;

    explicit Work(const SparseIntMatrix& m) : rows(m.rows()), cols(m.cols()), row(m.rows()), col_rows(m.cols()) {
        for (const auto& [rc, v] : m.entries()) {
            row[rc.first][rc.second] = v;
            col_rows[rc.second].insert(rc.first);
        }
    }
    BigInt get(int r, int c) const {
        auto it = row[r].find(c);
        return it == row[r].end() ? BigInt(0) : it->second;
    }
    void set(int r, int c, BigInt v) {
        if (v == 0) {
            row[r].erase(c);
            col_rows[c].erase(r);
        } else {
            row[r][c] = std::move(v);
            col_rows[c].insert(r);
        }
    }
    void row_op(int r, int r2, const BigInt& k) {  // row r += k * row r2, r != r2
        if (k == 0) return;
        auto src = row[r2];
        for (const auto& [c, v] : src) set(r, c, get(r, c) + k * v);
    }
    void col_op(int c, int c2, const BigInt& k) {
        if (k == 0) return;
        auto rows_c2 = col_rows[c2];
        for (int r : rows_c2) set(r, c, get(r, c) + k * get(r, c2));
    }
    void negate_row(int r) {
        for (auto& [c, v] : row[r]) v = -v;
    }
    void swap_rows(int a, int b) {
        if (a == b) return;
        for (const auto& [c, v] : row[a]) col_rows[c].erase(a);
        for (const auto& [c, v] : row[b]) col_rows[c].erase(b);
        std::swap(row[a], row[b]);
        for (const auto& [c, v] : row[a]) col_rows[c].insert(a);
        for (const auto& [c, v] : row[b]) col_rows[c].insert(b);
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        auto ra = col_rows[a], rb = col_rows[b];
        std::unordered_map<int, BigInt> va, vb;
        for (int r : ra) va[r] = get(r, a);
        for (int r : rb) vb[r] = get(r, b);
        for (int r : ra) set(r, a, 0);
        for (int r : rb) set(r, b, 0);
        for (auto& [r, v] : vb) set(r, a, std::move(v));
        for (auto& [r, v] : va) set(r, b, std::move(v));
    }
};

}  // namespace

SmithResult smith(const SparseIntMatrix& m, bool with_transforms) {
    Work w(m);
    const int R = m.rows(), C = m.cols();
    Work wu(SparseIntMatrix::identity(R)), wv(SparseIntMatrix::identity(C));

    int k = 0;
    while (true) {
        // Markowitz fill-minimizing pivot with magnitude, then position,
        // tie-breaks; deterministic
        std::optional<std::tuple<long long, BigInt, int, int>> best;
        for (int r = k; r < R; ++r) {
            for (const auto& [c, v] : w.row[r]) {
                if (c < k) continue;
                long long cost = (long long)(w.row[r].size() - 1) * ((long long)w.col_rows[c].size() - 1);
                auto cand = std::make_tuple(cost, BigInt(abs(v)), r, c);
                if (!best || cand < *best) best = cand;
            }
        }
        if (!best) break;
        w.swap_rows(k, std::get<2>(*best));
        wu.swap_rows(k, std::get<2>(*best));
        w.swap_cols(k, std::get<3>(*best));
        wv.swap_cols(k, std::get<3>(*best));

        while (true) {
            bool dirty = false;
            auto rows_k = std::vector<int>(w.col_rows[k].begin(), w.col_rows[k].end());
            std::sort(rows_k.begin(), rows_k.end());
            for (int r : rows_k) {
                if (r <= k) continue;
                BigInt q = w.get(r, k) / w.get(k, k);
                w.row_op(r, k, -q);
                wu.row_op(r, k, -q);
                if (w.get(r, k) != 0) {
                    w.swap_rows(k, r);
                    wu.swap_rows(k, r);
                }
                dirty = true;
            }
            std::vector<int> cols_k;
            for (const auto& [c, v] : w.row[k])
                if (c > k) cols_k.push_back(c);
            std::sort(cols_k.begin(), cols_k.end());
            for (int c : cols_k) {
                BigInt q = w.get(k, c) / w.get(k, k);
                w.col_op(c, k, -q);
                wv.col_op(c, k, -q);
                if (w.get(k, c) != 0) {
                    w.swap_cols(k, c);
                    wv.swap_cols(k, c);
                }
                dirty = true;
            }
            if (!dirty) break;
        }
        ++k;
    }

    // divisibility chain
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                BigInt a = w.get(i, i), b = w.get(j, j);
                if (b % a == 0) continue;
                changed = true;
                w.col_op(i, j, 1);
                wv.col_op(i, j, 1);
                while (w.get(j, i) != 0) {
                    BigInt q = w.get(i, i) == 0 ? BigInt(0) : w.get(j, i) / w.get(i, i);
                    if (q != 0) {
                        w.row_op(j, i, -q);
                        wu.row_op(j, i, -q);
                    }
                    if (w.get(j, i) != 0) {
                        w.swap_rows(i, j);
                        wu.swap_rows(i, j);
                    }
                }
                BigInt q2 = w.get(i, j) / w.get(i, i);
                w.col_op(j, i, -q2);
                wv.col_op(j, i, -q2);
                if (w.get(i, j) != 0) throw InternalError("smith: divisibility pass failed");
            }
        }
    }
    for (int i = 0; i < k; ++i) {
        if (w.get(i, i) < 0) {
            w.negate_row(i);
            wu.negate_row(i);
        }
    }

    SmithResult res;
    res.rank = k;
    for (int i = 0; i < k; ++i) res.invariant_factors.push_back(w.get(i, i));
    if (with_transforms) {
        SparseIntMatrix Um(R, R), Vm(C, C);
        for (int r = 0; r < R; ++r)
            for (const auto& [c, v] : wu.row[r]) Um.set(r, c, v);
        for (int r = 0; r < C; ++r)
            for (const auto& [c, v] : wv.row[r]) Vm.set(r, c, v);
        res.U = std::move(Um);
        res.V = std::move(Vm);
    }
    return res;
}

std::optional<std::vector<BigInt>> solve_z(const SparseIntMatrix& a, const std::vector<BigInt>& b) {
    if ((int)b.size() != a.rows()) throw InvalidInput("solve_z: dimension mismatch");
    SmithResult s = smith(a, true);
    // U a V = D, so a x = b becomes D y = U b with x = V y
    std::vector<BigInt> ub(a.rows(), 0);
    for (const auto& [rc, v] : s.U->entries()) ub[rc.first] += v * b[rc.second];
    std::vector<BigInt> y(a.cols(), 0);
    for (int i = 0; i < a.rows(); ++i) {
        if (i < s.rank) {
            const BigInt& d = s.invariant_factors[i];
            if (ub[i] % d != 0) return std::nullopt;
            y[i] = ub[i] / d;
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<BigInt> x(a.cols(), 0);
    for (const auto& [rc, v] : s.V->entries()) x[rc.first] += v * y[rc.second];
    return x;
}

HomologySummary homology_at(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out) {
    if (d_in.rows() != d_out.cols()) throw InvalidInput("homology_at: non-composable differentials");
    if (d_in.nnz() > 0 && d_out.nnz() > 0) {
        if ((d_out * d_in).nnz() != 0) throw InvalidInput("homology_at: differential does not square to zero");
    }
    int mid = d_in.rows();
    SmithResult si = smith(d_in, false);
    SmithResult so = smith(d_out, false);
    HomologySummary h;
    h.free_rank = mid - so.rank - si.rank;
    if (h.free_rank < 0) throw InternalError("homology_at: negative free rank");
    // torsion of ker/im equals torsion of Z^mid / im since the ambient
    // quotient's torsion lives inside the kernel
    for (const auto& f : si.invariant_factors)
        if (f > 1) h.torsion.push_back(f);
    return h;
}

}  // namespace platkh
