#include "platkh/complex.hpp"

#include <algorithm>

#include "platkh/engine.hpp"

namespace platkh {

void ChainComplex::set_entry(int s, int t, LinComb v) {
    if (v.is_zero())
        diff.erase({s, t});
    else
        diff[{s, t}] = std::move(v);
}

void ChainComplex::validate() const {
    for (const auto& [st, v] : diff) {
        auto [s, t] = st;
        if (s < 0 || s >= size() || t < 0 || t >= size()) throw ValidationError("differential index out of range");
        if (terms[t].hdeg != terms[s].hdeg + 1)
            throw ValidationError("entry " + std::to_string(s) + "->" + std::to_string(t) + " does not raise hdeg by 1");
        if (v.is_zero()) continue;
        if (v.bottom() != terms[s].obj || v.top() != terms[t].obj)
            throw ValidationError("entry " + std::to_string(s) + "->" + std::to_string(t) + " has wrong objects");
        int want_j = terms[t].jshift - terms[s].jshift;
        for (const auto& [d, p] : v.terms())
            for (const auto& [m, c] : p.terms())
                if (grade_of(d, m).J != want_j)
                    throw ValidationError("entry " + std::to_string(s) + "->" + std::to_string(t) +
                                          " not J-homogeneous of degree " + std::to_string(want_j));
    }
    // d^2 = 0
    std::map<std::pair<int, int>, LinComb> sq;
    for (const auto& [st1, f] : diff)
        for (const auto& [st2, g] : diff) {
            if (st1.second != st2.first) continue;
            auto key = std::make_pair(st1.first, st2.second);
            LinComb prod = compose(g, f);
            auto it = sq.find(key);
            if (it == sq.end())
                sq.emplace(key, std::move(prod));
            else
                it->second += prod;
        }
    for (const auto& [st, v] : sq)
        if (!v.is_zero())
            throw ValidationError("d^2 != 0 at " + std::to_string(st.first) + "->" + std::to_string(st.second) +
                                  ": residue " + v.str());
}

void ChainMap::validate() const {
    if (!source || !target) throw ValidationError("chain map without endpoints");
    for (const auto& [st, v] : comps) {
        auto [s, t] = st;
        if (source->terms[s].hdeg != target->terms[t].hdeg) throw ValidationError("chain map component changes hdeg");
        if (!v.is_zero() && (v.bottom() != source->terms[s].obj || v.top() != target->terms[t].obj))
            throw ValidationError("chain map component has wrong objects");
    }
    // f d_src = d_tgt f
    std::map<std::pair<int, int>, LinComb> lhs, rhs;
    for (const auto& [st1, d] : source->diff)
        for (const auto& [st2, f] : comps) {
            if (st1.second != st2.first) continue;
            auto key = std::make_pair(st1.first, st2.second);
            LinComb prod = compose(f, d);
            auto it = lhs.find(key);
            if (it == lhs.end())
                lhs.emplace(key, std::move(prod));
            else
                it->second += prod;
        }
    for (const auto& [st1, f] : comps)
        for (const auto& [st2, d] : target->diff) {
            if (st1.second != st2.first) continue;
            auto key = std::make_pair(st1.first, st2.second);
            LinComb prod = compose(d, f);
            auto it = rhs.find(key);
            if (it == rhs.end())
                rhs.emplace(key, std::move(prod));
            else
                it->second += prod;
        }
    for (const auto& [k, v] : lhs) {
        auto it = rhs.find(k);
        LinComb diff = it == rhs.end() ? v : v - it->second;
        if (!diff.is_zero()) throw ValidationError("chain map does not commute with differentials");
    }
    for (const auto& [k, v] : rhs)
        if (lhs.find(k) == lhs.end() && !v.is_zero()) throw ValidationError("chain map does not commute with differentials");
}

ChainComplex cone(const ChainMap& f) {
    f.validate();
    const ChainComplex& X = *f.source;
    const ChainComplex& Y = *f.target;
    ChainComplex c;
    int nx = X.size();
    // the source complex shifts down one homological degree
    for (const auto& t : X.terms) c.terms.push_back({t.obj, t.jshift, t.hdeg - 1});
    for (const auto& t : Y.terms) c.terms.push_back(t);
    for (const auto& [st, v] : X.diff) c.set_entry(st.first, st.second, -v);
    for (const auto& [st, v] : Y.diff) c.set_entry(nx + st.first, nx + st.second, v);
    for (const auto& [st, v] : f.comps) c.set_entry(st.first, nx + st.second, v);
    return c;
}

namespace {

// place one diagram beside spectator blacks: identity on the added strands
LinComb extend_by_identity(const LinComb& v, const ObjectTheta& merged_bottom, const ObjectTheta& merged_top,
                           const std::vector<int>& strand_of) {
    // strand_of: strand index in the merged bottom for each original strand
    LinComb out = LinComb::zero(merged_bottom, merged_top);
    for (const auto& [d, c] : v.terms()) {
        std::vector<Event> word;
        for (Event e : realization_word(d)) {
            e.s = strand_of[e.s];
            if (e.kind == EventKind::BB) e.t = strand_of[e.t];
            word.push_back(e);
        }
        out += normalize_word(merged_bottom, word).scaled(c);
    }
    return out;
}

// Side-by-side merge; where both factors occupy a segment the first
// factor's blacks sit to the left, which keeps every per-factor red crossing
// end-adjacent and introduces no crossings.
ObjectTheta merge_objects(const ObjectTheta& a, const ObjectTheta& b) {
    if (a.config != b.config) throw InvalidInput("product: mismatched red configurations");
    std::vector<int> seg(a.seg.size());
    for (size_t k = 0; k < seg.size(); ++k) seg[k] = a.seg[k] + b.seg[k];
    return ObjectTheta(a.config, seg);
}

// strand indices of a's blacks (then b's) inside the merged object
std::pair<std::vector<int>, std::vector<int>> merged_strands(const ObjectTheta& a, const ObjectTheta& b,
                                                             const ObjectTheta& merged) {
    std::vector<int> ia, ib;
    int pos = 0;
    for (int k = 0; k < merged.num_segments(); ++k) {
        for (int j = 0; j < a.seg[k]; ++j) ia.push_back(pos + j);
        for (int j = 0; j < b.seg[k]; ++j) ib.push_back(pos + a.seg[k] + j);
        pos += merged.seg[k];
    }
    return {ia, ib};
}

}  // namespace

ChainComplex product_complex(const ChainComplex& c1, const ChainComplex& c2) {
    if (c1.is_zero() || c2.is_zero()) return {};
    ChainComplex out;
    std::map<std::pair<int, int>, int> index;
    for (int i = 0; i < c1.size(); ++i)
        for (int j = 0; j < c2.size(); ++j) {
            index[{i, j}] = out.size();
            ObjectTheta merged = merge_objects(c1.terms[i].obj, c2.terms[j].obj);
            out.terms.push_back(
                {merged, c1.terms[i].jshift + c2.terms[j].jshift, c1.terms[i].hdeg + c2.terms[j].hdeg});
        }
    for (int i = 0; i < c1.size(); ++i)
        for (int j = 0; j < c2.size(); ++j) {
            const ObjectTheta& bot = out.terms[index[{i, j}]].obj;
            // d1 (x) 1
            for (const auto& [st, v] : c1.diff) {
                if (st.first != i) continue;
                const ObjectTheta& top = out.terms[index[{st.second, j}]].obj;
                auto [ia, ib] = merged_strands(c1.terms[i].obj, c2.terms[j].obj, bot);
                LinComb ext = extend_by_identity(v, bot, top, ia);
                out.set_entry(index[{i, j}], index[{st.second, j}],
                              out.entry(index[{i, j}], index[{st.second, j}])
                                  ? *out.entry(index[{i, j}], index[{st.second, j}]) + ext
                                  : ext);
            }
            // (-1)^{hdeg1} (x) d2
            for (const auto& [st, v] : c2.diff) {
                if (st.first != j) continue;
                const ObjectTheta& top = out.terms[index[{i, st.second}]].obj;
                auto [ia, ib] = merged_strands(c1.terms[i].obj, c2.terms[j].obj, bot);
                LinComb ext = extend_by_identity(v, bot, top, ib);
                if (c1.terms[i].hdeg % 2 != 0) ext = -ext;
                out.set_entry(index[{i, j}], index[{i, st.second}],
                              out.entry(index[{i, j}], index[{i, st.second}])
                                  ? *out.entry(index[{i, j}], index[{i, st.second}]) + ext
                                  : ext);
            }
        }
    return out;
}

ChainComplex simplify(const ChainComplex& input) {
    ChainComplex c = input;
    while (true) {
        // find the lowest (source, target) entry equal to +-identity
        std::optional<std::pair<int, int>> pivot;
        int sign = 1;
        for (const auto& [st, v] : c.diff) {
            if (v.size() != 1) continue;
            const auto& [d, p] = *v.terms().begin();
            if (!d.is_identity()) continue;
            if (!p.is_unit_integer()) continue;
            pivot = st;
            sign = (int)p.constant_coefficient();
            break;
        }
        if (!pivot) break;
        auto [X, Y] = *pivot;
        // zig-zag correction: d'(s,t) = d(s,t) - d(X,t) phi^{-1} d(s,Y)
        ChainComplex next;
        std::vector<int> keep;
        std::map<int, int> remap;
        for (int i = 0; i < c.size(); ++i) {
            if (i == X || i == Y) continue;
            remap[i] = (int)next.terms.size();
            next.terms.push_back(c.terms[i]);
            keep.push_back(i);
        }
        for (int s : keep)
            for (int t : keep) {
                if (c.terms[t].hdeg != c.terms[s].hdeg + 1) continue;
                LinComb total;
                bool have = false;
                if (const LinComb* v = c.entry(s, t)) {
                    total = *v;
                    have = true;
                }
                const LinComb* sy = c.entry(s, Y);
                const LinComb* xt = c.entry(X, t);
                if (sy && xt) {
                    LinComb corr = compose(*xt, *sy).scaled(Poly2(-sign));
                    if (have)
                        total += corr;
                    else {
                        total = std::move(corr);
                        have = true;
                    }
                }
                if (have && !total.is_zero()) next.set_entry(remap[s], remap[t], std::move(total));
            }
        c = std::move(next);
    }
    return c;
}

BigradedZComplex hom_eval_simple(const ChainComplex& c) {
    BigradedZComplex z;
    if (c.is_zero()) return z;
    ObjectTheta cup = cup_object(c.terms[0].obj.n_pairs());
    std::map<int, int> gen_index;  // term index -> index within its (h, J) group
    for (int i = 0; i < c.size(); ++i) {
        if (c.terms[i].obj != cup) continue;
        auto key = std::make_pair(c.terms[i].hdeg, c.terms[i].jshift);
        gen_index[i] = z.gens[key]++;
    }
    for (const auto& [st, v] : c.diff) {
        auto si = gen_index.find(st.first);
        auto ti = gen_index.find(st.second);
        if (si == gen_index.end() || ti == gen_index.end()) continue;
        long long lambda = v.identity_coefficient().eval_at_one();
        if (lambda == 0) continue;
        // contravariant: the entry s -> t induces gen(t) -> gen(s)
        const Term& s = c.terms[st.first];
        const Term& t = c.terms[st.second];
        if (s.jshift != t.jshift)
            throw ValidationError("hom_eval_simple: identity component between different J-shifts");
        z.diff[{t.hdeg, t.jshift, ti->second, si->second}] += lambda;
        if (z.diff[{t.hdeg, t.jshift, ti->second, si->second}] == 0)
            z.diff.erase({t.hdeg, t.jshift, ti->second, si->second});
    }
    return z;
}

std::map<std::pair<int, int>, HomologySummary> bigraded_homology(const BigradedZComplex& z) {
    std::map<std::pair<int, int>, HomologySummary> out;
    auto rank_at = [&](int h, int j) {
        auto it = z.gens.find({h, j});
        return it == z.gens.end() ? 0 : it->second;
    };
    for (const auto& [hj, count] : z.gens) {
        auto [h, j] = hj;
        // differential lowers h by one at fixed J: in at (h+1) -> h, out h -> (h-1)
        SparseIntMatrix d_in(count, rank_at(h + 1, j));
        SparseIntMatrix d_out(rank_at(h - 1, j), count);
        for (const auto& [key, v] : z.diff) {
            auto [hh, jj, from, to] = key;
            if (jj != j) continue;
            if (hh == h + 1) d_in.set(to, from, v);
            if (hh == h) d_out.set(to, from, v);
        }
        HomologySummary hs = homology_at(d_in, d_out);
        if (hs.free_rank != 0 || !hs.torsion.empty()) out[{h, j}] = hs;
    }
    return out;
}

std::string ChainComplex::summary() const {
    std::map<int, int> byh;
    for (const auto& t : terms) byh[t.hdeg]++;
    std::string out = "terms=" + std::to_string(terms.size()) + " entries=" + std::to_string(diff.size()) + " [";
    for (auto& [h, n] : byh) out += " h" + std::to_string(h) + ":" + std::to_string(n);
    return out + " ]";
}

}  // namespace platkh
