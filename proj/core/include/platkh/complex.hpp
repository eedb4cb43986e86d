#pragma once

#include <functional>
#include <map>
#include <vector>

#include "diagram.hpp"
#include "sparse_int.hpp"

namespace platkh {

/// One summand P_theta{jshift} sitting in homological degree hdeg.
struct Term {
    ObjectTheta obj;
    int jshift = 0;
    int hdeg = 0;
    friend auto operator<=>(const Term&, const Term&) = default;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bounded complex of shifted projectives with a sparse differential.
/// Cohomological convention: every entry raises hdeg by one, and every
/// summand of an entry from P{a} to P{b} has J-degree b - a.
class ChainComplex {
  public:
    std::vector<Term> terms;
    std::map<std::pair<int, int>, LinComb> diff;  // (source index, target index)

    int size() const { return (int)terms.size(); }
    const LinComb* entry(int s, int t) const {
        auto it = diff.find({s, t});
        return it == diff.end() ? nullptr : &it->second;
    }
    void set_entry(int s, int t, LinComb v);

    /// Checks degree conventions, J-homogeneity and d^2 = 0; throws
    /// ValidationError naming the first offending entry.
    void validate() const;

    bool is_zero() const { return terms.empty(); }
    std::string summary() const;
};

/// Degree-0 chain map between complexes.
struct ChainMap {
    const ChainComplex* source = nullptr;
    const ChainComplex* target = nullptr;
    std::map<std::pair<int, int>, LinComb> comps;  // (source index, target index)

    void validate() const;  // commutes with differentials
};

/// Mapping cone; the source's terms are shifted up one homological degree
/// (with differential negated).
ChainComplex cone(const ChainMap& f);

/// Side-by-side product: objects merged arc-wise (supports must be disjoint),
/// differential d1 (x) 1 + (-1)^{hdeg1} (x) d2.
ChainComplex product_complex(const ChainComplex& c1, const ChainComplex& c2);

/// Gaussian elimination of +-identity differential entries (coefficient
/// exactly +-1 u^0 hbar^0, single term).  Homotopy-equivalent output;
/// deterministic elimination order.
ChainComplex simplify(const ChainComplex& c);

/// A complex of free Z-modules graded by (hdeg, J): generators with the
/// differential entries evaluated at u = hbar = 1.
struct BigradedZComplex {
    // generator list per (hdeg, J)
    std::map<std::pair<int, int>, int> gens;
    // ((h, J), from index, to index) -> integer; differential lowers h by one
    // (contravariant placement)
    std::map<std::tuple<int, int, int, int>, long long> diff;
};

/// Applies Hom(-, S) for the simple cup module at u = hbar = 1: a term
/// contributes a Z generator at (hdeg, jshift) exactly when its object is the
/// cup configuration, and an entry between two such terms contributes the
/// coefficient of the identity diagram.
BigradedZComplex hom_eval_simple(const ChainComplex& c);

/// Integral homology of the bigraded complex per (h, J).
std::map<std::pair<int, int>, HomologySummary> bigraded_homology(const BigradedZComplex& z);

}  // namespace platkh
