#pragma once

#include <vector>

#include "diagram.hpp"
#include "grading.hpp"

namespace platkh {

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Signs of the two sign-carrying local relations.  Flipping one is used by
/// the self-check machinery to prove the test suites are sensitive to them;
/// production code never touches these.
struct RelationSigns {
    int braid_red = +1;  // sign of the u*hbar term in the crossing-sweep relation
    int dot_slide = +1;  // sign of the hbar term in the dot-pass-crossing relations
};
RelationSigns& relation_signs();

/// Rewrites a raw diagram to its canonical expansion in the NormalDiagram
/// basis.  Idempotent on basis diagrams; throws InvalidInput on inconsistent
/// words.
LinComb normalize(const SliceWord& word);

/// Strand-id entry point (events already resolved against `bottom`).
LinComb normalize_word(const ObjectTheta& bottom, const std::vector<Event>& events);

/// Alternative rewrite strategy (processes the diagram upside down through
/// the transpose anti-automorphism).  Used by the confluence probe; must
/// agree with normalize on every input.
LinComb normalize_transposed(const SliceWord& word);

/// Stacks g on top of f and normalizes.  Requires top(f) == bottom(g).
LinComb compose(const LinComb& g, const LinComb& f);

/// Multiplies a basis diagram by one more event appended at the top.
LinComb append_event(const NormalDiagram& d, const Event& e);

/// Degree of a basis diagram (sum of its generator degrees).
GradeVector grade_of(const NormalDiagram& d);
/// Degree of one summand diagram * monomial.
GradeVector grade_of(const NormalDiagram& d, const Mono2& m);
/// Degree of a homogeneous LinComb; throws InvalidInput when mixed.
GradeVector grade_of(const LinComb& c);
bool is_homogeneous(const LinComb& c);

/// The canonical event word realizing a basis diagram (dots first, then the
/// canonical routing, bottom to top).
std::vector<Event> realization_word(const NormalDiagram& d);

/// All basis elements (diagram, monomial) from bottom to top of total degree
/// exactly g.
std::vector<std::pair<NormalDiagram, Mono2>> basis_in_degree(const ObjectTheta& bottom, const ObjectTheta& top,
                                                             const GradeVector& g);

/// Splits a LinComb into (u2, hbar, C)-homogeneous parts keyed by grade;
/// J is constant per part as well.
std::vector<std::pair<GradeVector, LinComb>> homogeneous_parts(const LinComb& c);

}  // namespace platkh
