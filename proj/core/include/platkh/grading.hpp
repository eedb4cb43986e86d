#pragma once

#include <string>

#include "poly2.hpp"

namespace platkh {

/// The four gradings carried by morphisms: J (Jones), doubled u-degree,
/// hbar-degree, and the winding grading C.  u-degree is stored doubled so a
/// single red-black crossing (u-degree 1/2) stays integral.
struct GradeVector {
    int J = 0;
    int u2 = 0;
    int hbar = 0;
    int C = 0;

    friend auto operator<=>(const GradeVector&, const GradeVector&) = default;
    GradeVector operator+(const GradeVector& o) const { return {J + o.J, u2 + o.u2, hbar + o.hbar, C + o.C}; }
    GradeVector operator-(const GradeVector& o) const { return {J - o.J, u2 - o.u2, hbar - o.hbar, C - o.C}; }
    GradeVector operator-() const { return {-J, -u2, -hbar, -C}; }

    std::string str() const {
        return "(J=" + std::to_string(J) + ",u2=" + std::to_string(u2) + ",hb=" + std::to_string(hbar) +
               ",C=" + std::to_string(C) + ")";
    }
};

// Generator degrees.  Derived from the rescaling weights: red-black crossings,
// black-black crossings and dots rescale independently, and the three named
// gradings are the combinations fixing u, fixing hbar, and fixing both.
inline constexpr GradeVector kGradeRb{1, 1, 0, 0};
inline constexpr GradeVector kGradeBb{-2, 0, 1, 0};
inline constexpr GradeVector kGradeDot{2, 2, -1, 0};
inline constexpr GradeVector kGradeU{0, 0, 1, 0};
inline constexpr GradeVector kGradeHbar{0, 2, 0, 0};

inline GradeVector grade_of_monomial(const Mono2& m) {
    return {0, 2 * m.h, m.u, 0};
}

}  // namespace platkh
