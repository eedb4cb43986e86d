#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace platkh {

struct ArithmeticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("integer overflow in +");
    return r;
}
inline int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("integer overflow in *");
    return r;
}

/// Monomial u^a hbar^b.  Exponents are never negative: the category's
/// coefficient ring is Z[u,hbar], neither parameter is ever inverted.
struct Mono2 {
    int u = 0;
    int h = 0;
    friend auto operator<=>(const Mono2&, const Mono2&) = default;
    Mono2 operator*(const Mono2& o) const { return {u + o.u, h + o.h}; }
};

/// Element of Z[u, hbar] with exact integer coefficients.
class Poly2 {
  public:
    Poly2() = default;
    explicit Poly2(int64_t c) {
        if (c != 0) terms_[{0, 0}] = c;
    }
    Poly2(int64_t c, Mono2 m) {
        if (c != 0) terms_[m] = c;
    }

    static Poly2 one() { return Poly2(1); }
    static Poly2 u(int pow = 1) { return Poly2(1, {pow, 0}); }
    static Poly2 hbar(int pow = 1) { return Poly2(1, {0, pow}); }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return terms_.size() == 1 && terms_.begin()->first == Mono2{0, 0} && terms_.begin()->second == 1; }

    /// True when the polynomial is a single term +/-1 * u^0 h^0.
    bool is_unit_integer() const {
        if (terms_.size() != 1) return false;
        const auto& [m, c] = *terms_.begin();
        return m == Mono2{0, 0} && (c == 1 || c == -1);
    }

    int64_t constant_coefficient() const {
        auto it = terms_.find({0, 0});
        return it == terms_.end() ? 0 : it->second;
    }

    void add_term(Mono2 m, int64_t c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second = checked_add(it->second, c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly2& operator+=(const Poly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly2 operator+(const Poly2& o) const {
        Poly2 r = *this;
        r += o;
        return r;
    }
    Poly2 operator-() const {
        Poly2 r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    Poly2 operator-(const Poly2& o) const { return *this + (-o); }
    Poly2 operator*(const Poly2& o) const {
        Poly2 r;
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, checked_mul(c1, c2));
        return r;
    }
    Poly2& operator*=(const Poly2& o) { return *this = *this * o; }

    friend bool operator==(const Poly2&, const Poly2&) = default;
    auto operator<=>(const Poly2& o) const {
        return std::lexicographical_compare_three_way(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end());
    }

    /// Evaluate at u = hbar = 1 (the specialization used for the knot invariant).
    int64_t eval_at_one() const {
        int64_t s = 0;
        for (const auto& [m, c] : terms_) s = checked_add(s, c);
        return s;
    }

    const std::map<Mono2, int64_t>& terms() const { return terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            int64_t a = c;
            if (!first) out += (a >= 0 ? " + " : " - ");
            else if (a < 0) out += "-";
            if (a < 0) a = -a;
            bool has_var = m.u || m.h;
            if (a != 1 || !has_var) out += std::to_string(a);
            if (m.u) out += "u" + (m.u > 1 ? "^" + std::to_string(m.u) : "");
            if (m.h) out += "hb" + (m.h > 1 ? "^" + std::to_string(m.h) : "");
            first = false;
        }
        return out;
    }

  private:
    std::map<Mono2, int64_t> terms_;  // no zero coefficients stored
};

}  // namespace platkh
