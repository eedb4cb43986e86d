#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "grading.hpp"
#include "object.hpp"
#include "poly2.hpp"

namespace platkh {

/// Elementary diagram events, listed bottom-to-top.  The public (slot-based)
/// form references current positions; replay resolves them to strand ids.
enum class EventKind { BB, RB, PHI, DOT };

struct SliceEvent {
    EventKind kind;
    // BB: a = left slot (crosses blacks at global positions a, a+1)
    // RB: a = red index 1..2n, dir = +1 crossing rightward (segment a-1 -> a),
    //     dir = -1 crossing leftward (segment a -> a-1)
    // PHI: dir = +1 rightward (segment 2n -> 0), dir = -1 leftward (0 -> 2n)
    // DOT: a = slot
    int a = 0;
    int dir = 0;
    friend auto operator<=>(const SliceEvent&, const SliceEvent&) = default;
};

/// A raw (unreduced) strand diagram: a bottom configuration and a list of
/// events whose replay must be consistent.
struct SliceWord {
    ObjectTheta bottom;
    std::vector<SliceEvent> events;
};

/// Internal event form with stable strand ids (id = index of the strand's
/// bottom point in global left-to-right order).
struct Event {
    EventKind kind;
    int s = 0;   // strand id
    int t = 0;   // BB: the other (initially right) strand id
    int red = 0; // RB: red index
    int dir = 0; // RB/PHI direction as above
    friend auto operator<=>(const Event&, const Event&) = default;
};

/// Result of replaying a word: final object plus the matching data.
struct ReplayResult {
    ObjectTheta top;
    std::vector<int> match;  // strand id -> top position
    std::vector<int> wind;   // net leftward phi-crossings per strand
    std::vector<int> dots;   // dots per strand (position along strand ignored)
};

/// Mutable replay state: strand ids per segment, left-to-right.
class ReplayState {
  public:
    explicit ReplayState(const ObjectTheta& bottom);

    const ObjectTheta& object() const { return obj_; }
    int strand_at(int global_pos) const;
    int position_of(int strand) const;
    const std::vector<std::vector<int>>& segments() const { return segs_; }

    /// Applies one strand-id event; throws InvalidInput when not applicable.
    void apply(const Event& e);

    /// Resolves a slot-based event against the current state.
    Event resolve(const SliceEvent& e) const;

  private:
    ObjectTheta obj_;
    std::vector<std::vector<int>> segs_;
};

ReplayResult replay(const ObjectTheta& bottom, const std::vector<Event>& events);

/// Converts a SliceWord to strand-id events (validating as it goes).
std::vector<Event> resolve_events(const SliceWord& word);

/// A basis morphism: a reduced diagram in canonical routing, determined by
/// the matching-with-winding of its strands plus dot multiplicities at the
/// strand bottoms.
struct NormalDiagram {
    ObjectTheta bottom;
    ObjectTheta top;
    std::vector<int> match;  // bottom strand i -> top position
    std::vector<int> wind;   // net leftward phi-crossings of strand i
    std::vector<int> dots;   // dots at the bottom of strand i

    static NormalDiagram identity(const ObjectTheta& obj);

    bool is_identity() const;
    bool is_endomorphism() const { return bottom == top; }

    friend bool operator==(const NormalDiagram&, const NormalDiagram&) = default;
    auto operator<=>(const NormalDiagram& o) const {
        if (auto c = bottom <=> o.bottom; c != 0) return c;
        if (auto c = top <=> o.top; c != 0) return c;
        if (auto c = match <=> o.match; c != 0) return c;
        if (auto c = wind <=> o.wind; c != 0) return c;
        return dots <=> o.dots;
    }

    std::string str() const;
};

/// Finite Z[u,hbar]-combination of basis diagrams sharing source and target.
class LinComb {
  public:
    LinComb() = default;
    LinComb(const ObjectTheta& bottom, const ObjectTheta& top) : bottom_(bottom), top_(top), objects_set_(true) {}

    static LinComb zero(const ObjectTheta& bottom, const ObjectTheta& top) { return LinComb(bottom, top); }
    static LinComb single(const NormalDiagram& d, Poly2 c = Poly2::one());
    static LinComb identity(const ObjectTheta& obj) { return single(NormalDiagram::identity(obj)); }

    void add(const NormalDiagram& d, const Poly2& c);
    LinComb& operator+=(const LinComb& o);
    LinComb operator+(const LinComb& o) const {
        LinComb r = *this;
        r += o;
        return r;
    }
    LinComb operator-() const;
    LinComb operator-(const LinComb& o) const { return *this + (-o); }
    LinComb scaled(const Poly2& c) const;

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<NormalDiagram, Poly2>& terms() const { return terms_; }
    const ObjectTheta& bottom() const { return bottom_; }
    const ObjectTheta& top() const { return top_; }
    bool objects_known() const { return objects_set_; }

    /// Coefficient of the identity diagram (zero unless endomorphism).
    Poly2 identity_coefficient() const;

    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

    std::string str() const;

  private:
    ObjectTheta bottom_, top_;
    bool objects_set_ = false;
    std::map<NormalDiagram, Poly2> terms_;
};

}  // namespace platkh
