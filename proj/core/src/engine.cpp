#include "platkh/engine.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <mutex>
#include <optional>

// Canonical forms are realized geometrically: a basis diagram is the
// straight-line arrangement of its strands in the universal cover of the
// cylinder (cut at the base point), under a deterministic layout of endpoint
// coordinates.  Appending a generator deforms the arrangement by moving one
// top endpoint; every moment where a black/black crossing slides across a
// red line is a wall.  Walls where the two strands cross the red in opposite
// directions emit the u*hbar correction of the crossing-sweep relation;
// same-direction walls are plain isotopies.  Bigon annihilations fire the
// double-crossing and red-bigon relations, and dots slide to the strand
// bottoms through the dot-pass-crossing relations.  All coordinates are
// exact rationals, so event detection is never approximate.

namespace platkh {

namespace {

using boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

int sgn(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

cpp_int floor_div(const cpp_int& a, const cpp_int& b) {
    cpp_int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

long ifloor(const Rat& x) {
    return floor_div(numerator(x), denominator(x)).convert_to<long>();
}

struct Line {
    Rat A;  // x at h = 0 (lift 0 of the bottom point)
    Rat B;  // x at h = 1, lifted
};

struct Arrangement {
    ObjectTheta bottom, top;
    std::vector<int> match, wind;
    int L = 0;
    std::vector<Line> lines;
};

struct TCross {
    Rat h;
    EventKind kind;
    int s = -1, t = -1;  // BB: s < t, crossing of line_s with line_t + lift*L
    int lift = 0;        // BB: lift of t; RB/PHI: lift index of the vertical
    int red = 0;
    int dir = 0;  // RB/PHI: +1 when the strand crosses rightward
    Rat x;
};

RelationSigns g_relation_signs;

std::mutex g_memo_mutex;
std::map<NormalDiagram, Arrangement> g_arr_memo;
std::map<std::pair<NormalDiagram, Event>, LinComb> g_mul_memo;

// ---------------------------------------------------------------------------
// layouts and arrangements

std::vector<Rat> layout_positions(const ObjectTheta& obj, int attempt, bool is_top) {
    std::vector<Rat> xs;
    int g = 0;  // global index, so no two strands perturb identically
    for (int k = 0; k < obj.num_segments(); ++k) {
        int c = obj.seg[k];
        for (int j = 0; j < c; ++j, ++g) {
            Rat base = Rat(k) + Rat(j + 1, c + 1);
            // strictly convex in the global index, so no difference pattern
            // repeats along a segment
            long qb = (long)(g + 1) * (g + 1);
            long qt = (long)(g + 2) * (2 * g + 1);
            Rat skew = is_top ? Rat(qt, (c + 1) * (c + 1) * 257) : Rat(qb, (c + 1) * (c + 1) * 521);
            long mult = is_top ? (5 * g + 3) * (g + 2) : (3 * g + 2) * (g + 1);
            Rat pert = Rat(attempt * mult, (c + 1) * (c + 1) * 65537 * 8);
            xs.push_back(base + skew + pert);
        }
    }
    return xs;
}

NormalDiagram class_key(const NormalDiagram& d) {
    NormalDiagram k = d;
    std::fill(k.dots.begin(), k.dots.end(), 0);
    return k;
}

std::vector<TCross> arrangement_crossings(const Arrangement& ar) {
    const int d = (int)ar.lines.size();
    const int L = ar.L;
    std::vector<TCross> out;
    if (d == 0) return out;
    Rat lo = ar.lines[0].A, hi = ar.lines[0].A;
    for (const auto& l : ar.lines) {
        lo = std::min({lo, l.A, l.B});
        hi = std::max({hi, l.A, l.B});
    }
    long mmin = ifloor((lo - hi) / L) - 1, mmax = ifloor((hi - lo) / L) + 2;
    for (int s = 0; s < d; ++s) {
        const Line& ls = ar.lines[s];
        Rat a = std::min(ls.A, ls.B), b = std::max(ls.A, ls.B);
        for (long v = ifloor(a) + 1; Rat(v) < b; ++v) {
            TCross c;
            c.h = (Rat(v) - ls.A) / (ls.B - ls.A);
            c.x = v;
            c.s = s;
            c.dir = sgn(ls.B - ls.A);
            long r = ((v % L) + L) % L;
            if (r == 0) {
                c.kind = EventKind::PHI;
            } else {
                c.kind = EventKind::RB;
                c.red = (int)r;
            }
            c.lift = (int)floor_div(cpp_int(v), cpp_int(L)).convert_to<long>();
            out.push_back(std::move(c));
        }
        for (int t = s + 1; t < d; ++t) {
            const Line& lt = ar.lines[t];
            for (long m = mmin; m <= mmax; ++m) {
                Rat A2 = lt.A + Rat(m) * L, B2 = lt.B + Rat(m) * L;
                Rat da = ls.A - A2, db = ls.B - B2;
                if (sgn(da) * sgn(db) >= 0) continue;
                TCross c;
                c.kind = EventKind::BB;
                c.s = s;
                c.t = t;
                c.lift = (int)m;
                c.h = da / (da - db);
                c.x = ls.A + c.h * (ls.B - ls.A);
                out.push_back(std::move(c));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const TCross& a, const TCross& b) { return a.h < b.h; });
    return out;
}

bool arrangement_clean(const std::vector<TCross>& cr) {
    for (size_t i = 0; i < cr.size(); ++i) {
        if (cr[i].h <= 0 || cr[i].h >= 1) return false;
        if (i + 1 < cr.size() && cr[i].h == cr[i + 1].h) return false;
        if (cr[i].kind == EventKind::BB && denominator(cr[i].x) == 1) return false;
    }
    return true;
}

Event tcross_to_event(const Arrangement& ar, const TCross& c) {
    if (c.kind == EventKind::BB) {
        // the strand on the left just below the crossing has the larger slope
        Rat slope_s = ar.lines[c.s].B - ar.lines[c.s].A;
        Rat slope_t = ar.lines[c.t].B - ar.lines[c.t].A;
        int left = slope_s > slope_t ? c.s : c.t;
        int right = left == c.s ? c.t : c.s;
        return {EventKind::BB, left, right, 0, 0};
    }
    if (c.kind == EventKind::RB) return {EventKind::RB, c.s, 0, c.red, c.dir};
    return {EventKind::PHI, c.s, 0, 0, c.dir};
}

std::vector<Event> arrangement_events(const Arrangement& ar, const std::vector<TCross>& cr) {
    std::vector<Event> ev;
    ev.reserve(cr.size());
    for (const auto& c : cr) ev.push_back(tcross_to_event(ar, c));
    return ev;
}

Arrangement build_arrangement_attempt(const NormalDiagram& key, int attempt) {
    Arrangement ar;
    ar.bottom = key.bottom;
    ar.top = key.top;
    ar.match = key.match;
    ar.wind = key.wind;
    ar.L = 2 * key.bottom.n_pairs() + 1;
    auto bx = layout_positions(key.bottom, attempt, false);
    auto tx = layout_positions(key.top, attempt, true);
    int d = key.bottom.blacks();
    ar.lines.resize(d);
    for (int s = 0; s < d; ++s) {
        ar.lines[s].A = bx[s];
        ar.lines[s].B = tx[key.match[s]] - Rat(key.wind[s]) * ar.L;
    }
    return ar;
}

const Arrangement& canonical_arrangement(const NormalDiagram& d) {
    NormalDiagram key = class_key(d);
    {
        std::lock_guard lk(g_memo_mutex);
        auto it = g_arr_memo.find(key);
        if (it != g_arr_memo.end()) return it->second;
    }
    for (int attempt = 0; attempt < 500; ++attempt) {
        Arrangement ar = build_arrangement_attempt(key, attempt);
        auto cr = arrangement_crossings(ar);
        if (!arrangement_clean(cr)) continue;
        auto ev = arrangement_events(ar, cr);
        ReplayResult rr = replay(key.bottom, ev);
        if (rr.top != key.top || rr.match != key.match || rr.wind != key.wind)
            throw InternalError("canonical arrangement replay mismatch");
        std::lock_guard lk(g_memo_mutex);
        return g_arr_memo.emplace(key, std::move(ar)).first->second;
    }
    {
        std::string msg = "no clean layout found for diagram class " + key.str();
        Arrangement ar = build_arrangement_attempt(key, 0);
        for (auto& l : ar.lines) msg += "\n  line A=" + l.A.str() + " B=" + l.B.str();
        throw InternalError(msg);
    }
}

std::vector<Event> realization_events(const NormalDiagram& d) {
    const Arrangement& ar = canonical_arrangement(d);
    auto cr = arrangement_crossings(ar);
    std::vector<Event> ev;
    for (size_t s = 0; s < d.dots.size(); ++s)
        for (int k = 0; k < d.dots[s]; ++k) ev.push_back({EventKind::DOT, (int)s, 0, 0, 0});
    auto rest = arrangement_events(ar, cr);
    ev.insert(ev.end(), rest.begin(), rest.end());
    return ev;
}

// delete the crossings listed in `removed` and relabel s<->t above a height
std::vector<Event> surgered_word(const Arrangement& ar, const std::vector<TCross>& cr,
                                 const std::vector<size_t>& removed, const Rat& relabel_above, int s, int t,
                                 const std::vector<int>& dots) {
    std::vector<Event> ev;
    for (size_t i = 0; i < dots.size(); ++i)
        for (int k = 0; k < dots[i]; ++k) ev.push_back({EventKind::DOT, (int)i, 0, 0, 0});
    for (size_t i = 0; i < cr.size(); ++i) {
        if (std::find(removed.begin(), removed.end(), i) != removed.end()) continue;
        Event e = tcross_to_event(ar, cr[i]);
        if (cr[i].h > relabel_above) {
            auto swap_id = [&](int& id) {
                if (id == s) id = t;
                else if (id == t) id = s;
            };
            swap_id(e.s);
            if (e.kind == EventKind::BB) swap_id(e.t);
        }
        ev.push_back(e);
    }
    return ev;
}

// ---------------------------------------------------------------------------

LinComb normalize_impl(const ObjectTheta& bottom, const std::vector<Event>& events);
LinComb normalize_slots(const ObjectTheta& bottom, const std::vector<SliceEvent>& events);
std::vector<SliceEvent> to_slots(const ObjectTheta& bottom, const std::vector<Event>& events);

struct SweepContext {
    const ObjectTheta* bottom;
    const std::vector<int>* dots;
    int L;
};

int count_bb_crossings(const Arrangement& ar, int s, int t) {
    int n = 0;
    for (const auto& c : arrangement_crossings(ar))
        if (c.kind == EventKind::BB && ((c.s == s && c.t == t) || (c.s == t && c.t == s))) ++n;
    return n;
}

int count_red_crossings(const Arrangement& ar, int s, int red) {
    int n = 0;
    for (const auto& c : arrangement_crossings(ar))
        if (c.kind == EventKind::RB && c.s == s && c.red == red) ++n;
    return n;
}

struct MoveOutcome {
    bool alive = true;
    Arrangement after;
};

/// Moves strand j's top endpoint linearly from P to Q against fixed lines,
/// accumulating wall corrections into `acc`.  A designated vertical is the
/// lift an appended red or phi crossing is born or annihilated on; the
/// cancel flag makes a red passage fire the red-bigon relation.
struct Designated {
    EventKind kind;      // BB: endpoint passes another endpoint lift; RB/PHI: a vertical
    Rat coordinate;      // where along the endpoint path the generator is born
    bool cancel = false;
    SliceEvent pending;  // the appended generator, slot form, for pre-birth walls
};

MoveOutcome sweep_move(Arrangement ar, int j, const Rat& P, const Rat& Q, const SweepContext& ctx,
                       const std::optional<Designated>& designated, LinComb& acc) {
    const int d = (int)ar.lines.size();
    const int L = ctx.L;
    if (P == Q) return {true, std::move(ar)};

    struct Crit {
        Rat tau;
        bool pass;
        int u;
        long m;  // lift of u relative to j
        long rho;
        Rat hstar;
    };
    std::vector<Crit> crits;

    Rat lo = std::min(P, Q), hi = std::max(P, Q);
    for (const auto& l : ar.lines) {
        lo = std::min({lo, l.A, l.B});
        hi = std::max({hi, l.A, l.B});
    }
    long mmin = ifloor((lo - hi) / L) - 1, mmax = ifloor((hi - lo) / L) + 2;

    const Rat Aj = ar.lines[j].A;
    for (int u = 0; u < d; ++u) {
        if (u == j) continue;
        for (long m = mmin; m <= mmax; ++m) {
            Rat Au = ar.lines[u].A + Rat(m) * L, Bu = ar.lines[u].B + Rat(m) * L;
            if (Au == Bu) continue;
            Rat a = std::min(Au, Bu), b = std::max(Au, Bu);
            for (long v = ifloor(a) + 1; Rat(v) < b; ++v) {
                if (((v % L) + L) % L == 0) continue;  // phi walls are free
                Rat hstar = (Rat(v) - Au) / (Bu - Au);
                if (hstar <= 0 || hstar >= 1) continue;
                Rat Bstar = Aj + (Rat(v) - Aj) / hstar;
                if (Bstar <= std::min(P, Q) || Bstar >= std::max(P, Q)) continue;
                Rat tau = (Bstar - P) / (Q - P);
                if (tau <= 0 || tau >= 1) continue;
                crits.push_back({tau, false, u, m, v, hstar});
            }
        }
    }
    std::optional<Rat> tau_pass;
    if (designated) {
        const Rat& v = designated->coordinate;
        if (v > std::min(P, Q) && v < std::max(P, Q)) {
            tau_pass = (v - P) / (Q - P);
            crits.push_back({*tau_pass, true, -1, 0, 0, 0});
        }
    }
    std::sort(crits.begin(), crits.end(), [](const Crit& a, const Crit& b) { return a.tau < b.tau; });
    for (size_t i = 0; i + 1 < crits.size(); ++i)
        if (crits[i].tau == crits[i + 1].tau && (crits[i].pass || crits[i + 1].pass))
            throw InternalError("degenerate sweep: wall coincides with passage");

    for (size_t i = 0; i < crits.size(); ++i) {
        const Crit& c = crits[i];
        if (c.pass) {
            if (!designated->cancel) continue;  // crossing born at the top edge
            if (designated->kind == EventKind::RB) {
                // red bigon annihilation: u * dot on the strand
                Rat next = (i + 1 < crits.size()) ? crits[i + 1].tau : Rat(1);
                Rat tau_plus = (c.tau + next) / 2;
                for (int refine = 0; refine < 64; ++refine) {
                    Arrangement a2 = ar;
                    a2.lines[j].B = P + tau_plus * (Q - P);
                    auto cr2 = arrangement_crossings(a2);
                    if (!arrangement_clean(cr2)) {
                        tau_plus = (c.tau + tau_plus) / 2;
                        continue;
                    }
                    auto ev = surgered_word(a2, cr2, {}, Rat(2), 0, 0, *ctx.dots);
                    ev.push_back({EventKind::DOT, j, 0, 0, 0});
                    acc += normalize_impl(*ctx.bottom, ev).scaled(Poly2::u());
                    return {false, {}};
                }
                throw InternalError("degenerate sweep: no clean post-passage sample");
            }
            return {false, {}};  // double crossing annihilation handled by caller
        }
        int dir_u = sgn(ar.lines[c.u].B - ar.lines[c.u].A);
        Rat Bj_star = P + c.tau * (Q - P);
        int dir_j = sgn(Bj_star - Aj);
        if (dir_u == dir_j) continue;  // same-direction triple point: isotopy

        Rat prev = (i > 0) ? crits[i - 1].tau : Rat(0);
        Rat lo_tau = (prev + c.tau) / 2;
        bool emitted = false;
        for (int refine = 0; refine < 64 && !emitted; ++refine) {
            Arrangement a1 = ar;
            a1.lines[j].B = P + lo_tau * (Q - P);
            auto cr1 = arrangement_crossings(a1);
            if (!arrangement_clean(cr1)) {
                lo_tau = (lo_tau + c.tau) / 2;
                continue;
            }
            // locate the wall trio; the crossing is identified by its exact
            // lift translate, which the wall enumeration fixed
            std::optional<size_t> bb;
            const long m = c.m;
            for (size_t q = 0; q < cr1.size(); ++q) {
                const TCross& t = cr1[q];
                if (t.kind != EventKind::BB) continue;
                bool fwd = (t.s == j && t.t == c.u && t.lift == m);
                bool rev = (t.s == c.u && t.t == j && t.lift == -m);
                if (fwd || rev) {
                    if (bb) throw InternalError("sweep: ambiguous wall crossing");
                    bb = q;
                }
            }
            if (!bb) throw InternalError("sweep: missing wall crossing");
            long rho_u = c.rho - m * L;
            int red = (int)(((c.rho % L) + L) % L);
            std::optional<size_t> rb_j, rb_u;
            for (size_t q = 0; q < cr1.size(); ++q) {
                const TCross& t = cr1[q];
                if (t.kind != EventKind::RB || t.red != red) continue;
                if (t.s == j && t.x == Rat(c.rho)) rb_j = q;
                if (t.s == c.u && t.x == Rat(rho_u)) rb_u = q;
            }
            if (!rb_j || !rb_u) throw InternalError("sweep: missing wall red crossings");
            std::vector<size_t> trio{*bb, *rb_j, *rb_u};
            Rat hmin = cr1[trio[0]].h, hmax = hmin;
            for (size_t q : trio) {
                hmin = std::min(hmin, cr1[q].h);
                hmax = std::max(hmax, cr1[q].h);
            }
            bool separated = true;
            for (size_t q = 0; q < cr1.size() && separated; ++q) {
                if (std::find(trio.begin(), trio.end(), q) != trio.end()) continue;
                const TCross& t = cr1[q];
                bool involves = (t.s == j || t.s == c.u || (t.kind == EventKind::BB && (t.t == j || t.t == c.u)));
                if (involves && t.h >= hmin && t.h <= hmax) separated = false;
            }
            if (!separated) {
                lo_tau = (lo_tau + c.tau) / 2;
                continue;
            }
            // the crossing-sweep relation: routing with the crossing right of
            // the red equals the left routing plus u*hbar times the smoothed
            // diagram, so the emitted sign depends only on the passage side
            int passage_dx = sgn(Rat(c.rho) - cr1[*bb].x);
            int sign = -g_relation_signs.braid_red * passage_dx;
            auto ev = surgered_word(a1, cr1, trio, hmax, j, c.u, *ctx.dots);
            // a wall firing before the appended generator is born applies the
            // relation underneath it, so the generator still sits on top
            auto slots = to_slots(*ctx.bottom, ev);
            if (designated && tau_pass && c.tau < *tau_pass) slots.push_back(designated->pending);
            acc += normalize_slots(*ctx.bottom, slots).scaled(Poly2(sign, Mono2{1, 1}));
            emitted = true;
        }
        if (!emitted) throw InternalError("degenerate sweep: trio never separated");
    }
    ar.lines[j].B = Q;
    return {true, std::move(ar)};
}

/// Order-preserving relayout of several endpoints; paths never cross red or
/// phi lifts (they stay inside segment interiors), so only walls fire.
bool relayout(Arrangement& ar, std::vector<std::pair<int, Rat>> targets, const SweepContext& ctx, LinComb& acc) {
    auto blocker = [&](int j, const Rat& P, const Rat& Q) -> std::optional<Rat> {
        std::optional<Rat> first;
        Rat lo = std::min(P, Q), hi = std::max(P, Q);
        for (int u = 0; u < (int)ar.lines.size(); ++u) {
            if (u == j) continue;
            Rat b = ar.lines[u].B;
            long m0 = ifloor((lo - b) / ctx.L) - 1;
            for (long m = m0; m <= m0 + 4; ++m) {
                Rat lift = b + Rat(m) * ctx.L;
                if (lift > lo && lift < hi)
                    if (!first || abs(lift - P) < abs(*first - P)) first = lift;
            }
        }
        return first;
    };
    size_t guard = 0;
    while (!targets.empty()) {
        if (++guard > 2000) throw InternalError("relayout failed to converge");
        bool progressed = false;
        for (size_t i = 0; i < targets.size(); ++i) {
            auto [j, Q] = targets[i];
            Rat P = ar.lines[j].B;
            if (P == Q) {
                targets.erase(targets.begin() + i);
                progressed = true;
                break;
            }
            if (!blocker(j, P, Q)) {
                auto out = sweep_move(std::move(ar), j, P, Q, ctx, std::nullopt, acc);
                if (!out.alive) return false;
                ar = std::move(out.after);
                targets.erase(targets.begin() + i);
                progressed = true;
                break;
            }
        }
        if (progressed) continue;
        auto [j, Q] = targets.front();
        Rat P = ar.lines[j].B;
        Rat mid = (P + *blocker(j, P, Q)) / 2;
        auto out = sweep_move(std::move(ar), j, P, mid, ctx, std::nullopt, acc);
        if (!out.alive) return false;
        ar = std::move(out.after);
    }
    return true;
}

LinComb append_event_impl(const NormalDiagram& dgm, const Event& e) {
    const ObjectTheta& bottom = dgm.bottom;

    std::vector<Event> word = realization_events(dgm);
    word.push_back(e);
    ReplayResult target = replay(bottom, word);  // validates applicability

    if (e.kind == EventKind::DOT) {
        NormalDiagram main = dgm;
        main.dots[e.s]++;
        LinComb res = LinComb::single(main);
        const Arrangement& ar = canonical_arrangement(dgm);
        auto cr = arrangement_crossings(ar);
        for (size_t i = 0; i < cr.size(); ++i) {
            const TCross& c = cr[i];
            if (c.kind != EventKind::BB || (c.s != e.s && c.t != e.s)) continue;
            int other = (c.s == e.s) ? c.t : c.s;
            Rat slope_s = ar.lines[e.s].B - ar.lines[e.s].A;
            Rat slope_o = ar.lines[other].B - ar.lines[other].A;
            int sign = (slope_s < slope_o ? +1 : -1) * g_relation_signs.dot_slide;
            auto ev = surgered_word(ar, cr, {i}, c.h, e.s, other, dgm.dots);
            res += normalize_impl(bottom, ev).scaled(Poly2(sign, Mono2{0, 1}));
        }
        return res;
    }

    NormalDiagram tgt_class;
    tgt_class.bottom = bottom;
    tgt_class.top = target.top;
    tgt_class.match = target.match;
    tgt_class.wind = target.wind;
    tgt_class.dots = dgm.dots;

    const Arrangement src0 = canonical_arrangement(dgm);
    const Arrangement tgt = canonical_arrangement(tgt_class);

    SweepContext ctx{&bottom, &dgm.dots, src0.L};
    LinComb acc = LinComb::zero(bottom, target.top);
    Arrangement cur = src0;

    if (e.kind == EventKind::BB) {
        int s = e.s, t = e.t;
        bool cancel = count_bb_crossings(tgt, s, t) < count_bb_crossings(src0, s, t);
        int m_pass = dgm.wind[t] - dgm.wind[s];
        Rat P = cur.lines[s].B;
        Rat t_lift = cur.lines[t].B + Rat(m_pass) * ctx.L;
        Designated des{EventKind::BB, t_lift, cancel, SliceEvent{EventKind::BB, dgm.match[s], 0}};
        if (cancel) {
            // the appended crossing annihilates against the existing one when
            // the endpoint reaches t's position; walls before that survive
            sweep_move(std::move(cur), s, P, t_lift, ctx, des, acc);
            return acc;
        }
        Rat W = t_lift + (t_lift - P) / 97;
        auto out = sweep_move(std::move(cur), s, P, W, ctx, des, acc);
        if (!out.alive) throw InternalError("bb growth move died");
        cur = std::move(out.after);
    } else {
        int s = e.s;
        Rat P = cur.lines[s].B;
        long v = e.dir > 0 ? ifloor(P) + 1 : ifloor(P);
        long want = (e.kind == EventKind::RB) ? e.red : 0;
        if (((v % ctx.L) + ctx.L) % ctx.L != want) throw InternalError("designated lift mismatch");
        bool cancel = false;
        if (e.kind == EventKind::RB) cancel = count_red_crossings(tgt, s, e.red) < count_red_crossings(src0, s, e.red);
        SliceEvent pend = (e.kind == EventKind::RB) ? SliceEvent{EventKind::RB, e.red, e.dir}
                                                    : SliceEvent{EventKind::PHI, 0, e.dir};
        Designated des{e.kind, Rat(v), cancel && e.kind == EventKind::RB, pend};
        auto out = sweep_move(std::move(cur), s, P, tgt.lines[s].B, ctx, des, acc);
        if (!out.alive) return acc;  // converted by the red bigon
        cur = std::move(out.after);
    }

    std::vector<std::pair<int, Rat>> moves;
    for (int u = 0; u < (int)cur.lines.size(); ++u)
        if (cur.lines[u].B != tgt.lines[u].B) moves.push_back({u, tgt.lines[u].B});
    if (!relayout(cur, std::move(moves), ctx, acc)) throw InternalError("relayout move died");

    acc += LinComb::single(tgt_class);
    return acc;
}

LinComb mul_memoized(const NormalDiagram& d, const Event& e) {
    {
        std::lock_guard lk(g_memo_mutex);
        auto it = g_mul_memo.find({d, e});
        if (it != g_mul_memo.end()) return it->second;
    }
    LinComb part = append_event_impl(d, e);
    std::lock_guard lk(g_memo_mutex);
    return g_mul_memo.emplace(std::make_pair(d, e), std::move(part)).first->second;
}

// Events are glued on positionally: a slot event is re-resolved against each
// term's own strand arrival order, since correction terms route strands
// differently.
Event resolve_on_top(const NormalDiagram& d, const SliceEvent& se) {
    // a fresh state ids strands by position, so translate through the match
    ReplayState st(d.top);
    std::vector<int> by_pos(d.match.size());
    for (size_t i = 0; i < d.match.size(); ++i) by_pos[d.match[i]] = (int)i;
    Event e = st.resolve(se);
    e.s = by_pos[e.s];
    if (e.kind == EventKind::BB) e.t = by_pos[e.t];
    return e;
}

std::vector<SliceEvent> to_slots(const ObjectTheta& bottom, const std::vector<Event>& events) {
    ReplayState st(bottom);
    std::vector<SliceEvent> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        switch (e.kind) {
            case EventKind::BB:
                out.push_back({EventKind::BB, st.position_of(e.s), 0});
                break;
            case EventKind::RB:
                out.push_back({EventKind::RB, e.red, e.dir});
                break;
            case EventKind::PHI:
                out.push_back({EventKind::PHI, 0, e.dir});
                break;
            case EventKind::DOT:
                out.push_back({EventKind::DOT, st.position_of(e.s), 0});
                break;
        }
        st.apply(e);
    }
    return out;
}

LinComb normalize_slots(const ObjectTheta& bottom, const std::vector<SliceEvent>& events) {
    // validate and find the final object up front
    ObjectTheta fin_top = [&] {
        ReplayState st(bottom);
        for (size_t i = 0; i < events.size(); ++i) {
            try {
                st.apply(st.resolve(events[i]));
            } catch (const InvalidInput& err) {
                throw InvalidInput("event " + std::to_string(i) + ": " + err.what());
            }
        }
        return st.object();
    }();
    LinComb acc = LinComb::identity(bottom);
    for (const auto& se : events) {
        if (acc.is_zero()) break;
        LinComb next;
        for (const auto& [d, c] : acc.terms()) next += mul_memoized(d, resolve_on_top(d, se)).scaled(c);
        acc = next.objects_known() ? std::move(next) : LinComb();
    }
    if (acc.is_zero()) return LinComb::zero(bottom, fin_top);
    return acc;
}

LinComb normalize_impl(const ObjectTheta& bottom, const std::vector<Event>& events) {
    return normalize_slots(bottom, to_slots(bottom, events));
}

}  // namespace

RelationSigns& relation_signs() { return g_relation_signs; }

LinComb normalize_word(const ObjectTheta& bottom, const std::vector<Event>& events) {
    return normalize_impl(bottom, events);
}

LinComb normalize(const SliceWord& word) { return normalize_slots(word.bottom, word.events); }

std::vector<Event> realization_word(const NormalDiagram& d) { return realization_events(d); }

LinComb append_event(const NormalDiagram& d, const Event& e) { return mul_memoized(d, e); }

LinComb compose(const LinComb& g, const LinComb& f) {
    if (f.objects_known() && g.objects_known() && f.top() != g.bottom())
        throw InvalidInput("compose: object mismatch");
    LinComb res;
    if (f.objects_known() && g.objects_known()) res = LinComb::zero(f.bottom(), g.top());
    for (const auto& [df, cf] : f.terms()) {
        std::vector<Event> base = realization_events(df);
        std::vector<int> pos_to_strand(df.match.size());
        for (size_t i = 0; i < df.match.size(); ++i) pos_to_strand[df.match[i]] = (int)i;
        for (const auto& [dg, cg] : g.terms()) {
            std::vector<Event> word = base;
            for (Event e : realization_events(dg)) {
                e.s = pos_to_strand[e.s];
                if (e.kind == EventKind::BB) e.t = pos_to_strand[e.t];
                word.push_back(e);
            }
            res += normalize_impl(df.bottom, word).scaled(cf * cg);
        }
    }
    return res;
}

namespace {

SliceWord flip_word(const ObjectTheta& bot, const std::vector<Event>& evs, const ObjectTheta& top) {
    ReplayState st(bot);
    struct Slotted {
        EventKind kind;
        int a, dir;
    };
    std::vector<Slotted> slots;
    for (const auto& e : evs) {
        switch (e.kind) {
            case EventKind::BB:
                slots.push_back({EventKind::BB, st.position_of(e.s), 0});
                break;
            case EventKind::RB:
                slots.push_back({EventKind::RB, e.red, e.dir});
                break;
            case EventKind::PHI:
                slots.push_back({EventKind::PHI, 0, e.dir});
                break;
            case EventKind::DOT:
                slots.push_back({EventKind::DOT, st.position_of(e.s), 0});
                break;
        }
        st.apply(e);
    }
    SliceWord out;
    out.bottom = top;
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
        SliceEvent se;
        se.kind = it->kind;
        se.a = it->a;
        se.dir = (it->kind == EventKind::RB || it->kind == EventKind::PHI) ? -it->dir : 0;
        out.events.push_back(se);
    }
    return out;
}

}  // namespace

LinComb normalize_transposed(const SliceWord& word) {
    auto ev = resolve_events(word);
    ReplayResult rr = replay(word.bottom, ev);
    LinComb mid = normalize(flip_word(word.bottom, ev, rr.top));
    LinComb res = LinComb::zero(word.bottom, rr.top);
    for (const auto& [d, c] : mid.terms())
        res += normalize(flip_word(d.bottom, realization_events(d), d.top)).scaled(c);
    return res;
}

GradeVector grade_of(const NormalDiagram& d) {
    // crossing counts are routing-invariant, any layout serves
    Arrangement ar = build_arrangement_attempt(class_key(d), 0);
    GradeVector g;
    for (const auto& c : arrangement_crossings(ar)) {
        if (c.kind == EventKind::BB) g = g + kGradeBb;
        else if (c.kind == EventKind::RB) g = g + kGradeRb;
    }
    for (size_t i = 0; i < d.dots.size(); ++i) {
        for (int k = 0; k < d.dots[i]; ++k) g = g + kGradeDot;
        g.C += d.wind[i];
    }
    return g;
}

GradeVector grade_of(const NormalDiagram& d, const Mono2& m) { return grade_of(d) + grade_of_monomial(m); }

GradeVector grade_of(const LinComb& c) {
    std::optional<GradeVector> g;
    for (const auto& [d, p] : c.terms())
        for (const auto& [m, coef] : p.terms()) {
            GradeVector gi = grade_of(d, m);
            if (!g)
                g = gi;
            else if (*g != gi)
                throw InvalidInput("grade_of: inhomogeneous combination");
        }
    if (!g) throw InvalidInput("grade_of: zero combination has no degree");
    return *g;
}

bool is_homogeneous(const LinComb& c) {
    std::optional<GradeVector> g;
    for (const auto& [d, p] : c.terms())
        for (const auto& [m, coef] : p.terms()) {
            GradeVector gi = grade_of(d, m);
            if (!g)
                g = gi;
            else if (*g != gi)
                return false;
        }
    return true;
}

std::vector<std::pair<GradeVector, LinComb>> homogeneous_parts(const LinComb& c) {
    std::map<GradeVector, LinComb> buckets;
    for (const auto& [d, p] : c.terms())
        for (const auto& [m, coef] : p.terms()) {
            auto [it, fresh] = buckets.emplace(grade_of(d, m), LinComb::zero(c.bottom(), c.top()));
            it->second.add(d, Poly2(coef, m));
        }
    return {buckets.begin(), buckets.end()};
}

std::vector<std::pair<NormalDiagram, Mono2>> basis_in_degree(const ObjectTheta& bottom, const ObjectTheta& top,
                                                             const GradeVector& g) {
    std::vector<std::pair<NormalDiagram, Mono2>> out;
    int d = bottom.blacks();
    if (top.blacks() != d || bottom.config != top.config) return out;
    if (d == 0) {
        if (g == GradeVector{}) {
            NormalDiagram nd;
            nd.bottom = bottom;
            nd.top = top;
            out.push_back({nd, Mono2{}});
        }
        return out;
    }
    int n2 = 2 * bottom.n_pairs();
    int wcap = std::max(0, g.u2) / std::max(1, n2) + 2;

    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    do {
        std::vector<int> w(d, -wcap);
        while (true) {
            int csum = 0;
            for (int x : w) csum += x;
            if (csum == g.C) {
                NormalDiagram nd;
                nd.bottom = bottom;
                nd.top = top;
                nd.match = perm;
                nd.wind = w;
                nd.dots.assign(d, 0);
                GradeVector base = grade_of(nd);
                int twoD = g.J - base.J;
                if (twoD >= 0 && twoD % 2 == 0) {
                    int D = twoD / 2;
                    int twob = g.u2 - base.u2 - 2 * D;
                    int a = g.hbar - base.hbar + D;
                    if (twob >= 0 && twob % 2 == 0 && a >= 0) {
                        int b = twob / 2;
                        std::vector<int> dots(d, 0);
                        std::function<void(int, int)> rec = [&](int pos, int left) {
                            if (pos == d - 1) {
                                dots[pos] = left;
                                NormalDiagram nn = nd;
                                nn.dots = dots;
                                out.push_back({nn, Mono2{a, b}});
                                dots[pos] = 0;
                                return;
                            }
                            for (int k = 0; k <= left; ++k) {
                                dots[pos] = k;
                                rec(pos + 1, left - k);
                            }
                            dots[pos] = 0;
                        };
                        rec(0, D);
                    }
                }
            }
            int i = 0;
            while (i < d && w[i] == wcap) w[i++] = -wcap;
            if (i == d) break;
            w[i]++;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace platkh
