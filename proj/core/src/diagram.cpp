#include "platkh/diagram.hpp"

#include <algorithm>

namespace platkh {

ReplayState::ReplayState(const ObjectTheta& bottom) : obj_(bottom) {
    segs_.resize(bottom.num_segments());
    int id = 0;
    for (int k = 0; k < bottom.num_segments(); ++k)
        for (int j = 0; j < bottom.seg[k]; ++j) segs_[k].push_back(id++);
}

int ReplayState::strand_at(int global_pos) const {
    for (const auto& s : segs_) {
        if (global_pos < (int)s.size()) return s[global_pos];
        global_pos -= (int)s.size();
    }
    throw InvalidInput("strand_at: slot out of range");
}

int ReplayState::position_of(int strand) const {
    int base = 0;
    for (const auto& s : segs_) {
        for (int j = 0; j < (int)s.size(); ++j)
            if (s[j] == strand) return base + j;
        base += (int)s.size();
    }
    throw InvalidInput("position_of: unknown strand");
}

void ReplayState::apply(const Event& e) {
    const int nseg = obj_.num_segments();
    switch (e.kind) {
        case EventKind::BB: {
            // strands must be adjacent within one segment, e.s on the left
            for (auto& s : segs_) {
                for (int j = 0; j + 1 < (int)s.size(); ++j) {
                    if (s[j] == e.s && s[j + 1] == e.t) {
                        std::swap(s[j], s[j + 1]);
                        return;
                    }
                }
            }
            throw InvalidInput("bb-cross: strands not adjacent");
        }
        case EventKind::RB: {
            int k = e.red;
            if (k < 1 || k > 2 * obj_.n_pairs()) throw InvalidInput("rb-cross: red index out of range");
            if (e.dir == +1) {
                // segment k-1 -> segment k; strand must be rightmost in k-1
                auto& from = segs_[k - 1];
                if (from.empty() || from.back() != e.s) throw InvalidInput("rb-cross: strand not adjacent to red");
                from.pop_back();
                segs_[k].insert(segs_[k].begin(), e.s);
                obj_.seg[k - 1]--;
                obj_.seg[k]++;
            } else if (e.dir == -1) {
                auto& from = segs_[k];
                if (from.empty() || from.front() != e.s) throw InvalidInput("rb-cross: strand not adjacent to red");
                from.erase(from.begin());
                segs_[k - 1].push_back(e.s);
                obj_.seg[k]--;
                obj_.seg[k - 1]++;
            } else {
                throw InvalidInput("rb-cross: bad direction");
            }
            return;
        }
        case EventKind::PHI: {
            if (e.dir == +1) {
                // rightward across phi: segment 2n -> segment 0
                auto& from = segs_[nseg - 1];
                if (from.empty() || from.back() != e.s) throw InvalidInput("phi-cross: strand not adjacent to phi");
                from.pop_back();
                segs_[0].insert(segs_[0].begin(), e.s);
                obj_.seg[nseg - 1]--;
                obj_.seg[0]++;
            } else if (e.dir == -1) {
                auto& from = segs_[0];
                if (from.empty() || from.front() != e.s) throw InvalidInput("phi-cross: strand not adjacent to phi");
                from.erase(from.begin());
                segs_[nseg - 1].push_back(e.s);
                obj_.seg[0]--;
                obj_.seg[nseg - 1]++;
            } else {
                throw InvalidInput("phi-cross: bad direction");
            }
            return;
        }
        case EventKind::DOT:
            position_of(e.s);  // existence check
            return;
    }
    throw InvalidInput("unknown event kind");
}

Event ReplayState::resolve(const SliceEvent& e) const {
    const int nseg = obj_.num_segments();
    switch (e.kind) {
        case EventKind::BB: {
            int left = strand_at(e.a);
            int right = strand_at(e.a + 1);
            auto [ks, js] = obj_.locate(e.a);
            auto [kt, jt] = obj_.locate(e.a + 1);
            if (ks != kt) throw InvalidInput("bb-cross: slots separated by a red or phi");
            return {EventKind::BB, left, right, 0, 0};
        }
        case EventKind::RB: {
            int k = e.a;
            if (k < 1 || k > 2 * obj_.n_pairs()) throw InvalidInput("rb-cross: red index out of range");
            if (e.dir == +1) {
                if (segs_[k - 1].empty()) throw InvalidInput("rb-cross: no strand left of red");
                return {EventKind::RB, segs_[k - 1].back(), 0, k, +1};
            }
            if (segs_[k].empty()) throw InvalidInput("rb-cross: no strand right of red");
            return {EventKind::RB, segs_[k].front(), 0, k, -1};
        }
        case EventKind::PHI: {
            if (e.dir == +1) {
                if (segs_[nseg - 1].empty()) throw InvalidInput("phi-cross: no strand left of phi");
                return {EventKind::PHI, segs_[nseg - 1].back(), 0, 0, +1};
            }
            if (segs_[0].empty()) throw InvalidInput("phi-cross: no strand right of phi");
            return {EventKind::PHI, segs_[0].front(), 0, 0, -1};
        }
        case EventKind::DOT:
            return {EventKind::DOT, strand_at(e.a), 0, 0, 0};
    }
    throw InvalidInput("unknown event kind");
}

ReplayResult replay(const ObjectTheta& bottom, const std::vector<Event>& events) {
    int d = bottom.blacks();
    ReplayState st(bottom);
    ReplayResult r;
    r.wind.assign(d, 0);
    r.dots.assign(d, 0);
    for (const auto& e : events) {
        st.apply(e);
        if (e.kind == EventKind::PHI) r.wind[e.s] += (e.dir == -1 ? +1 : -1);
        if (e.kind == EventKind::DOT) r.dots[e.s]++;
    }
    r.top = st.object();
    r.match.assign(d, -1);
    for (int i = 0; i < d; ++i) r.match[st.strand_at(i)] = i;
    // r.match currently maps position -> id inverted; fix to id -> position
    std::vector<int> m(d);
    for (int p = 0; p < d; ++p) m[st.strand_at(p)] = p;
    r.match = std::move(m);
    return r;
}

std::vector<Event> resolve_events(const SliceWord& word) {
    ReplayState st(word.bottom);
    std::vector<Event> out;
    out.reserve(word.events.size());
    for (size_t i = 0; i < word.events.size(); ++i) {
        Event ev;
        try {
            ev = st.resolve(word.events[i]);
            st.apply(ev);
        } catch (const InvalidInput& err) {
            throw InvalidInput("event " + std::to_string(i) + ": " + err.what());
        }
        out.push_back(ev);
    }
    return out;
}

NormalDiagram NormalDiagram::identity(const ObjectTheta& obj) {
    NormalDiagram d;
    d.bottom = obj;
    d.top = obj;
    int n = obj.blacks();
    d.match.resize(n);
    for (int i = 0; i < n; ++i) d.match[i] = i;
    d.wind.assign(n, 0);
    d.dots.assign(n, 0);
    return d;
}

bool NormalDiagram::is_identity() const {
    if (bottom != top) return false;
    for (size_t i = 0; i < match.size(); ++i)
        if (match[i] != (int)i || wind[i] != 0 || dots[i] != 0) return false;
    return true;
}

std::string NormalDiagram::str() const {
    std::string out = bottom.str() + " => " + top.str() + " [";
    for (size_t i = 0; i < match.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(i) + "->" + std::to_string(match[i]);
        if (wind[i]) out += "w" + std::to_string(wind[i]);
        if (dots[i]) out += "d" + std::to_string(dots[i]);
    }
    return out + "]";
}

LinComb LinComb::single(const NormalDiagram& d, Poly2 c) {
    LinComb r(d.bottom, d.top);
    r.add(d, c);
    return r;
}

void LinComb::add(const NormalDiagram& d, const Poly2& c) {
    if (!objects_set_) {
        bottom_ = d.bottom;
        top_ = d.top;
        objects_set_ = true;
    } else if (d.bottom != bottom_ || d.top != top_) {
        throw InvalidInput("LinComb: mixed source/target objects");
    }
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(d, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LinComb& LinComb::operator+=(const LinComb& o) {
    for (const auto& [d, c] : o.terms_) add(d, c);
    if (!objects_set_ && o.objects_set_) {
        bottom_ = o.bottom_;
        top_ = o.top_;
        objects_set_ = true;
    }
    return *this;
}

LinComb LinComb::operator-() const {
    LinComb r = *this;
    for (auto& [d, c] : r.terms_) c = -c;
    return r;
}

LinComb LinComb::scaled(const Poly2& c) const {
    LinComb r(bottom_, top_);
    r.objects_set_ = objects_set_;
    if (c.is_zero()) return r;
    for (const auto& [d, p] : terms_) r.add(d, p * c);
    return r;
}

Poly2 LinComb::identity_coefficient() const {
    for (const auto& [d, c] : terms_)
        if (d.is_identity()) return c;
    return Poly2();
}

std::string LinComb::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [d, c] : terms_) {
        if (!out.empty()) out += "  +  ";
        out += "(" + c.str() + ")*" + d.str();
    }
    return out;
}

}  // namespace platkh
