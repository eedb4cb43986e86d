#include <doctest.h>

#include <platkh/engine.hpp>
#include <platkh/object.hpp>
#include <random>

using namespace platkh;

namespace {

// Applicability-aware random word generator.
struct WordGen {
    std::mt19937 rng;
    explicit WordGen(uint64_t seed) : rng(seed) {}

    ObjectTheta random_object(int n_pairs, int blacks) {
        std::vector<int> seg(2 * n_pairs + 1, 0);
        std::uniform_int_distribution<int> pick(0, 2 * n_pairs - 1);
        for (int i = 0; i < blacks; ++i) seg[pick(rng)]++;
        return ObjectTheta(RedConfig{n_pairs}, seg);
    }

    SliceWord random_word(int n_pairs, int blacks, int len, int dot_weight = 1) {
        SliceWord w;
        w.bottom = random_object(n_pairs, blacks);
        ReplayState st(w.bottom);
        for (int i = 0; i < len; ++i) {
            std::vector<SliceEvent> options;
            const ObjectTheta& obj = st.object();
            int pos = 0;
            for (int k = 0; k < obj.num_segments(); ++k) {
                for (int j = 0; j + 1 < obj.seg[k]; ++j) options.push_back({EventKind::BB, pos + j, 0});
                pos += obj.seg[k];
            }
            for (int k = 1; k <= 2 * n_pairs; ++k) {
                if (obj.seg[k - 1] > 0) options.push_back({EventKind::RB, k, +1});
                if (obj.seg[k] > 0) options.push_back({EventKind::RB, k, -1});
            }
            if (obj.seg[2 * n_pairs] > 0) options.push_back({EventKind::PHI, 0, +1});
            if (obj.seg[0] > 0) options.push_back({EventKind::PHI, 0, -1});
            for (int wgt = 0; wgt < dot_weight; ++wgt)
                if (blacks > 0) options.push_back({EventKind::DOT, (int)(rng() % blacks), 0});
            if (options.empty()) break;
            SliceEvent e = options[rng() % options.size()];
            Event ev = st.resolve(e);
            st.apply(ev);
            w.events.push_back(e);
        }
        return w;
    }
};

}  // namespace

TEST_CASE("confluence probe: two strategies agree on random words") {
    WordGen gen(20240817);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + (int)(gen.rng() % 2);
        int d = 1 + (int)(gen.rng() % 3);
        int len = 2 + (int)(gen.rng() % 7);
        SliceWord w = gen.random_word(n, d, len);
        LinComb a = normalize(w);
        LinComb b = normalize_transposed(w);
        if (!(a == b)) {
            CAPTURE(trial);
            CAPTURE(a.str());
            CAPTURE(b.str());
            REQUIRE(a == b);
        }
    }
}

TEST_CASE("normalize is idempotent on random outputs") {
    WordGen gen(7771);
    for (int trial = 0; trial < 120; ++trial) {
        SliceWord w = gen.random_word(1 + (int)(gen.rng() % 2), 1 + (int)(gen.rng() % 3), 2 + (int)(gen.rng() % 6));
        LinComb a = normalize(w);
        for (const auto& [d, c] : a.terms()) {
            LinComb again = normalize_word(d.bottom, realization_word(d));
            REQUIRE(again.size() == 1);
            CHECK(again.terms().begin()->first == d);
            CHECK(again.terms().begin()->second.is_one());
        }
    }
}

TEST_CASE("composition is associative on random triples") {
    WordGen gen(99102);
    int done = 0;
    while (done < 60) {
        ObjectTheta bot = gen.random_object(2, 2);
        SliceWord w1 = gen.random_word(2, 2, 3);
        w1.bottom = bot;
        // regenerate against the right bottom
        w1 = [&] {
            SliceWord w;
            w.bottom = bot;
            ReplayState st(bot);
            for (int i = 0; i < 3; ++i) {
                SliceWord probe = gen.random_word(2, 2, 1);
                (void)probe;
            }
            return gen.random_word(2, 2, 3);
        }();
        LinComb f = normalize(w1);
        if (f.is_zero()) continue;
        SliceWord w2 = gen.random_word(2, 2, 3);
        w2.bottom = f.top();
        try {
            ReplayState st(w2.bottom);
            for (auto& e : w2.events) st.apply(st.resolve(e));
        } catch (const InvalidInput&) {
            continue;
        }
        LinComb g = normalize(w2);
        if (g.is_zero()) continue;
        SliceWord w3 = gen.random_word(2, 2, 3);
        w3.bottom = g.top();
        try {
            ReplayState st(w3.bottom);
            for (auto& e : w3.events) st.apply(st.resolve(e));
        } catch (const InvalidInput&) {
            continue;
        }
        LinComb h = normalize(w3);
        if (h.is_zero()) continue;
        CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
        ++done;
    }
}

TEST_CASE("relation homogeneity: summands of a normalized word share one grade") {
    WordGen gen(5150);
    for (int trial = 0; trial < 150; ++trial) {
        SliceWord w = gen.random_word(1 + (int)(gen.rng() % 2), 1 + (int)(gen.rng() % 3), 2 + (int)(gen.rng() % 6));
        LinComb a = normalize(w);
        if (a.is_zero()) continue;
        CHECK(is_homogeneous(a));
    }
}

TEST_CASE("grading additivity under composition") {
    WordGen gen(31337);
    int done = 0;
    while (done < 50) {
        SliceWord w1 = gen.random_word(2, 2, 3);
        LinComb f = normalize(w1);
        if (f.is_zero()) continue;
        SliceWord w2 = gen.random_word(2, 2, 3);
        w2.bottom = f.top();
        try {
            ReplayState st(w2.bottom);
            for (auto& e : w2.events) st.apply(st.resolve(e));
        } catch (const InvalidInput&) {
            continue;
        }
        LinComb g = normalize(w2);
        if (g.is_zero()) continue;
        LinComb gf = compose(g, f);
        if (gf.is_zero()) continue;
        CHECK(grade_of(gf) == grade_of(f) + grade_of(g));
        ++done;
    }
}
