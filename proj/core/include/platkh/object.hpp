#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace platkh {

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Red-point data on the circle: n cup pairs means 2n red points, with the
/// base point phi fixed in the arc between red 2n and red 1.  Plat braid
/// generators exchange reds (i, i+1) for 1 <= i <= 2n-1 and never cross phi,
/// which keeps the winding grading unambiguous.
struct RedConfig {
    int n_pairs = 1;

    int red_count() const { return 2 * n_pairs; }
    /// Arc index (between red 2n and red 1) carrying phi.
    int marked_point_arc() const { return 2 * n_pairs; }

    void check() const {
        if (n_pairs < 1) throw InvalidInput("RedConfig: need at least one cup pair");
    }
    friend auto operator<=>(const RedConfig&, const RedConfig&) = default;
};

/// A configuration of black points on the circle, up to isotopy.
///
/// The marked point phi splits the arc (red 2n, red 1) in two, so positions
/// are stored per *segment*: segment 0 = (phi, red 1), segment k =
/// (red k, red k+1) for 1 <= k <= 2n-1, segment 2n = (red 2n, phi).  The
/// spec-level "arc between red 2n and red 1" is the union of segments 2n and
/// 0; objects produced by the pipeline keep that arc's blacks in segment 0.
struct ObjectTheta {
    RedConfig config;
    std::vector<int> seg;  // size 2n+1, counts per segment

    ObjectTheta() = default;
    ObjectTheta(RedConfig c, std::vector<int> s) : config(c), seg(std::move(s)) {
        config.check();
        if ((int)seg.size() != 2 * config.n_pairs + 1) throw InvalidInput("ObjectTheta: wrong segment count");
        for (int v : seg)
            if (v < 0) throw InvalidInput("ObjectTheta: negative count");
    }

    int n_pairs() const { return config.n_pairs; }
    int num_segments() const { return (int)seg.size(); }
    int blacks() const { return std::accumulate(seg.begin(), seg.end(), 0); }

    /// Per-arc counts in the 2n-arc view (arc k between red k and red k+1,
    /// 1-based; arc 2n wraps through phi).
    std::vector<int> blacks_per_arc() const {
        std::vector<int> a(2 * config.n_pairs);
        for (int k = 1; k < 2 * config.n_pairs; ++k) a[k - 1] = seg[k];
        a[2 * config.n_pairs - 1] = seg[2 * config.n_pairs] + seg[0];
        return a;
    }

    /// Segment of the p-th black point (global left-to-right order on the cut
    /// line), plus its index within the segment.
    std::pair<int, int> locate(int p) const {
        for (int k = 0; k < (int)seg.size(); ++k) {
            if (p < seg[k]) return {k, p};
            p -= seg[k];
        }
        throw InvalidInput("ObjectTheta::locate: position out of range");
    }
    int segment_start(int k) const {
        int s = 0;
        for (int i = 0; i < k; ++i) s += seg[i];
        return s;
    }

    friend bool operator==(const ObjectTheta&, const ObjectTheta&) = default;
    auto operator<=>(const ObjectTheta& o) const {
        if (auto c = config <=> o.config; c != 0) return c;
        return seg <=> o.seg;
    }

    std::string str() const {
        std::string out = "|";
        for (int k = 0; k < (int)seg.size(); ++k) {
            for (int j = 0; j < seg[k]; ++j) out += "*";
            if (k == 0 || k == (int)seg.size() - 1)
                out += (k == (int)seg.size() - 1 ? "|" : "r");
            else
                out += "r";
        }
        return out;
    }
};

/// The cup object: one black point between each adjacent red pair
/// (2i-1, 2i), i.e. in every odd segment.
inline ObjectTheta cup_object(int n_pairs) {
    RedConfig c{n_pairs};
    std::vector<int> seg(2 * n_pairs + 1, 0);
    for (int i = 1; i <= n_pairs; ++i) seg[2 * i - 1] = 1;
    return ObjectTheta(c, std::move(seg));
}

}  // namespace platkh
