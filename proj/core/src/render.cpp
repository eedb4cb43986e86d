#include "platkh/render.hpp"

#include "platkh/engine.hpp"

namespace platkh {

namespace {

// one text column per site: phi, arcs interleaved with reds, phi
std::string object_row(const ObjectTheta& obj) {
    std::string out = "|";
    for (int k = 0; k < obj.num_segments(); ++k) {
        out += " ";
        for (int j = 0; j < obj.seg[k]; ++j) out += "*";
        if (obj.seg[k] == 0) out += ".";
        out += (k + 1 < obj.num_segments()) ? " r" : " |";
    }
    return out;
}

}  // namespace

std::string render(const NormalDiagram& d) {
    ReplayState st(d.bottom);
    std::string out = object_row(d.bottom) + "\n";
    for (const auto& e : realization_word(d)) {
        switch (e.kind) {
            case EventKind::DOT:
                out += "      dot on strand " + std::to_string(e.s) + "\n";
                break;
            case EventKind::BB:
                out += "      strands " + std::to_string(e.s) + " x " + std::to_string(e.t) + "\n";
                break;
            case EventKind::RB:
                out += "      strand " + std::to_string(e.s) + (e.dir > 0 ? " -> across red " : " <- across red ") +
                       std::to_string(e.red) + "\n";
                break;
            case EventKind::PHI:
                out += "      strand " + std::to_string(e.s) + (e.dir > 0 ? " -> across phi" : " <- across phi") + "\n";
                break;
        }
        st.apply(e);
        out += object_row(st.object()) + "\n";
    }
    return out;
}

std::string render(const LinComb& c) {
    if (c.is_zero()) return "0\n";
    std::string out;
    for (const auto& [d, p] : c.terms()) {
        out += "coefficient " + p.str() + ":\n" + render(d);
    }
    return out;
}

}  // namespace platkh
