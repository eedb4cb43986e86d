#pragma once

#include <string>

#include "diagram.hpp"

namespace platkh {

/// ASCII strand picture of a basis diagram (bottom line first), for test
/// transcripts and trace dumps.
std::string render(const NormalDiagram& d);
std::string render(const LinComb& c);

}  // namespace platkh
