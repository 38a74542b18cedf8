#pragma once

#include <string>
#include <vector>

#include "panelcp/analysis.hpp"

namespace panelcp {

/// Small multiples of every series with its change points: solid lines for
/// mean changes, dashed for variance changes.
std::string plot_panel_svg(const Analysis& analysis);

/// One bar per analysis spanning its time range, with its change points
/// marked on it. `names` gives the row captions (defaults to the labels).
std::string plot_timeline_svg(const std::vector<Analysis>& analyses,
                              const std::vector<std::string>& names = {});

}  // namespace panelcp
