#pragma once

#include <string>
#include <vector>

#include "ridgeboost/sim.hpp"

namespace ridgeboost {

/// Coverage against sample size, one panel per target mu, naive and boosted
/// series, dashed rule at the nominal 0.95. The plotted values are repeated
/// as XML comments so the file doubles as a data record.
std::string coverage_figure_svg(const std::vector<sim::CoverageRow>& rows);

}  // namespace ridgeboost
