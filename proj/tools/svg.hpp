#pragma once

#include <string>

#include "droplin/sgd.hpp"
#include "droplin/verify.hpp"

namespace droplin::tool {

// Objective and importance-score variance over training steps, with a
// dashed reference line at the analytic optimum.  Log-scale ordinate
// when every plotted value is positive.
void write_convergence_svg(const std::string& path, const TrainTrace& trace,
                           double optimal, const std::string& title);

// Contour rendering of a landscape grid with the argmin marked.
void write_contour_svg(const std::string& path, const LandscapeGrid& grid,
                       const std::string& title);

}  // namespace droplin::tool
