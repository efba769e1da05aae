#pragma once

#include <vector>

#include "robotval/stl/formula.hpp"
#include "robotval/stl/trace.hpp"

namespace robotval::stl {

struct Robustness {
  double value = 0;
  bool truncated = false;  ///< some window reached past the end of the trace and was cut
};

/// Quantitative semantics at time t. Windows [t+a, t+b] are evaluated at their
/// endpoints and at the sample instants between them, clipped to the trace end.
/// Throws SpecError for unknown signals and TruncationError when a window starts
/// after the trace ends.
Robustness robustness(const StlFormula& phi, const Trace& trace, double t = 0);

struct Satisfaction {
  bool value = false;
  bool truncated = false;
};

/// Boolean semantics over the same evaluation points. Atoms are read
/// non-strictly: `x > c` holds when x >= c, `x < c` when x <= c.
Satisfaction satisfies(const StlFormula& phi, const Trace& trace, double t = 0);

/// Evaluation points of the window [t+a, t+b]: both endpoints and the samples
/// strictly inside, ascending, clipped to the trace. Endpoints within 1e-9 s of a
/// sample are moved onto it.
std::vector<double> windowPoints(const Trace& trace, double from, double to, bool& truncated);

}  // namespace robotval::stl
