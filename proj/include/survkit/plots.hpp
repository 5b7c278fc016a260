#pragma once

#include "survkit/explainer.hpp"

#include <string>
#include <vector>

namespace survkit {

enum class PlotKind { bar, distribution };

struct PlotSpec {
  PlotKind kind = PlotKind::bar;
  bool with_colour = true;
  std::string output_path; // empty: return the document only
  std::string title;
};

/// Fig-1 style bar chart of a single explanation, one bar per feature
/// sorted by descending coefficient. Positive coefficients get the red
/// palette, non-positive the blue one (grey throughout when with_colour
/// is off). Returns the SVG document; writes it when output_path is set.
std::string plot_weights(const Explanation& explanation,
                         const std::vector<std::string>& feature_names,
                         const PlotSpec& spec);

/// Distribution chart of Monte-Carlo coefficients: nested quantile boxes
/// (median, quartiles, outer octiles) per feature, ordered by descending
/// median. Quantile values are embedded as data- attributes.
std::string
plot_montecarlo_weights(const MonteCarloExplanation& mc,
                        const std::vector<std::string>& feature_names,
                        const PlotSpec& spec);

// Linear-interpolation sample quantile of a vector, q in [0,1].
double sample_quantile(Vector values, double q);

} // namespace survkit
