#include "survkit/plots.hpp"
#include "survkit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace survkit {

double sample_quantile(Vector values, double q) {
  if (values.size() == 0)
    throw invariant_error("quantile of empty vector");
  std::sort(values.data(), values.data() + values.size());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values(lo) + frac * (values(hi) - values(lo));
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMarginLeft = 120.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 30.0;

// red palette for CHF-increasing features, blue for the rest
const char* kReds[] = {"#b2182b", "#d6604d", "#f4a582"};
const char* kBlues[] = {"#2166ac", "#4393c3", "#92c5de"};
constexpr const char* kGrey = "#999999";

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string feature_label(const std::vector<std::string>& names,
                          Eigen::Index j) {
  if (j < static_cast<Eigen::Index>(names.size()))
    return names[static_cast<std::size_t>(j)];
  return "x" + std::to_string(j + 1);
}

const char* bar_colour(double value, bool with_colour, int rank,
                       int palette_size) {
  if (!with_colour)
    return kGrey;
  const int idx = std::min(rank, palette_size - 1);
  return value > 0.0 ? kReds[idx] : kBlues[idx];
}

struct ValueScale {
  double vmin, vmax, x0, x1;
  double to_x(double v) const {
    return x0 + (v - vmin) / (vmax - vmin) * (x1 - x0);
  }
};

ValueScale make_scale(double vmin, double vmax) {
  if (vmin > 0.0)
    vmin = 0.0;
  if (vmax < 0.0)
    vmax = 0.0;
  if (vmin == vmax) { // all zeros
    vmin = -1.0;
    vmax = 1.0;
  }
  const double pad = 0.05 * (vmax - vmin);
  return {vmin - pad, vmax + pad, kMarginLeft, kWidth - kMarginRight};
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_double(kWidth) << "\" height=\"" << format_double(kHeight)
      << "\" viewBox=\"0 0 " << format_double(kWidth) << " "
      << format_double(kHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << format_double(kWidth / 2.0)
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << xml_escape(title) << "</text>\n";
}

void draw_zero_line(std::ostringstream& out, const ValueScale& scale) {
  const double x = scale.to_x(0.0);
  out << "<line class=\"zero-line\" x1=\"" << format_double(x) << "\" y1=\""
      << format_double(kMarginTop) << "\" x2=\"" << format_double(x)
      << "\" y2=\"" << format_double(kHeight - kMarginBottom)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
}

void draw_label(std::ostringstream& out, const std::string& label,
                double y_center) {
  out << "<text x=\"" << format_double(kMarginLeft - 8.0) << "\" y=\""
      << format_double(y_center + 4.0)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << xml_escape(label) << "</text>\n";
}

} // namespace

std::string plot_weights(const Explanation& explanation,
                         const std::vector<std::string>& feature_names,
                         const PlotSpec& spec) {
  if (spec.kind != PlotKind::bar)
    throw invariant_error("plot_weights expects a bar PlotSpec");
  const Vector& coefs = explanation.coefficients;
  const Eigen::Index p = coefs.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return coefs(a) > coefs(b);
  });

  const ValueScale scale = make_scale(coefs.minCoeff(), coefs.maxCoeff());
  const double band = (kHeight - kMarginTop - kMarginBottom) /
                      static_cast<double>(p);
  const double bar_h = band * 0.7;

  std::ostringstream out;
  open_svg(out, spec.title);
  draw_zero_line(out, scale);

  int pos_rank = 0, neg_rank = 0;
  for (Eigen::Index r = 0; r < p; ++r) {
    const Eigen::Index j = order[static_cast<std::size_t>(r)];
    const double v = coefs(j);
    const double y = kMarginTop + static_cast<double>(r) * band +
                     (band - bar_h) / 2.0;
    const double x_zero = scale.to_x(0.0);
    const double x_val = scale.to_x(v);
    const double x = std::min(x_zero, x_val);
    const double w = std::abs(x_val - x_zero);
    const int rank = v > 0.0 ? pos_rank++ : neg_rank++;
    out << "<rect class=\"bar\" data-feature=\""
        << xml_escape(feature_label(feature_names, j))
        << "\" data-coefficient=\"" << format_double(v) << "\" x=\""
        << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
        << format_double(w) << "\" height=\"" << format_double(bar_h)
        << "\" fill=\"" << bar_colour(v, spec.with_colour, rank, 3)
        << "\"/>\n";
    draw_label(out, feature_label(feature_names, j), y + bar_h / 2.0);
  }
  out << "</svg>\n";

  const std::string doc = out.str();
  if (!spec.output_path.empty())
    write_file_atomic(spec.output_path, doc);
  return doc;
}

std::string
plot_montecarlo_weights(const MonteCarloExplanation& mc,
                        const std::vector<std::string>& feature_names,
                        const PlotSpec& spec) {
  if (spec.kind != PlotKind::distribution)
    throw invariant_error("plot_montecarlo_weights expects a distribution "
                          "PlotSpec");
  if (mc.per_repetition.rows() < 1)
    throw invariant_error("no repetitions to plot");

  const Eigen::Index p = mc.per_repetition.cols();
  Vector medians(p), q25(p), q75(p), q125(p), q875(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Vector col = mc.per_repetition.col(j);
    medians(j) = sample_quantile(col, 0.5);
    q25(j) = sample_quantile(col, 0.25);
    q75(j) = sample_quantile(col, 0.75);
    q125(j) = sample_quantile(col, 0.125);
    q875(j) = sample_quantile(col, 0.875);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return medians(a) > medians(b);
  });

  const ValueScale scale = make_scale(q125.minCoeff(), q875.maxCoeff());
  const double band = (kHeight - kMarginTop - kMarginBottom) /
                      static_cast<double>(p);

  std::ostringstream out;
  open_svg(out, spec.title);
  draw_zero_line(out, scale);

  int pos_rank = 0, neg_rank = 0;
  for (Eigen::Index r = 0; r < p; ++r) {
    const Eigen::Index j = order[static_cast<std::size_t>(r)];
    const double yc = kMarginTop + (static_cast<double>(r) + 0.5) * band;
    const int rank = medians(j) > 0.0 ? pos_rank++ : neg_rank++;
    const char* colour = bar_colour(medians(j), spec.with_colour, rank, 3);

    out << "<g class=\"boxen\" data-feature=\""
        << xml_escape(feature_label(feature_names, j)) << "\" data-median=\""
        << format_double(medians(j)) << "\" data-q25=\""
        << format_double(q25(j)) << "\" data-q75=\"" << format_double(q75(j))
        << "\" data-q125=\"" << format_double(q125(j)) << "\" data-q875=\""
        << format_double(q875(j)) << "\">\n";
    // outer octile box, thin
    out << "<rect x=\"" << format_double(scale.to_x(q125(j))) << "\" y=\""
        << format_double(yc - band * 0.12) << "\" width=\""
        << format_double(scale.to_x(q875(j)) - scale.to_x(q125(j)))
        << "\" height=\"" << format_double(band * 0.24) << "\" fill=\""
        << colour << "\" fill-opacity=\"0.45\"/>\n";
    // quartile box
    out << "<rect x=\"" << format_double(scale.to_x(q25(j))) << "\" y=\""
        << format_double(yc - band * 0.22) << "\" width=\""
        << format_double(scale.to_x(q75(j)) - scale.to_x(q25(j)))
        << "\" height=\"" << format_double(band * 0.44) << "\" fill=\""
        << colour << "\" fill-opacity=\"0.8\"/>\n";
    // median tick
    out << "<line x1=\"" << format_double(scale.to_x(medians(j)))
        << "\" y1=\"" << format_double(yc - band * 0.28) << "\" x2=\""
        << format_double(scale.to_x(medians(j))) << "\" y2=\""
        << format_double(yc + band * 0.28)
        << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
    out << "</g>\n";
    draw_label(out, feature_label(feature_names, j), yc);
  }
  out << "</svg>\n";

  const std::string doc = out.str();
  if (!spec.output_path.empty())
    write_file_atomic(spec.output_path, doc);
  return doc;
}

} // namespace survkit
