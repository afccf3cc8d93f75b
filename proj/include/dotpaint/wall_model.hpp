// Online piecewise-linear estimate of the wall surface from contact points:
// discrepancy test against the active segment, split-vs-regress update, and
// the y-only projection of upcoming targets onto the active segment.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "dotpaint/geometry.hpp"

namespace dotpaint {

// Line in slope-intercept form, y = slope * x + intercept (localization frame).
struct Line2 {
    double slope = 0.0;
    double intercept = 0.0;

    double y_at(double x) const { return slope * x + intercept; }
};

struct WallSegment {
    Line2 line;
    std::vector<int> support;  // 1-based contact indices used to fit the line
    std::vector<Point2> points;  // the contact points behind `support`
};

class VerticalLine : public std::runtime_error {
  public:
    VerticalLine() : std::runtime_error("slope-intercept line undefined: x-values coincide") {}
};

struct WallModel {
    std::vector<WallSegment> segments;  // ordered by creation
    double epsilon_bar = 0.05;          // split threshold, meters

    const WallSegment& active() const { return segments.back(); }
};

/// Exact line through two points. Throws VerticalLine when a.x == b.x.
Line2 two_point_line(const Point2& a, const Point2& b);

/// Ordinary least-squares line. Throws VerticalLine when all x coincide.
Line2 ols_line(std::span<const Point2> points);

/// Gap between where the current segment predicts the contact (evaluated at
/// the commanded x) and the measured contact height.
double prediction_error(const Line2& current, double ref_x, double contact_y);

/// Model from the first two contacts: one segment through both.
WallModel init_wall_model(const Point2& c1, const Point2& c2, double epsilon_bar);

/// Folds contact i (i >= 3) into the model: appends a fresh two-point segment
/// when the discrepancy reaches epsilon_bar, otherwise refits the active
/// segment over its support plus the new contact. Earlier segments are never
/// touched.
WallModel update_wall_model(WallModel model, int contact_index, const Point2& ref_rho,
                            const Point2& contact_rho, const Point2& prev_contact_rho);

/// Pulls a target onto the active segment; only the y coordinate moves.
Point2 project_next_target(const WallModel& model, const Point2& target_rho);

}  // namespace dotpaint
