#include "dotpaint/wall_model.hpp"

#include <cmath>

namespace dotpaint {

Line2 two_point_line(const Point2& a, const Point2& b) {
    const double dx = b.x - a.x;
    if (dx == 0.0) throw VerticalLine();
    const double slope = (b.y - a.y) / dx;
    return {slope, a.y - slope * a.x};
}

Line2 ols_line(std::span<const Point2> points) {
    if (points.size() < 2) throw std::invalid_argument("ols_line needs at least 2 points");
    double x_bar = 0.0, y_bar = 0.0;
    for (const auto& p : points) {
        x_bar += p.x;
        y_bar += p.y;
    }
    const double n = static_cast<double>(points.size());
    x_bar /= n;
    y_bar /= n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - x_bar) * (p.x - x_bar);
        sxy += (p.x - x_bar) * (p.y - y_bar);
    }
    if (sxx == 0.0) throw VerticalLine();
    const double slope = sxy / sxx;
    return {slope, y_bar - slope * x_bar};
}

double prediction_error(const Line2& current, double ref_x, double contact_y) {
    return std::abs(current.y_at(ref_x) - contact_y);
}

WallModel init_wall_model(const Point2& c1, const Point2& c2, double epsilon_bar) {
    if (epsilon_bar <= 0.0) throw std::invalid_argument("epsilon_bar must be positive");
    WallModel model;
    model.epsilon_bar = epsilon_bar;
    model.segments.push_back({two_point_line(c1, c2), {1, 2}, {c1, c2}});
    return model;
}

WallModel update_wall_model(WallModel model, int contact_index, const Point2& ref_rho,
                            const Point2& contact_rho, const Point2& prev_contact_rho) {
    if (model.segments.empty()) throw std::invalid_argument("wall model not initialized");

    WallSegment& current = model.segments.back();
    const double eps = prediction_error(current.line, ref_rho.x, contact_rho.y);

    if (eps >= model.epsilon_bar) {
        // Contact landed on a different facade segment: start a new one
        // through the previous and the current contact.
        WallSegment fresh;
        fresh.line = two_point_line(prev_contact_rho, contact_rho);
        fresh.support = {contact_index - 1, contact_index};
        fresh.points = {prev_contact_rho, contact_rho};
        model.segments.push_back(std::move(fresh));
    } else {
        // Same segment: refit it over its support plus the new contact.
        current.support.push_back(contact_index);
        current.points.push_back(contact_rho);
        current.line = ols_line(current.points);
    }
    return model;
}

Point2 project_next_target(const WallModel& model, const Point2& target_rho) {
    if (model.segments.empty()) throw std::invalid_argument("wall model not initialized");
    return {target_rho.x, model.active().line.y_at(target_rho.x)};
}

}  // namespace dotpaint
