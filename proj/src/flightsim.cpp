#include "dotpaint/flightsim.hpp"

#include <algorithm>
#include <cmath>

namespace dotpaint {

namespace {

constexpr double kGravity = 9.81;

Point2 clamp_norm(const Point2& v, double limit) {
    const double n = v.norm();
    if (n <= limit || n == 0.0) return v;
    return v * (limit / n);
}

}  // namespace

WallGeometry::WallGeometry(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw std::invalid_argument("wall needs at least 2 vertices");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        if (vertices_[i].x <= vertices_[i - 1].x)
            throw std::invalid_argument("wall vertices must have strictly increasing x");
    }
}

WallGeometry WallGeometry::flat(double x_min, double x_max) {
    return WallGeometry({{x_min, 0.0}, {x_max, 0.0}});
}

WallGeometry WallGeometry::from_segments(double x_left, std::span<const SegmentSpec> segments,
                                         double anchor_x) {
    if (segments.empty()) throw std::invalid_argument("segment wall needs at least 1 segment");
    std::vector<Point2> verts;
    verts.push_back({x_left, 0.0});
    double x = x_left;
    for (const auto& seg : segments) {
        if (seg.width_m <= 0.0) throw std::invalid_argument("segment width must be positive");
        x += seg.width_m;
        verts.push_back({x, verts.back().y + std::tan(seg.angle_rad) * seg.width_m});
    }
    // Shift so the surface passes through (anchor_x, 0).
    WallGeometry raw(std::move(verts));
    const double y_anchor = raw.height_at(anchor_x);
    for (auto& v : raw.vertices_) v.y -= y_anchor;
    return raw;
}

double WallGeometry::height_at(double x) const {
    if (vertices_.size() < 2) throw std::logic_error("wall geometry is empty");
    // Extend end segments beyond the vertex range.
    std::size_t hi = 1;
    while (hi + 1 < vertices_.size() && vertices_[hi].x < x) ++hi;
    const Point2& a = vertices_[hi - 1];
    const Point2& b = vertices_[hi];
    const double t = (x - a.x) / (b.x - a.x);
    return a.y + t * (b.y - a.y);
}

bool detect_contact(double body_accel_y, double threshold_g) {
    return std::abs(body_accel_y) > threshold_g * kGravity;
}

VehicleState step_vehicle(const VehicleState& state, const VelocityCommand& cmd,
                          const WallGeometry& wall, const RigidTransform2& true_tf,
                          const PlantConfig& plant) {
    VehicleState next = state;
    next.in_contact = false;
    next.body_accel_y = 0.0;
    if (!state.airborne) return next;

    const double dt = plant.dt;
    const Point2 v_before = state.velocity;

    // Commanded velocity arrives in the localization frame; rotate into the
    // wall frame where the plant integrates.
    const Point2 v_cmd_w = rotate(clamp_norm(cmd.velocity_rho, plant.max_speed), true_tf.gamma);
    Point2 dv = (v_cmd_w - state.velocity) * (dt / plant.vel_time_constant);
    dv = clamp_norm(dv, plant.max_accel * dt);
    next.velocity = state.velocity + dv;

    Point2 candidate = state.true_pose.position + next.velocity * dt;

    // Wall clamp: never let the vehicle pass the surface. The surface is a
    // graph y = w(x), vehicle on the y < w side.
    if (candidate.y > wall.height_at(candidate.x)) {
        const Point2 start = state.true_pose.position;
        // Bisect for the crossing along the step segment.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const Point2 p = start + (candidate - start) * mid;
            if (p.y > wall.height_at(p.x))
                hi = mid;
            else
                lo = mid;
        }
        candidate = start + (candidate - start) * lo;
        candidate.y = std::min(candidate.y, wall.height_at(candidate.x));

        // Kill the velocity component into the wall, keep the tangential one.
        const double x0 = candidate.x;
        const double h = 1e-6;
        const double slope = (wall.height_at(x0 + h) - wall.height_at(x0 - h)) / (2.0 * h);
        const Point2 tangent = Point2{1.0, slope} * (1.0 / Point2{1.0, slope}.norm());
        const Point2 normal{-tangent.y, tangent.x};
        next.velocity = next.velocity - normal * next.velocity.dot(normal);
        next.in_contact = true;
    }

    next.true_pose.position = candidate;

    // Yaw: first-order tracking with a rate limit; commanded yaw arrives in
    // the localization frame.
    const double yaw_cmd_w = normalize_angle(cmd.yaw_rho + true_tf.gamma);
    const double yaw_err = normalize_angle(yaw_cmd_w - state.true_pose.yaw);
    double yaw_rate = yaw_err / plant.yaw_time_constant;
    yaw_rate = std::clamp(yaw_rate, -plant.max_yaw_rate, plant.max_yaw_rate);
    next.true_pose.yaw = normalize_angle(state.true_pose.yaw + yaw_rate * dt);

    // IMU: body-frame y acceleration, including any contact impulse.
    const Point2 accel_w = (next.velocity - v_before) * (1.0 / dt);
    const double yaw_w = next.true_pose.yaw;
    next.body_accel_y = -std::sin(yaw_w) * accel_w.x + std::cos(yaw_w) * accel_w.y;

    return next;
}

Pose2 measure_pose(const VehicleState& state, LocalizationState& loc,
                   const RigidTransform2& true_tf, const NoiseConfig& noise,
                   std::mt19937_64& rng) {
    Pose2 measured;
    measured.position = wall_to_rho(state.true_pose.position, true_tf);
    measured.yaw = normalize_angle(state.true_pose.yaw - true_tf.gamma);

    const bool noisy = noise.pos_white_std > 0.0 || noise.yaw_white_std > 0.0 ||
                       noise.pos_drift_std > 0.0 || noise.yaw_drift_std > 0.0;
    if (!noisy) return measured;

    std::normal_distribution<double> unit(0.0, 1.0);
    loc.drift.x += noise.pos_drift_std * unit(rng);
    loc.drift.y += noise.pos_drift_std * unit(rng);
    loc.yaw_drift += noise.yaw_drift_std * unit(rng);

    const double white_scale = 1.0 + noise.yaw_noise_gain * std::abs(measured.yaw);
    measured.position.x += loc.drift.x + noise.pos_white_std * white_scale * unit(rng);
    measured.position.y += loc.drift.y + noise.pos_white_std * white_scale * unit(rng);
    measured.yaw = normalize_angle(measured.yaw + loc.yaw_drift +
                                   noise.yaw_white_std * white_scale * unit(rng));
    return measured;
}

void reset_localization(LocalizationState& loc, bool airborne) {
    if (airborne) throw ResetWhileAirborne();
    loc.drift = Point2{};
    loc.yaw_drift = 0.0;
}

Simulator::Simulator(WallGeometry wall, RigidTransform2 true_tf, PlantConfig plant,
                     NoiseConfig noise, ControllerConfig ctrl, bool ground_truth_localization,
                     std::uint64_t seed)
    : wall_(std::move(wall)),
      true_tf_(true_tf),
      plant_(plant),
      noise_(noise),
      ctrl_(ctrl),
      ground_truth_(ground_truth_localization),
      rng_(seed) {
    // The vehicle starts landed at the localization origin, facing the wall.
    state_.true_pose.position = true_tf_.delta;
    state_.true_pose.yaw = normalize_angle(true_tf_.gamma);
    state_.airborne = true;
    last_measured_ = measure();
}

Pose2 Simulator::measure() {
    NoiseConfig effective = ground_truth_ ? NoiseConfig{} : noise_;
    Pose2 m = measure_pose(state_, loc_, true_tf_, effective, rng_);
    if (!have_smoothed_) {
        smoothed_measured_ = m;
        have_smoothed_ = true;
    } else {
        const double a = ctrl_.measurement_ema_alpha;
        smoothed_measured_.position = smoothed_measured_.position * (1.0 - a) + m.position * a;
        smoothed_measured_.yaw = normalize_angle(
            smoothed_measured_.yaw + a * normalize_angle(m.yaw - smoothed_measured_.yaw));
    }
    last_measured_ = m;
    return m;
}

void Simulator::run_step(const VelocityCommand& cmd) {
    state_ = step_vehicle(state_, cmd, wall_, true_tf_, plant_);
    time_s_ += plant_.dt;
    flight_time_s_ += plant_.dt;
    if (telemetry_) {
        telemetry_({time_s_, state_.true_pose, last_measured_, state_.body_accel_y,
                    state_.in_contact});
    }
}

VelocityCommand Simulator::pid_command(const Pose2& target_rho, const Pose2& measured) {
    const Point2 err = target_rho.position - measured.position;
    integral_ += err * plant_.dt;
    integral_ = clamp_norm(integral_, ctrl_.integral_limit);
    Point2 deriv{};
    if (have_prev_error_) deriv = (err - prev_error_) * (1.0 / plant_.dt);
    prev_error_ = err;
    have_prev_error_ = true;

    VelocityCommand cmd;
    cmd.velocity_rho = err * ctrl_.pos_kp + integral_ * ctrl_.pos_ki + deriv * ctrl_.pos_kd;
    cmd.velocity_rho = clamp_norm(cmd.velocity_rho, plant_.max_speed);
    cmd.yaw_rho = target_rho.yaw;
    return cmd;
}

void Simulator::reset_controllers() {
    integral_ = Point2{};
    prev_error_ = Point2{};
    have_prev_error_ = false;
}

WaypointStatus Simulator::goto_waypoint(const Pose2& target_rho) {
    reset_controllers();
    const int max_steps = static_cast<int>(ctrl_.waypoint_timeout_s / plant_.dt);
    int settled = 0;
    for (int i = 0; i < max_steps; ++i) {
        const Pose2 measured = measure();
        run_step(pid_command(target_rho, measured));

        const double pos_err = (smoothed_measured_.position - target_rho.position).norm();
        const double yaw_err = std::abs(normalize_angle(smoothed_measured_.yaw - target_rho.yaw));
        if (pos_err < ctrl_.waypoint_tolerance && yaw_err < ctrl_.yaw_tolerance) {
            if (++settled >= ctrl_.settle_steps) return WaypointStatus::Reached;
        } else {
            settled = 0;
        }
    }
    return WaypointStatus::Timeout;
}

ApproachResult Simulator::approach_and_touch(double yaw_ref) {
    // Drive along the commanded body normal until the accelerometer trips.
    const Point2 dir = rotate({0.0, 1.0}, yaw_ref);
    const int max_steps =
        static_cast<int>(ctrl_.max_approach_distance / (ctrl_.approach_speed * plant_.dt));
    ApproachResult result;
    for (int i = 0; i < max_steps; ++i) {
        measure();
        VelocityCommand cmd;
        cmd.velocity_rho = dir * ctrl_.approach_speed;
        cmd.yaw_rho = yaw_ref;
        run_step(cmd);
        if (detect_contact(state_.body_accel_y, ctrl_.contact_accel_threshold)) {
            // The dot is applied here: measured pose is what the estimator
            // sees, the true pose is where paint actually landed.
            result.status = ApproachStatus::Contact;
            result.contact_measured_rho = measure();
            result.contact_true_w = state_.true_pose.position;
            return result;
        }
    }
    result.status = ApproachStatus::NoContact;
    return result;
}

void Simulator::home_cycle() {
    // Fly back over the take-off point on the normal controller...
    goto_waypoint(Pose2{{0.0, 0.0}, 0.0});
    // ...then let the landing tag guide the final touchdown: the tag gives
    // true-frame feedback, so drift cannot displace the landing point.
    const Point2 home_w = true_tf_.delta;
    const int max_steps = static_cast<int>(30.0 / plant_.dt);
    for (int i = 0; i < max_steps; ++i) {
        const Point2 err = home_w - state_.true_pose.position;
        if (err.norm() < 0.01) break;
        measure();
        VelocityCommand cmd;
        cmd.velocity_rho = rotate(err, -true_tf_.gamma) * 1.5;
        cmd.velocity_rho = clamp_norm(cmd.velocity_rho, 0.3);
        cmd.yaw_rho = 0.0;
        run_step(cmd);
    }
    state_.airborne = false;
    state_.velocity = Point2{};
    reset_localization_on_ground();
    // Take off again for the rest of the mission.
    state_.airborne = true;
    flight_time_s_ = 0.0;
    have_smoothed_ = false;
    measure();
}

void Simulator::reset_localization_on_ground() {
    reset_localization(loc_, state_.airborne);
}

}  // namespace dotpaint
