// Deterministic discrete-time planar vehicle simulation: first-order velocity
// plant with yaw, PID waypoint control, velocity-mode wall approach, contact
// clamping with an accelerometer spike, and a drifting localization model
// with on-ground resets.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dotpaint/geometry.hpp"

namespace dotpaint {

// True wall surface in the wall frame as a graph y = w(x); the vehicle
// operates on the y < w(x) side. End slopes extend beyond the vertex range.
class WallGeometry {
  public:
    WallGeometry() = default;
    explicit WallGeometry(std::vector<Point2> vertices);

    static WallGeometry flat(double x_min, double x_max);

    // Contiguous segments laid left to right, each tilted by its angle from
    // the nominal wall line; the surface passes through (anchor_x, 0).
    struct SegmentSpec {
        double angle_rad = 0.0;
        double width_m = 0.0;
    };
    static WallGeometry from_segments(double x_left, std::span<const SegmentSpec> segments,
                                      double anchor_x);

    double height_at(double x) const;
    bool empty() const { return vertices_.empty(); }
    const std::vector<Point2>& vertices() const { return vertices_; }

  private:
    std::vector<Point2> vertices_;  // x strictly increasing
};

struct VehicleState {
    Pose2 true_pose;        // wall frame
    Point2 velocity;        // wall frame, m/s
    double body_accel_y = 0.0;  // m/s^2, along the body y axis
    bool airborne = true;
    bool in_contact = false;  // position clamped on the wall this step
};

struct LocalizationState {
    Point2 drift;            // accumulated position bias, localization frame
    double yaw_drift = 0.0;  // accumulated yaw bias, radians
};

struct PlantConfig {
    double dt = 0.02;                 // s (50 Hz)
    double vel_time_constant = 0.3;   // s, commanded-to-actual velocity lag
    double yaw_time_constant = 0.25;  // s
    double max_speed = 1.0;           // m/s
    double max_yaw_rate = 1.5;        // rad/s
    // Free-flight acceleration cap; kept below the contact threshold so only
    // a wall clamp can trip the detector.
    double max_accel = 2.0;  // m/s^2
};

struct NoiseConfig {
    double pos_white_std = 0.0;        // m, per measurement
    double yaw_white_std = 0.0;        // rad
    double pos_drift_std = 0.0;        // m, random-walk increment per step
    double yaw_drift_std = 0.0;        // rad per step
    // Localization quality degrades as the camera turns away from its mapped
    // heading: white-noise std is scaled by (1 + gain * |yaw|).
    double yaw_noise_gain = 0.0;
};

struct ControllerConfig {
    double pos_kp = 1.2;
    double pos_ki = 0.15;
    double pos_kd = 0.25;
    double integral_limit = 0.5;
    double yaw_kp = 2.5;

    double approach_speed = 0.25;        // m/s
    double contact_accel_threshold = 0.25;  // g units
    double waypoint_tolerance = 0.05;    // m, on the smoothed measurement
    double yaw_tolerance = 0.035;        // rad
    double offset_delta = 0.4;           // m, waiting-point stand-off
    double max_approach_distance = 2.0;  // m
    double waypoint_timeout_s = 60.0;
    int settle_steps = 10;
    double measurement_ema_alpha = 0.08;
};

/// True iff the body-normal acceleration magnitude exceeds the threshold.
bool detect_contact(double body_accel_y, double threshold_g);

struct VelocityCommand {
    Point2 velocity_rho;  // commanded velocity, localization frame
    double yaw_rho = 0.0;  // commanded yaw, localization frame
};

/// One plant step in the wall frame. Slew-limits commanded accelerations,
/// integrates, and clamps against the wall surface; a clamp zeroes the
/// normal velocity and shows up as a body-frame acceleration spike.
VehicleState step_vehicle(const VehicleState& state, const VelocityCommand& cmd,
                          const WallGeometry& wall, const RigidTransform2& true_tf,
                          const PlantConfig& plant);

/// Measured pose in the localization frame: the true pose mapped through the
/// true wall->rho transform, plus random-walk drift and white noise.
Pose2 measure_pose(const VehicleState& state, LocalizationState& loc,
                   const RigidTransform2& true_tf, const NoiseConfig& noise,
                   std::mt19937_64& rng);

class ResetWhileAirborne : public std::runtime_error {
  public:
    ResetWhileAirborne() : std::runtime_error("localization reset requires a landed vehicle") {}
};

/// Zeroes accumulated drift. White noise continues; the mission-level offset
/// estimate is deliberately untouched.
void reset_localization(LocalizationState& loc, bool airborne);

enum class WaypointStatus { Reached, Timeout };
enum class ApproachStatus { Contact, NoContact };

struct ApproachResult {
    ApproachStatus status = ApproachStatus::NoContact;
    Pose2 contact_measured_rho;  // measured pose when the contact tripped
    Point2 contact_true_w;       // true vehicle position at the same step
};

struct StepRecord {
    double time_s;
    Pose2 true_pose_w;
    Pose2 measured_rho;
    double body_accel_y;
    bool in_contact;
};

// Owns the vehicle, localization, controllers and RNG for one run.
class Simulator {
  public:
    Simulator(WallGeometry wall, RigidTransform2 true_tf, PlantConfig plant, NoiseConfig noise,
              ControllerConfig ctrl, bool ground_truth_localization, std::uint64_t seed);

    const VehicleState& vehicle() const { return state_; }
    const LocalizationState& localization() const { return loc_; }
    const Pose2& last_measured() const { return last_measured_; }
    double time_s() const { return time_s_; }
    double flight_time_s() const { return flight_time_s_; }

    WaypointStatus goto_waypoint(const Pose2& target_rho);
    ApproachResult approach_and_touch(double yaw_ref);

    /// Fly to the take-off point, land on the charging tag, reset the
    /// localization, take off again. The offset estimate lives elsewhere and
    /// is untouched by design.
    void home_cycle();

    void reset_localization_on_ground();

    /// Optional per-step telemetry sink.
    void set_telemetry(std::function<void(const StepRecord&)> sink) { telemetry_ = std::move(sink); }

  private:
    Pose2 measure();
    void run_step(const VelocityCommand& cmd);
    VelocityCommand pid_command(const Pose2& target_rho, const Pose2& measured);
    void reset_controllers();

    WallGeometry wall_;
    RigidTransform2 true_tf_;
    PlantConfig plant_;
    NoiseConfig noise_;
    ControllerConfig ctrl_;
    bool ground_truth_;
    std::mt19937_64 rng_;

    VehicleState state_;
    LocalizationState loc_;
    Pose2 last_measured_;
    Pose2 smoothed_measured_;
    bool have_smoothed_ = false;

    Point2 integral_;
    Point2 prev_error_;
    bool have_prev_error_ = false;

    double time_s_ = 0.0;
    double flight_time_s_ = 0.0;

    std::function<void(const StepRecord&)> telemetry_;
};

}  // namespace dotpaint
