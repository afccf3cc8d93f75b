// Mission executor: bootstrap dot, per-dot waiting point, wall approach,
// contact logging, offset/wall-shape estimation updates, target
// re-projection, battery land/reset cycles, and the accuracy report.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dotpaint/contact_align.hpp"
#include "dotpaint/flightsim.hpp"
#include "dotpaint/wall_model.hpp"

namespace dotpaint {

struct MissionConfig {
    std::vector<Point2> dots_ref_w;  // reference dots, wall frame, mission order
    RigidTransform2 true_transform;  // scenario ground truth (gamma, delta)
    WallGeometry wall;               // true wall surface

    bool estimation_enabled = true;
    bool surface_model_enabled = false;  // multi-segment wall mode
    bool ground_truth_localization = true;

    std::uint64_t seed = 1;
    double battery_budget_s = 480.0;  // land/reset after this much flight time
    double battery_reserve_s = 30.0;  // head home this early
    double bootstrap_offset_m = 1.0;
    double epsilon_bar_m = 0.05;
    Point2 initial_delta_guess{0.0, -1.1};  // briefed stand-off: (0, -d)

    PlantConfig plant;
    NoiseConfig noise;
    ControllerConfig ctrl;
};

struct SegmentSnapshot {
    Line2 line;
    int support_count = 0;
    double support_x_min = 0.0;
    double support_x_max = 0.0;
};

struct DotResult {
    int index = 0;   // 1-based position in dots_ref_w; 0 is the bootstrap dot
    Point2 ref_w;
    Point2 target_rho;  // commanded target for this dot
    bool applied = false;
    Point2 applied_w;      // true paint position (valid when applied)
    double error_cm = 0.0;  // |x_applied - x_ref| in cm (valid when applied)
    std::string failure;    // empty when applied

    // Estimate state after this dot's contact was folded in.
    RigidTransform2 estimate;
    double estimate_residual_rms = 0.0;
    int n_contacts = 0;
    int segment_count = 0;  // 0 when the surface model is off/uninitialized
    int segment_id = -1;    // active segment after the update
    Line2 segment_line;
    std::vector<SegmentSnapshot> segments;
};

struct MissionEvent {
    double time_s = 0.0;
    std::string kind;    // "contact", "landing", "reset", "takeoff", "failure", ...
    std::string detail;
    RigidTransform2 estimate_before;
    RigidTransform2 estimate_after;
};

struct MissionReport {
    std::optional<DotResult> bootstrap;  // excluded from the error statistics
    std::vector<DotResult> dots;         // one entry per reference dot
    std::vector<MissionEvent> events;
    double rmse_cm = 0.0;  // over applied reference dots only
    int n_applied = 0;
    int n_failed = 0;
    RigidTransform2 final_estimate;
    int reset_count = 0;
    double total_time_s = 0.0;
};

/// Extra conditioning dot prepended to the mission: on the wall line through
/// the first dot, a configurable horizontal distance away from it.
Point2 make_bootstrap_dot(std::span<const Point2> dots_ref_w, double offset_m);

/// Waiting pose offset `delta_offset` back from the target along the
/// yaw-compensated approach normal.
Pose2 compute_waiting_point(const Point2& target_rho, double delta_offset, double yaw_ref);

MissionReport run_mission(const MissionConfig& cfg);

}  // namespace dotpaint
