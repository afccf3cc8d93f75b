#include "dotpaint/mission.hpp"

#include <cmath>
#include <utility>

namespace dotpaint {

namespace {

std::vector<SegmentSnapshot> snapshot_segments(const WallModel& model) {
    std::vector<SegmentSnapshot> out;
    out.reserve(model.segments.size());
    for (const auto& seg : model.segments) {
        SegmentSnapshot snap;
        snap.line = seg.line;
        snap.support_count = static_cast<int>(seg.support.size());
        snap.support_x_min = seg.points.front().x;
        snap.support_x_max = seg.points.front().x;
        for (const auto& p : seg.points) {
            snap.support_x_min = std::min(snap.support_x_min, p.x);
            snap.support_x_max = std::max(snap.support_x_max, p.x);
        }
        out.push_back(snap);
    }
    return out;
}

}  // namespace

Point2 make_bootstrap_dot(std::span<const Point2> dots_ref_w, double offset_m) {
    if (dots_ref_w.empty()) throw std::invalid_argument("mission needs at least one dot");
    if (offset_m <= 0.0)
        throw std::invalid_argument("bootstrap offset must be a positive distance");
    return {dots_ref_w.front().x + offset_m, dots_ref_w.front().y};
}

Pose2 compute_waiting_point(const Point2& target_rho, double delta_offset, double yaw_ref) {
    if (delta_offset <= 0.0) throw std::invalid_argument("waiting-point offset must be positive");
    const Point2 approach_normal = rotate({0.0, 1.0}, yaw_ref);
    return {target_rho - approach_normal * delta_offset, yaw_ref};
}

MissionReport run_mission(const MissionConfig& cfg) {
    if (cfg.dots_ref_w.empty()) throw std::invalid_argument("mission needs at least one dot");

    MissionReport report;
    Simulator sim(cfg.wall, cfg.true_transform, cfg.plant, cfg.noise, cfg.ctrl,
                  cfg.ground_truth_localization, cfg.seed);

    // Initial estimate: the instruction given to the operator.
    AlignmentEstimate estimate;
    estimate.transform = {0.0, cfg.initial_delta_guess};
    estimate.n_contacts = 0;

    std::vector<ContactRecord> contacts;
    std::optional<WallModel> wall_model;
    Point2 prev_contact_rho;

    // Mission list: bootstrap dot first, then the reference dots in order.
    std::vector<Point2> mission_dots;
    mission_dots.push_back(make_bootstrap_dot(cfg.dots_ref_w, cfg.bootstrap_offset_m));
    mission_dots.insert(mission_dots.end(), cfg.dots_ref_w.begin(), cfg.dots_ref_w.end());

    auto log_event = [&](const std::string& kind, const std::string& detail) {
        MissionEvent ev;
        ev.time_s = sim.time_s();
        ev.kind = kind;
        ev.detail = detail;
        ev.estimate_before = estimate.transform;
        ev.estimate_after = estimate.transform;
        report.events.push_back(ev);
    };

    for (std::size_t k = 0; k < mission_dots.size(); ++k) {
        const bool is_bootstrap = (k == 0);
        DotResult dot;
        dot.index = static_cast<int>(k);
        dot.ref_w = mission_dots[k];

        // Battery: head home before the budget runs out; the offset estimate
        // survives the reset untouched.
        if (sim.flight_time_s() > cfg.battery_budget_s - cfg.battery_reserve_s) {
            const RigidTransform2 before = estimate.transform;
            sim.home_cycle();
            ++report.reset_count;
            MissionEvent ev;
            ev.time_s = sim.time_s();
            ev.kind = "reset";
            ev.detail = "land, reset localization, take off";
            ev.estimate_before = before;
            ev.estimate_after = estimate.transform;
            report.events.push_back(ev);
        }

        // Target in the localization frame from the current estimate, pulled
        // onto the estimated wall segment when the surface model is active.
        Point2 target = wall_to_rho(dot.ref_w, estimate.transform);
        double yaw_ref = yaw_reference(estimate);
        if (wall_model) {
            target = project_next_target(*wall_model, target);
            yaw_ref = normalize_angle(std::atan(wall_model->active().line.slope));
        }
        dot.target_rho = target;

        const Pose2 waiting = compute_waiting_point(target, cfg.ctrl.offset_delta, yaw_ref);
        if (sim.goto_waypoint(waiting) != WaypointStatus::Reached) {
            dot.failure = "waypoint_timeout";
        } else {
            const ApproachResult touch = sim.approach_and_touch(yaw_ref);
            if (touch.status != ApproachStatus::Contact) {
                dot.failure = "no_contact";
            } else {
                dot.applied = true;
                dot.applied_w = touch.contact_true_w;
                dot.error_cm = std::abs(touch.contact_true_w.x - dot.ref_w.x) * 100.0;

                // Back to the waiting point before the next leg.
                sim.goto_waypoint(waiting);

                contacts.push_back({dot.ref_w, touch.contact_measured_rho.position, 1.0});
                const int i = static_cast<int>(contacts.size());
                log_event("contact", "dot " + std::to_string(dot.index));

                if (cfg.estimation_enabled && i >= 2) {
                    try {
                        estimate = estimate_rigid_transform(contacts);
                    } catch (const DegenerateGeometry&) {
                        log_event("estimation_skipped", "degenerate contact geometry");
                    }
                }
                if (cfg.surface_model_enabled) {
                    const Point2 c = touch.contact_measured_rho.position;
                    try {
                        if (i == 2) {
                            wall_model = init_wall_model(contacts[0].contact_rho, c,
                                                         cfg.epsilon_bar_m);
                        } else if (i >= 3) {
                            // Discrepancy is evaluated at the commanded x of
                            // this dot, not the achieved contact x.
                            wall_model = update_wall_model(std::move(*wall_model), i, target, c,
                                                           prev_contact_rho);
                        }
                    } catch (const VerticalLine&) {
                        log_event("wall_model_skipped", "vertical two-point line");
                    }
                    prev_contact_rho = c;
                }
            }
        }

        if (!dot.applied) {
            log_event("failure", "dot " + std::to_string(dot.index) + ": " + dot.failure);
        }

        dot.estimate = estimate.transform;
        dot.estimate_residual_rms = estimate.residual_rms;
        dot.n_contacts = estimate.n_contacts;
        if (wall_model) {
            dot.segment_count = static_cast<int>(wall_model->segments.size());
            dot.segment_id = dot.segment_count - 1;
            dot.segment_line = wall_model->active().line;
            dot.segments = snapshot_segments(*wall_model);
        }

        if (is_bootstrap)
            report.bootstrap = std::move(dot);
        else
            report.dots.push_back(std::move(dot));
    }

    double sq_sum = 0.0;
    for (const auto& dot : report.dots) {
        if (dot.applied) {
            ++report.n_applied;
            sq_sum += (dot.error_cm / 100.0) * (dot.error_cm / 100.0);
        } else {
            ++report.n_failed;
        }
    }
    report.rmse_cm = report.n_applied > 0 ? std::sqrt(sq_sum / report.n_applied) * 100.0 : 0.0;
    report.final_estimate = estimate.transform;
    report.total_time_s = sim.time_s();
    return report;
}

}  // namespace dotpaint
