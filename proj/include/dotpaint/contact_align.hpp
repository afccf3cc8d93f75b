// Weighted best-fit rigid transform between accumulated wall-contact points
// (localization frame) and the reference dots (wall frame), solved in closed
// form, plus the downstream target and yaw-reference updates.
#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dotpaint/geometry.hpp"

namespace dotpaint {

struct ContactRecord {
    Point2 ref_w;        // reference dot, wall frame
    Point2 contact_rho;  // measured vehicle pose at contact, localization frame
    double weight = 1.0;  // strictly positive
};

struct AlignmentEstimate {
    // Best-fit rho->wall map: wall = R(gamma) * contact + delta.
    RigidTransform2 transform;
    double residual_rms = 0.0;  // weighted RMS of post-fit residuals, meters
    int n_contacts = 0;
};

class TooFewContacts : public std::runtime_error {
  public:
    TooFewContacts() : std::runtime_error("rigid-transform estimation needs at least 2 contacts") {}
};

class DegenerateGeometry : public std::runtime_error {
  public:
    DegenerateGeometry()
        : std::runtime_error("contact geometry makes the rotation unobservable") {}
};

/// Weighted centroids of (contact points, reference points), in that order.
std::pair<Point2, Point2> weighted_centroids(std::span<const ContactRecord> contacts);

/// Closed-form minimizer of  sum_j w_j |R(g) c_j + d - r_j|^2  over (g, d).
/// Throws TooFewContacts for fewer than 2 records and DegenerateGeometry when
/// the rotation is unobservable (e.g. all contact points coincide).
AlignmentEstimate estimate_rigid_transform(std::span<const ContactRecord> contacts);

/// The alignment cost of a candidate transform (the quantity the estimator
/// minimizes); exposed so independent solvers can be compared against it.
double alignment_cost(std::span<const ContactRecord> contacts, const RigidTransform2& t);

/// Maps reference dots into the localization frame with the current estimate;
/// exact inverse of the estimated rho->wall map.
std::vector<Point2> update_targets(std::span<const Point2> refs_w, const AlignmentEstimate& est);

/// Yaw setpoint that turns the painting side of the vehicle square to the
/// (estimated) wall.
double yaw_reference(const AlignmentEstimate& est);

}  // namespace dotpaint
