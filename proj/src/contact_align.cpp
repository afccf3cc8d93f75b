#include "dotpaint/contact_align.hpp"

#include <cmath>

namespace dotpaint {

std::pair<Point2, Point2> weighted_centroids(std::span<const ContactRecord> contacts) {
    Point2 c_sum, r_sum;
    double w_sum = 0.0;
    for (const auto& rec : contacts) {
        c_sum += rec.weight * rec.contact_rho;
        r_sum += rec.weight * rec.ref_w;
        w_sum += rec.weight;
    }
    if (w_sum <= 0.0) throw std::invalid_argument("total contact weight must be positive");
    return {c_sum * (1.0 / w_sum), r_sum * (1.0 / w_sum)};
}

double alignment_cost(std::span<const ContactRecord> contacts, const RigidTransform2& t) {
    double cost = 0.0;
    for (const auto& rec : contacts) {
        const Point2 r = rho_to_wall(rec.contact_rho, t) - rec.ref_w;
        cost += rec.weight * r.norm_sq();
    }
    return cost;
}

AlignmentEstimate estimate_rigid_transform(std::span<const ContactRecord> contacts) {
    if (contacts.size() < 2) throw TooFewContacts();

    const auto [c_bar, r_bar] = weighted_centroids(contacts);

    // 2x2 weighted cross-covariance of the centered point sets.
    double s00 = 0.0, s01 = 0.0, s10 = 0.0, s11 = 0.0;
    double spread_sq = 0.0;
    for (const auto& rec : contacts) {
        const Point2 c = rec.contact_rho - c_bar;
        const Point2 r = rec.ref_w - r_bar;
        s00 += rec.weight * c.x * r.x;
        s01 += rec.weight * c.x * r.y;
        s10 += rec.weight * c.y * r.x;
        s11 += rec.weight * c.y * r.y;
        spread_sq = std::max(spread_sq, c.norm_sq());
    }

    // The optimal proper rotation maximizes tr(R S).  Writing R as an angle,
    // tr(R S) = cos(g) tr(S) + sin(g) (S01 - S10), so the maximizer is
    // atan2(S01 - S10, S00 + S11).  This is exactly the SVD solution with the
    // det(VU^T) reflection correction folded in: both pick the best element
    // of SO(2), never a reflection.
    const double trace = s00 + s11;
    const double skew = s01 - s10;
    if (spread_sq == 0.0 || (trace == 0.0 && skew == 0.0)) throw DegenerateGeometry();

    AlignmentEstimate est;
    est.transform.gamma = std::atan2(skew, trace);
    est.transform.delta = r_bar - rotate(c_bar, est.transform.gamma);
    est.n_contacts = static_cast<int>(contacts.size());

    double w_sum = 0.0;
    for (const auto& rec : contacts) w_sum += rec.weight;
    est.residual_rms = std::sqrt(alignment_cost(contacts, est.transform) / w_sum);
    return est;
}

std::vector<Point2> update_targets(std::span<const Point2> refs_w, const AlignmentEstimate& est) {
    std::vector<Point2> targets;
    targets.reserve(refs_w.size());
    for (const auto& ref : refs_w) targets.push_back(wall_to_rho(ref, est.transform));
    return targets;
}

double yaw_reference(const AlignmentEstimate& est) {
    return normalize_angle(-est.transform.gamma);
}

}  // namespace dotpaint
