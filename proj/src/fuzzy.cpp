#include "swiftnav/fuzzy.hpp"

#include <cmath>
#include <stdexcept>

namespace swiftnav {

double membership(double range, double d_lo, double d_hi) {
    if (range <= d_lo) return 0.0;
    if (range >= d_hi) return 1.0;
    return (range - d_lo) / (d_hi - d_lo);
}

double sector_weight(double angle_deg) {
    double a = std::fmod(angle_deg, 360.0);
    if (a < 0.0) a += 360.0;
    if (a <= 30.0 || a >= 330.0) return 1.0;
    if (a >= 150.0 && a <= 210.0) return 0.2;
    return 0.5;
}

double safety_score(const std::vector<RayHit>& hits, double d_lo, double d_hi) {
    if (hits.empty()) throw std::invalid_argument("safety_score: empty scan");
    double num = 0.0, den = 0.0;
    for (const auto& h : hits) {
        const double w = sector_weight(h.angle_deg);
        num += membership(h.range, d_lo, d_hi) * w;
        den += w;
    }
    return num / den;
}

}  // namespace swiftnav
