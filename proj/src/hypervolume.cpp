#include "hems/hypervolume.hpp"

#include <algorithm>
#include <vector>

namespace hems {

namespace {

using Point2 = std::array<double, 2>;

double area2(std::vector<Point2> pts, const Point2& ref) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double best_y = ref[1];
    for (const auto& p : pts) {
        if (p[1] < best_y) {
            area += (ref[0] - p[0]) * (best_y - p[1]);
            best_y = p[1];
        }
    }
    return area;
}

}  // namespace

double hypervolume3(std::span<const Point3> points, const Point3& reference) {
    std::vector<Point3> pts;
    for (const auto& p : points)
        if (p[0] < reference[0] && p[1] < reference[1] && p[2] < reference[2]) pts.push_back(p);
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const Point3& a, const Point3& b) { return a[2] < b[2]; });

    double volume = 0.0;
    std::vector<Point2> slice;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slice.push_back({pts[i][0], pts[i][1]});
        const double z_next = i + 1 < pts.size() ? pts[i + 1][2] : reference[2];
        const double depth = z_next - pts[i][2];
        if (depth > 0.0) volume += depth * area2(slice, {reference[0], reference[1]});
    }
    return volume;
}

}  // namespace hems
