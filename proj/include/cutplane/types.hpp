#pragma once

#include <cmath>
#include <vector>

namespace cutplane {

using Point = std::vector<double>;

struct EpiPoint {
    Point x;
    double gamma = 0.0;
};

inline std::vector<double> flatten(const EpiPoint& u) {
    std::vector<double> v = u.x;
    v.push_back(u.gamma);
    return v;
}

inline EpiPoint to_epi(const std::vector<double>& v) {
    EpiPoint u;
    u.x.assign(v.begin(), v.end() - 1);
    u.gamma = v.back();
    return u;
}

}  // namespace cutplane
