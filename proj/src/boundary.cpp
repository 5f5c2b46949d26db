#include "cutplane/boundary.hpp"

#include <cmath>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane {

BoundaryHit segment_boundary_point(const MembershipFn& membership,
                                   std::span<const double> interior,
                                   std::span<const double> outside, double tol_boundary) {
    const std::size_t n = outside.size();
    std::vector<double> buf(n);
    auto at = [&](double t) -> const std::vector<double>& {
        for (std::size_t j = 0; j < n; ++j) buf[j] = outside[j] + t * (interior[j] - outside[j]);
        return buf;
    };

    const double m_out = membership(outside);
    const double m_in = membership(interior);
    if (!(m_in < 0.0) || !(m_out > 0.0))
        throw ContractViolation("segment_boundary_point: endpoints on the wrong side");
    if (tol_boundary <= 0.0) tol_boundary = 1e-10 * (1.0 + std::fabs(m_out));

    double t_out = 0.0, t_in = 1.0;
    double m_at_out = m_out;
    for (int iter = 0;; ++iter) {
        const bool value_ok = m_at_out <= tol_boundary;
        const bool ratio_ok = t_out > 0.0 && t_in <= 2.0 * t_out;
        if (value_ok && ratio_ok) break;
        if (iter >= 128) throw MaxBisectionsError();
        const double mid = 0.5 * (t_out + t_in);
        const double m_mid = membership(at(mid));
        if (m_mid == 0.0) {
            // exact crossing: z and its partner coincide, q = 1
            BoundaryHit hit;
            hit.z = at(mid);
            hit.inner = hit.z;
            hit.q = 1.0;
            hit.membership_at_z = 0.0;
            hit.tol = tol_boundary;
            return hit;
        }
        if (m_mid > 0.0) {
            t_out = mid;
            m_at_out = m_mid;
        } else {
            t_in = mid;
        }
    }

    BoundaryHit hit;
    hit.z = at(t_out);
    hit.q = t_in / t_out;
    hit.inner = at(t_in);
    hit.membership_at_z = m_at_out;
    hit.tol = tol_boundary;
    return hit;
}

BoundaryHit passthrough_hit(std::span<const double> p) {
    BoundaryHit hit;
    hit.z.assign(p.begin(), p.end());
    hit.inner = hit.z;
    hit.q = 1.0;
    hit.membership_at_z = 0.0;
    hit.tol = 0.0;
    return hit;
}

Point region_support_vector(const FunctionOracle& constraint, const Point& z) {
    Point g = constraint.subgradient(z);
    const double nrm = linalg::norm(g);
    if (nrm < 1e-12) throw ZeroSubgradientError();
    for (double& v : g) v /= nrm;
    return g;
}

std::vector<double> epi_support_vector(const FunctionOracle& f, const EpiPoint& at) {
    if (f.value(at.x) < at.gamma - 1e-12)
        throw ContractViolation("epi_support_vector: point is interior to the epigraph");
    Point c = f.subgradient(at.x);
    const double nrm = std::sqrt(linalg::dot(c, c) + 1.0);
    std::vector<double> out(c.size() + 1);
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j] / nrm;
    out.back() = -1.0 / nrm;
    return out;
}

}  // namespace cutplane
