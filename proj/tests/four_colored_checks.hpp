#pragma once

// Limit checks of the quadrant propagator against the half-plane
// logarithmic form, by direct evaluation at a small offset from the boundary.

#include "logstar/graphs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace four_colored {

using cplx = std::complex<double>;
using logstar::Propagator;
using logstar::propagator_value;

struct Property {
    std::string name;
    double max_error = 0.0;
    int checked = 0;
};

struct Report {
    std::vector<Property> properties;
    bool passed(double tol) const {
        return std::all_of(properties.begin(), properties.end(),
                           [tol](const Property& p) { return p.checked > 0 && p.max_error <= tol; });
    }
};

inline double dist(cplx a, cplx b) { return std::abs(a - b); }

// Points of the upper half-plane at moderate height, pairwise apart.
inline std::array<cplx, 2> half_plane_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.3, 2.0);
    for (;;) {
        const cplx a{re(rng), im(rng)}, b{re(rng), im(rng)};
        if (dist(a, b) > 0.5) return {a, b};
    }
}

// Points of the open quadrant away from both axes, pairwise apart.
inline std::array<cplx, 2> quadrant_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.3, 2.0);
    for (;;) {
        const cplx a{u(rng), u(rng)}, b{u(rng), u(rng)};
        if (dist(a, b) > 0.5) return {a, b};
    }
}

inline void record(Property& p, double err) {
    p.max_error = std::max(p.max_error, err);
    ++p.checked;
}

inline Report run(int configurations, std::uint64_t seed, double offset) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0.5, 2.0), phi(0.0, 2.0 * std::numbers::pi);
    Property real_axis{"collapse on R+ gives the half-plane form"};
    Property imag_axis{"collapse on iR+ gives the swapped half-plane form"};
    Property source_real{"vanishes as the source approaches R+"};
    Property target_imag{"vanishes as the target approaches iR+"};
    Property origin{"vanishes as either point approaches the origin"};
    Property residue{"angular residue at the diagonal is 1/(2 pi)"};
    const double d = offset;
    for (int c = 0; c < configurations; ++c) {
        {
            const auto [w1, w2] = half_plane_pair(rng);
            const double p = pos(rng);
            const auto f = propagator_value(Propagator::FourColoredLog, p + d * w1, p + d * w2);
            const auto g = propagator_value(Propagator::Logarithmic, w1, w2);
            double err = 0.0;
            for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(d * f[k] - g[k]));
            record(real_axis, err);
        }
        {
            // z = i p - i d u maps the upper half-plane near 0 into the quadrant near i p.
            const auto [u1, u2] = half_plane_pair(rng);
            const double p = pos(rng);
            const cplx i{0.0, 1.0};
            const auto f = propagator_value(Propagator::FourColoredLog, i * p - i * d * u1, i * p - i * d * u2);
            const auto g = propagator_value(Propagator::Logarithmic, u2, u1);
            // chain rule: d/d(re u) = -d d/d(im z), d/d(im u) = d d/d(re z)
            const std::array<cplx, 4> pulled{-d * f[1], d * f[0], -d * f[3], d * f[2]};
            const std::array<cplx, 4> expected{g[2], g[3], g[0], g[1]};
            double err = 0.0;
            for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(pulled[k] - expected[k]));
            record(imag_axis, err);
        }
        {
            const auto [a, b] = quadrant_pair(rng);
            // Components tangent to the boundary stratum.
            const auto s = propagator_value(Propagator::FourColoredLog, cplx(a.real(), d), b);
            record(source_real, std::max({std::abs(s[0]), std::abs(s[2]), std::abs(s[3])}));
            const auto t = propagator_value(Propagator::FourColoredLog, a, cplx(d, b.imag()));
            record(target_imag, std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[3])}));
            const auto o1 = propagator_value(Propagator::FourColoredLog, d * a, b);
            const auto o2 = propagator_value(Propagator::FourColoredLog, a, d * b);
            record(origin, std::max({std::abs(o1[2]), std::abs(o1[3]), std::abs(o2[0]), std::abs(o2[1])}));
        }
        {
            const auto [a, b] = quadrant_pair(rng);
            (void)b;
            const double t = phi(rng);
            const auto f = propagator_value(Propagator::FourColoredLog, a, a + d * std::polar(1.0, t));
            const cplx angular = -d * std::sin(t) * f[2] + d * std::cos(t) * f[3];
            record(residue, std::abs(angular - 1.0 / (2.0 * std::numbers::pi)));
        }
    }
    return {{real_axis, imag_axis, source_real, target_imag, origin, residue}};
}

} // namespace four_colored
