#include <cmath>
#include <limits>
#include <unordered_map>

#include "wigbound/dynamics.hpp"

namespace wigbound {

std::string to_string(TrajectoryOrigin o) {
    switch (o) {
        case TrajectoryOrigin::contour_level: return "contour_level";
        case TrajectoryOrigin::ode_order0: return "ode_order0";
        case TrajectoryOrigin::ode_order1: return "ode_order1";
        case TrajectoryOrigin::ode_order2: return "ode_order2";
        case TrajectoryOrigin::ode_exact_force: return "ode_exact_force";
    }
    return "unknown";
}

namespace {

struct Point {
    double x, p;
};

// Polylines of one level. Edge ids: 2 * flat(i, j) for the x-edge (i,j)-(i+1,j), +1 for the
// p-edge (i,j)-(i,j+1).
std::vector<std::vector<Point>> march(const WignerField& F, double level, std::vector<bool>& closed) {
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    auto val = [&](std::size_t i, std::size_t j) { return F.at(i, j); };
    auto in = [&](std::size_t i, std::size_t j) { return val(i, j) >= level; };
    std::unordered_map<std::size_t, Point> pts;
    auto edge_point = [&](std::size_t id) {
        auto it = pts.find(id);
        if (it != pts.end()) return;
        const std::size_t node = id / 2;
        const std::size_t i = node / np, j = node % np;
        const std::size_t i2 = (id % 2 == 0) ? i + 1 : i;
        const std::size_t j2 = (id % 2 == 0) ? j : j + 1;
        const double va = val(i, j), vb = val(i2, j2);
        const double t = (level - va) / (vb - va);
        pts[id] = Point{g.x_nodes[i] + t * (g.x_nodes[i2] - g.x_nodes[i]),
                        g.p_nodes[j] + t * (g.p_nodes[j2] - g.p_nodes[j])};
    };
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < np; ++j) {
            const bool c0 = in(i, j), c1 = in(i + 1, j), c2 = in(i + 1, j + 1), c3 = in(i, j + 1);
            const std::size_t e0 = 2 * g.flat(i, j);
            const std::size_t e1 = 2 * g.flat(i + 1, j) + 1;
            const std::size_t e2 = 2 * g.flat(i, j + 1);
            const std::size_t e3 = 2 * g.flat(i, j) + 1;
            std::vector<std::size_t> cut;
            if (c0 != c1) cut.push_back(e0);
            if (c1 != c2) cut.push_back(e1);
            if (c3 != c2) cut.push_back(e2);
            if (c0 != c3) cut.push_back(e3);
            for (std::size_t e : cut) edge_point(e);
            if (cut.size() == 2) {
                segs.emplace_back(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                const double centre = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
                const bool mid_in = centre >= level;
                if (c0 == mid_in) {
                    // Corners c1 and c3 are cut off.
                    segs.emplace_back(e0, e1);
                    segs.emplace_back(e2, e3);
                } else {
                    segs.emplace_back(e3, e0);
                    segs.emplace_back(e1, e2);
                }
            }
        }
    }
    std::unordered_map<std::size_t, std::vector<std::size_t>> adj;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        adj[segs[s].first].push_back(s);
        adj[segs[s].second].push_back(s);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<Point>> lines;
    auto walk = [&](std::size_t start_edge, std::size_t start_seg) {
        std::vector<Point> line{pts[start_edge]};
        std::size_t edge = start_edge, seg = start_seg;
        bool is_closed = false;
        while (true) {
            used[seg] = true;
            edge = segs[seg].first == edge ? segs[seg].second : segs[seg].first;
            if (edge == start_edge) {
                is_closed = true;
                break;
            }
            line.push_back(pts[edge]);
            std::size_t next = segs.size();
            for (std::size_t s : adj[edge]) {
                if (!used[s]) next = s;
            }
            if (next == segs.size()) break;
            seg = next;
        }
        lines.push_back(std::move(line));
        closed.push_back(is_closed);
    };
    // Open chains start at edges with a single segment.
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        for (std::size_t e : {segs[s].first, segs[s].second}) {
            if (!used[s] && adj[e].size() == 1) walk(e, s);
        }
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (!used[s]) walk(segs[s].first, s);
    }
    return lines;
}

}  // namespace

std::vector<Trajectory> exact_trajectories(const WignerField& F, const std::vector<double>& levels) {
    std::vector<Trajectory> out;
    for (double level : levels) {
        if (!std::isfinite(level)) throw InvalidArgument("contour levels must be finite");
        std::vector<bool> closed;
        const auto lines = march(F, level, closed);
        for (std::size_t k = 0; k < lines.size(); ++k) {
            Trajectory t;
            t.origin = TrajectoryOrigin::contour_level;
            t.level = level;
            t.closed = closed[k];
            double s = 0.0;
            for (const Point& q : lines[k]) {
                if (!t.samples.empty()) {
                    const double d = std::hypot(q.x - t.samples.back().x, q.p - t.samples.back().p);
                    if (!(d > 1e-14)) continue;
                    s += d;
                }
                t.samples.push_back({s, q.x, q.p});
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

double approx_force(int order, const SmoothedDelta& delta, double x, const PhysicalParams& params,
                    const Domain& domain) {
    if (order < 0 || order > 2) throw InvalidArgument("trajectory order must be 0, 1 or 2");
    const double hbar = params.hbar;
    const double m = params.mass;
    auto diff = [&](int k) {
        return delta_derivative(delta, x - domain.a(), k) - delta_derivative(delta, x - domain.b(), k);
    };
    double f = hbar * hbar / (2.0 * m) * diff(2);
    if (order >= 1) f += hbar * hbar / (48.0 * m) * diff(4);
    if (order >= 2) f -= std::pow(hbar, 4) / (3840.0 * m) * diff(6);
    return f;
}

namespace {

TrajectoryOrigin origin_for(int order) {
    return order == 0 ? TrajectoryOrigin::ode_order0
                      : (order == 1 ? TrajectoryOrigin::ode_order1 : TrajectoryOrigin::ode_order2);
}

}  // namespace

Trajectory approx_trajectories(int order, const SmoothedDelta& delta, std::array<double, 2> init,
                               std::array<double, 2> t_span, const PhysicalParams& params,
                               const TrajectoryOptions& opt) {
    if (order < 0 || order > 2) throw InvalidArgument("trajectory order must be 0, 1 or 2");
    const Domain& d = opt.domain;
    if (!(init[0] >= d.a() && init[0] <= d.b()) || !std::isfinite(init[1])) {
        throw InvalidArgument("initial condition must lie inside the walls");
    }
    if (!std::isfinite(t_span[0]) || !std::isfinite(t_span[1])) {
        throw InvalidArgument("time span must be finite");
    }
    const double ep = delta.epsilon_prime();
    OdeOptions ode = opt.ode;
    const auto user_cap = ode.h_max;
    ode.h_max = [&, user_cap](double t, std::span<const double> y) {
        double cap = user_cap ? user_cap(t, y) : std::numeric_limits<double>::infinity();
        const double dist = std::min(std::abs(y[0] - d.a()), std::abs(y[0] - d.b()));
        if (dist < 6.0 * ep) return std::min(cap, 0.1 * ep);
        // Do not step across the edge of a wall zone.
        const double speed = std::abs(y[1] / params.mass);
        if (speed > 0.0) cap = std::min(cap, std::max(0.1 * ep, (dist - 6.0 * ep) / speed));
        return cap;
    };
    const double m = params.mass;
    auto rhs = [&](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1] / m, approx_force(order, delta, y[0], params, d)};
    };
    Trajectory tr;
    tr.origin = origin_for(order);
    tr.epsilon = delta.epsilon();
    tr.rtol = ode.rtol;
    tr.atol = ode.atol;
    tr.samples.push_back({t_span[0], init[0], init[1]});
    const double margin = opt.escape_margin * ep;
    try {
        integrate_dopri<2>(rhs, std::array<double, 2>{init[0], init[1]}, t_span[0], t_span[1], ode,
                           [&](double t, const std::array<double, 2>& y) {
                               tr.samples.push_back({t, y[0], y[1]});
                               if (y[0] < d.a() - margin || y[0] > d.b() + margin) {
                                   tr.escaped = true;
                                   if (opt.stop_on_escape) return false;
                               }
                               return true;
                           });
    } catch (const IntegratorFailure& f) {
        throw TrajectoryFailure(f, std::move(tr));
    }
    return tr;
}

Trajectory force_trajectory(const EffectiveForceField& force, std::array<double, 2> init,
                            std::array<double, 2> t_span, const PhysicalParams& params,
                            const OdeOptions& ode) {
    const double m = params.mass;
    auto rhs = [&](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1] / m, force(y[0], y[1])};
    };
    Trajectory tr;
    tr.origin = TrajectoryOrigin::ode_exact_force;
    tr.rtol = ode.rtol;
    tr.atol = ode.atol;
    tr.samples.push_back({t_span[0], init[0], init[1]});
    try {
        integrate_dopri<2>(rhs, std::array<double, 2>{init[0], init[1]}, t_span[0], t_span[1], ode,
                           [&](double t, const std::array<double, 2>& y) {
                               tr.samples.push_back({t, y[0], y[1]});
                               return true;
                           });
    } catch (const IntegratorFailure& f) {
        throw TrajectoryFailure(f, std::move(tr));
    }
    return tr;
}

double escape_threshold(int order, const SmoothedDelta& delta, const PhysicalParams& params,
                        const TrajectoryOptions& opt, double p_lo, double p_hi, double tol) {
    if (!(p_lo > 0.0 && p_hi > p_lo)) throw InvalidArgument("need 0 < p_lo < p_hi");
    TrajectoryOptions o = opt;
    o.stop_on_escape = true;
    const double L = opt.domain.length();
    auto escapes = [&](double p0) {
        const double T = 10.0 * L / p0;
        return approx_trajectories(order, delta, {opt.domain.x0(), p0}, {0.0, T}, params, o).escaped;
    };
    if (escapes(p_lo)) throw InvalidArgument("lower bracket already escapes");
    if (!escapes(p_hi)) throw InvalidArgument("upper bracket does not escape");
    while (p_hi - p_lo > tol) {
        const double mid = 0.5 * (p_lo + p_hi);
        (escapes(mid) ? p_hi : p_lo) = mid;
    }
    return p_hi;
}

}  // namespace wigbound
