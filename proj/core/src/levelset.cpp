#include "tumorcord/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace tumorcord {

double smoothed_inside(double psi, double width) noexcept {
    if (width <= 0.0) return psi < 0.0 ? 1.0 : 0.0;
    if (psi <= -width) return 1.0;
    if (psi >= width) return 0.0;
    const double s = -psi / width;
    return 0.5 * (1.0 + s + std::sin(std::numbers::pi * s) / std::numbers::pi);
}

Field2D inside_indicator(const Field2D& psi, double width) {
    Field2D chi = psi;
    for (std::size_t k = 0; k < chi.size(); ++k) chi[k] = smoothed_inside(psi[k], width);
    return chi;
}

int advect_level_set(Field2D& psi, const VectorField2D& v, const Grid2D& grid, double dt) {
    const int nx = grid.nx;
    const int nz = grid.nz;
    const double hx = grid.hx();
    const double hz = grid.hz();
    double rate = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        rate = std::max(rate, std::abs(v.vx[k]) / hx + std::abs(v.vz[k]) / hz);
    }
    if (rate == 0.0 || dt <= 0.0) return 0;
    const int substeps = std::max(1, static_cast<int>(std::ceil(dt * rate / 0.5)));
    const double tau = dt / substeps;

    Field2D next = psi;
    for (int s = 0; s < substeps; ++s) {
        for (int j = 0; j < nz; ++j) {
            for (int i = 0; i < nx; ++i) {
                const double p = psi(i, j);
                // mirror at x = 0 and z = 0, one-sided extrapolation at the far edges
                const double pw = i > 0 ? psi(i - 1, j) : psi(1, j);
                const double pe = i < nx - 1 ? psi(i + 1, j) : 2.0 * p - psi(i - 1, j);
                const double ps = j > 0 ? psi(i, j - 1) : psi(i, 1);
                const double pn = j < nz - 1 ? psi(i, j + 1) : 2.0 * p - psi(i, j - 1);
                const double u = v.vx(i, j);
                const double w = v.vz(i, j);
                const double dx = u > 0.0 ? (p - pw) / hx : (pe - p) / hx;
                const double dz = w > 0.0 ? (p - ps) / hz : (pn - p) / hz;
                next(i, j) = p - tau * (u * dx + w * dz);
            }
        }
        std::swap(psi.values(), next.values());
    }
    return substeps;
}

namespace {

// Solves the Godunov-discretised eikonal update at one node from the smaller
// neighbour value along each axis.
double eikonal_update(double a, double b, double hx, double hz) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a == inf && b == inf) return inf;
    const double cand = std::min(a + hx, b + hz);
    if (a == inf || b == inf) return cand;
    const double ix2 = 1.0 / (hx * hx);
    const double iz2 = 1.0 / (hz * hz);
    const double qa = ix2 + iz2;
    const double qb = -2.0 * (a * ix2 + b * iz2);
    const double qc = a * a * ix2 + b * b * iz2 - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return cand;
    const double d = (-qb + std::sqrt(disc)) / (2.0 * qa);
    return d >= std::max(a, b) ? std::min(d, cand) : cand;
}

}  // namespace

void reinitialize(Field2D& psi, const Grid2D& grid, int sweeps) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int nx = grid.nx;
    const int nz = grid.nz;
    const double hx = grid.hx();
    const double hz = grid.hz();

    Field2D dist(grid, inf);
    std::vector<char> frozen(psi.size(), 0);
    std::vector<signed char> sign(psi.size(), 1);
    for (std::size_t k = 0; k < psi.size(); ++k) sign[k] = psi[k] < 0.0 ? -1 : 1;

    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double p = psi(i, j);
            if (p == 0.0) {
                dist(i, j) = 0.0;
                frozen[grid.index(i, j)] = 1;
                continue;
            }
            double dx = inf;
            double dz = inf;
            auto edge = [&](double q, double h, double& best) {
                if ((p < 0.0) != (q < 0.0)) best = std::min(best, h * p / (p - q));
            };
            if (i > 0) edge(psi(i - 1, j), hx, dx);
            if (i < nx - 1) edge(psi(i + 1, j), hx, dx);
            if (j > 0) edge(psi(i, j - 1), hz, dz);
            if (j < nz - 1) edge(psi(i, j + 1), hz, dz);
            if (dx == inf && dz == inf) continue;
            // |psi| / |grad psi| from central differences, one-sided on the boundary
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, nz - 1);
            const double gx = (psi(ir, j) - psi(il, j)) / ((ir - il) * hx);
            const double gz = (psi(i, jr) - psi(i, jl)) / ((jr - jl) * hz);
            const double grad = std::hypot(gx, gz);
            double d;
            if (grad > 0.0) {
                d = std::abs(p) / grad;
            } else if (dx == inf) {
                d = dz;
            } else if (dz == inf) {
                d = dx;
            } else {
                d = 1.0 / std::sqrt(1.0 / (dx * dx) + 1.0 / (dz * dz));
            }
            dist(i, j) = std::min({d, dx, dz});
            frozen[grid.index(i, j)] = 1;
        }
    }

    for (int pass = 0; pass < sweeps; ++pass) {
        for (int dir = 0; dir < 4; ++dir) {
            const bool fx = (dir & 1) == 0;
            const bool fz = (dir & 2) == 0;
            for (int jj = 0; jj < nz; ++jj) {
                const int j = fz ? jj : nz - 1 - jj;
                for (int ii = 0; ii < nx; ++ii) {
                    const int i = fx ? ii : nx - 1 - ii;
                    const std::size_t k = grid.index(i, j);
                    if (frozen[k]) continue;
                    double a = inf;
                    if (i > 0) a = std::min(a, dist(i - 1, j));
                    if (i < nx - 1) a = std::min(a, dist(i + 1, j));
                    double b = inf;
                    if (j > 0) b = std::min(b, dist(i, j - 1));
                    if (j < nz - 1) b = std::min(b, dist(i, j + 1));
                    const double d = eikonal_update(a, b, hx, hz);
                    if (d < dist[k]) dist[k] = d;
                }
            }
        }
    }

    for (std::size_t k = 0; k < psi.size(); ++k) {
        // a field with no zero crossing keeps its magnitude
        if (dist[k] == inf) continue;
        psi[k] = sign[k] * dist[k];
    }
}

std::vector<Polyline> extract_interface(const Field2D& psi, const Grid2D& grid) {
    const int nx = grid.nx;
    const int nz = grid.nz;
    const double hx = grid.hx();
    const double hz = grid.hz();

    // crossing points keyed by 2*(node index) for x-edges, +1 for z-edges
    std::unordered_map<std::size_t, Point2D> points;
    std::vector<std::pair<std::size_t, std::size_t>> segments;

    auto x_edge = [&](int i, int j) {
        const std::size_t id = 2 * grid.index(i, j);
        if (!points.count(id)) {
            const double a = psi(i, j);
            const double b = psi(i + 1, j);
            const double t = a / (a - b);
            points[id] = {grid.x(i) + t * hx, grid.z(j)};
        }
        return id;
    };
    auto z_edge = [&](int i, int j) {
        const std::size_t id = 2 * grid.index(i, j) + 1;
        if (!points.count(id)) {
            const double a = psi(i, j);
            const double b = psi(i, j + 1);
            const double t = a / (a - b);
            points[id] = {grid.x(i), grid.z(j) + t * hz};
        }
        return id;
    };

    for (int j = 0; j + 1 < nz; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const double v0 = psi(i, j);
            const double v1 = psi(i + 1, j);
            const double v2 = psi(i + 1, j + 1);
            const double v3 = psi(i, j + 1);
            const int mask = (v0 < 0.0 ? 1 : 0) | (v1 < 0.0 ? 2 : 0) | (v2 < 0.0 ? 4 : 0) |
                             (v3 < 0.0 ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            // edges: bottom (0-1), right (1-2), top (3-2), left (0-3)
            auto bottom = [&] { return x_edge(i, j); };
            auto top = [&] { return x_edge(i, j + 1); };
            auto left = [&] { return z_edge(i, j); };
            auto right = [&] { return z_edge(i + 1, j); };
            std::vector<std::size_t> crossed;
            if ((mask & 1) != ((mask >> 1) & 1)) crossed.push_back(bottom());
            if (((mask >> 1) & 1) != ((mask >> 2) & 1)) crossed.push_back(right());
            if (((mask >> 3) & 1) != ((mask >> 2) & 1)) crossed.push_back(top());
            if ((mask & 1) != ((mask >> 3) & 1)) crossed.push_back(left());
            if (crossed.size() == 2) {
                segments.emplace_back(crossed[0], crossed[1]);
            } else if (crossed.size() == 4) {
                // saddle: resolve with the cell-centre average
                const bool centre_inside = 0.25 * (v0 + v1 + v2 + v3) < 0.0;
                const bool corner0_inside = v0 < 0.0;
                if (centre_inside == corner0_inside) {
                    segments.emplace_back(crossed[0], crossed[1]);  // bottom-right
                    segments.emplace_back(crossed[2], crossed[3]);  // top-left
                } else {
                    segments.emplace_back(crossed[0], crossed[3]);  // bottom-left
                    segments.emplace_back(crossed[1], crossed[2]);  // right-top
                }
            }
        }
    }

    std::unordered_map<std::size_t, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].first].push_back(s);
        incident[segments[s].second].push_back(s);
    }
    std::vector<char> used(segments.size(), 0);

    auto walk = [&](std::size_t start_point) {
        Polyline line{points[start_point]};
        std::size_t cur = start_point;
        while (true) {
            std::size_t next_seg = segments.size();
            for (std::size_t s : incident[cur]) {
                if (!used[s]) {
                    next_seg = s;
                    break;
                }
            }
            if (next_seg == segments.size()) break;
            used[next_seg] = 1;
            cur = segments[next_seg].first == cur ? segments[next_seg].second : segments[next_seg].first;
            line.push_back(points[cur]);
        }
        return line;
    };

    // Open chains start at endpoints of degree one; visit them in a fixed order
    // so output is deterministic.
    std::vector<std::size_t> ends;
    for (const auto& [pt, segs] : incident) {
        if (segs.size() == 1) ends.push_back(pt);
    }
    std::sort(ends.begin(), ends.end());
    std::vector<Polyline> lines;
    for (std::size_t e : ends) {
        if (!used[incident[e].front()]) lines.push_back(walk(e));
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) lines.push_back(walk(segments[s].first));
    }
    return lines;
}

double row_interface_x(const Field2D& psi, const Grid2D& grid, int j) {
    for (int i = grid.nx - 2; i >= 0; --i) {
        const double a = psi(i, j);
        const double b = psi(i + 1, j);
        if (a < 0.0 && b >= 0.0) return grid.x(i) + grid.hx() * a / (a - b);
    }
    if (psi(grid.nx - 1, j) < 0.0) return grid.Lx;
    return -1.0;
}

int count_inside_components(const Field2D& psi, const Grid2D& grid) {
    std::vector<char> seen(psi.size(), 0);
    std::vector<std::size_t> stack;
    int components = 0;
    for (std::size_t start = 0; start < psi.size(); ++start) {
        if (seen[start] || !(psi[start] < 0.0)) continue;
        ++components;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % static_cast<std::size_t>(grid.nx));
            const int j = static_cast<int>(k / static_cast<std::size_t>(grid.nx));
            const int di[4] = {-1, 1, 0, 0};
            const int dj[4] = {0, 0, -1, 1};
            for (int d = 0; d < 4; ++d) {
                const int ii = i + di[d];
                const int jj = j + dj[d];
                if (ii < 0 || jj < 0 || ii >= grid.nx || jj >= grid.nz) continue;
                const std::size_t q = grid.index(ii, jj);
                if (!seen[q] && psi[q] < 0.0) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            }
        }
    }
    return components;
}

double signed_distance_defect(const Field2D& psi, const Grid2D& grid, double band) {
    double worst = 0.0;
    for (int j = 1; j + 1 < grid.nz; ++j) {
        for (int i = 1; i + 1 < grid.nx; ++i) {
            if (std::abs(psi(i, j)) >= band) continue;
            const double gx = (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * grid.hx());
            const double gz = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * grid.hz());
            worst = std::max(worst, std::abs(std::hypot(gx, gz) - 1.0));
        }
    }
    return worst;
}

}  // namespace tumorcord
