// SPDX-License-Identifier: Apache-2.0
//
// rsulink - passive radar aided mmWave V2I link configuration simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "rsulink/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace rsulink::scenario {

namespace {

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

Vec3 az_dir(double az) { return {std::cos(az), std::sin(az), 0.0}; }

// Array axis: boresight rotated +90 deg in the horizontal plane. The ULA
// steering angle of a direction d is asin(d . axis).
Vec3 az_axis(double az) { return {-std::sin(az), std::cos(az), 0.0}; }

struct Box {
    Vec3 lo, hi;
};

Box vehicle_box(const Vehicle& v) {
    const Vec3 half{v.dims.length / 2.0, v.dims.width / 2.0, v.dims.height / 2.0};
    return {v.center - half, v.center + half};
}

bool box_contains(const Box& b, const Vec3& p, double pad) {
    return p.x() >= b.lo.x() - pad && p.x() <= b.hi.x() + pad && p.y() >= b.lo.y() - pad &&
           p.y() <= b.hi.y() + pad && p.z() >= b.lo.z() - pad && p.z() <= b.hi.z() + pad;
}

// Slab test, boxes shrunk by eps so rays grazing a face do not count as
// blocked (mounts and reflection points sit exactly on box surfaces).
bool segment_hits_box(const Vec3& a, const Vec3& b, const Box& box, double eps = 1e-7) {
    double tmin = 0.0, tmax = 1.0;
    for (int ax = 0; ax < 3; ++ax) {
        const double lo = box.lo[ax] + eps;
        const double hi = box.hi[ax] - eps;
        const double d = b[ax] - a[ax];
        if (std::abs(d) < 1e-15) {
            if (a[ax] <= lo || a[ax] >= hi) return false;
            continue;
        }
        double t0 = (lo - a[ax]) / d;
        double t1 = (hi - a[ax]) / d;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin >= tmax) return false;
    }
    return true;
}

} // namespace

double ElementPattern::gain(double off_boresight_rad) const {
    const double psi = std::abs(off_boresight_rad);
    const double psi_null = deg2rad(bw_null_deg / 2.0);
    const double psi_3db = deg2rad(bw_3db_deg / 2.0);
    if (psi >= psi_null) return 0.0;
    // cos(a*psi)^p with a zeroing at the first null and p pinning the
    // -3 dB power point at half the 3 dB beamwidth.
    const double a = (kPi / 2.0) / psi_null;
    const double p = std::log(1.0 / std::sqrt(2.0)) / std::log(std::cos(a * psi_3db));
    return std::pow(std::cos(a * psi), p);
}

bool ElementPattern::covers(double off_boresight_rad) const {
    return std::abs(off_boresight_rad) < deg2rad(bw_null_deg / 2.0);
}

std::size_t PathSet::ray_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.rays.size();
    return n;
}

void DropConfig::validate() const {
    if (lane_count <= 0) throw std::invalid_argument("lane_count must be positive");
    if (static_cast<int>(lane_speeds_kmh.size()) != lane_count)
        throw std::invalid_argument("lane_speeds_kmh must have one entry per lane");
    if (car_fraction < 0.0 || car_fraction > 1.0)
        throw std::invalid_argument("car_fraction must be in [0, 1]");
    for (const auto* d : {&car_dims, &truck_dims})
        if (d->length <= 0 || d->width <= 0 || d->height <= 0)
            throw std::invalid_argument("vehicle dimensions must be positive");
    if (lane_width <= 0 || road_length <= 0 || rsu_height <= 0 || min_gap <= 0 ||
        headway_time <= 0)
        throw std::invalid_argument("scenario lengths/times must be positive");
    if (std::abs(rsu_position.z() - rsu_height) > 1e-9)
        throw std::invalid_argument("rsu_position z must equal rsu_height");
    if (wall_y_high <= wall_y_low) throw std::invalid_argument("wall planes out of order");
}

DropScenario generate_drop(const DropConfig& cfg, uint64_t seed) {
    cfg.validate();
    DropScenario drop;
    drop.rng_seed = seed;
    drop.config = cfg;

    for (int lane = 0; lane < cfg.lane_count; ++lane) {
        Rng rng(derive_seed(seed, 1000 + static_cast<uint64_t>(lane)));
        const double speed = cfg.lane_speeds_kmh[lane];
        const double gap_mean = speed / 3.6 * cfg.headway_time; // m
        const double lane_y = (lane + 0.5) * cfg.lane_width;

        double cursor = -cfg.road_length / 2.0 + rng.uniform(0.0, gap_mean);
        bool placed = false;
        while (true) {
            const bool is_car = rng.uniform01() < cfg.car_fraction;
            const VehicleDims dims = is_car ? cfg.car_dims : cfg.truck_dims;
            const double front = cursor + dims.length;
            if (front > cfg.road_length / 2.0) break;
            Vehicle v;
            v.lane = lane;
            v.kind = is_car ? VehicleKind::car : VehicleKind::truck;
            v.dims = dims;
            v.speed_kmh = speed;
            v.center = {cursor + dims.length / 2.0, lane_y, dims.height / 2.0};
            drop.vehicles.push_back(v);
            placed = true;
            cursor = front + std::max(cfg.min_gap, rng.exponential(gap_mean));
        }
        if (!placed)
            throw EmptyLaneError("road too short to place any vehicle in lane " +
                                 std::to_string(lane));
    }
    return drop;
}

int select_ego(const DropScenario& drop, double fov_rad, uint64_t seed) {
    const auto& cfg = drop.config;
    const MountPoint rsu = rsu_mount(cfg, MountKind::comm_array);
    std::vector<int> candidates;
    for (std::size_t i = 0; i < drop.vehicles.size(); ++i) {
        const Vec3 d = drop.vehicles[i].center - rsu.position;
        const double az = std::atan2(d.y(), d.x());
        if (std::abs(wrap_angle(az - rsu.boresight_az)) < fov_rad / 2.0)
            candidates.push_back(static_cast<int>(i));
    }
    if (candidates.empty()) throw NoCandidateError("no vehicle inside the RSU field of view");
    Rng rng(derive_seed(seed, 77));
    return candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
}

std::vector<MountPoint> mount_points(const Vehicle& v, MountKind kind) {
    if (v.dims.length <= 0 || v.dims.width <= 0 || v.dims.height <= 0)
        throw std::invalid_argument("vehicle has invalid dimensions");
    const double hl = v.dims.length / 2.0;
    const double hw = v.dims.width / 2.0;
    const double cx = v.center.x();
    const double cy = v.center.y();
    std::vector<MountPoint> mounts;
    if (kind == MountKind::comm_array) {
        const double z = 1.6;
        // front, back, left, right (heading +x)
        mounts.push_back({{cx + hl, cy, z}, 0.0, kind, {}});
        mounts.push_back({{cx - hl, cy, z}, kPi, kind, {}});
        mounts.push_back({{cx, cy + hw, z}, kPi / 2.0, kind, {}});
        mounts.push_back({{cx, cy - hw, z}, -kPi / 2.0, kind, {}});
    } else {
        const double z = 0.75;
        const double rot = deg2rad(10.0);
        // corner radars: side-facing boresights rotated 10 deg toward the
        // near bumper (front pair toward +x, back pair toward -x)
        mounts.push_back({{cx + hl, cy + hw, z}, kPi / 2.0 - rot, kind, {}});  // front-left
        mounts.push_back({{cx + hl, cy - hw, z}, -kPi / 2.0 + rot, kind, {}}); // front-right
        mounts.push_back({{cx - hl, cy + hw, z}, kPi / 2.0 + rot, kind, {}});  // back-left
        mounts.push_back({{cx - hl, cy - hw, z}, -kPi / 2.0 - rot, kind, {}}); // back-right
    }
    return mounts;
}

MountPoint rsu_mount(const DropConfig& cfg, MountKind kind) {
    MountPoint m;
    m.kind = kind;
    m.position = cfg.rsu_position;
    if (kind == MountKind::radar_tx) m.position.z() -= 0.1;
    const double road_center_y = cfg.lane_count * cfg.lane_width / 2.0;
    m.boresight_az = (road_center_y >= cfg.rsu_position.y()) ? kPi / 2.0 : -kPi / 2.0;
    return m;
}

namespace {

struct PathContext {
    const DropScenario* drop;
    const MountPoint* tx;
    const MountPoint* rx;
    double wavelength;
    uint64_t seed;
    std::vector<Box> boxes;
    int tx_host;
    int rx_host;
    PathSet out;
};

int host_vehicle(const std::vector<Box>& boxes, const Vec3& p) {
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (box_contains(boxes[i], p, 0.05)) return static_cast<int>(i);
    return -1;
}

bool path_clear(const PathContext& ctx, const Vec3& a, const Vec3& b, int skip = -1) {
    for (std::size_t i = 0; i < ctx.boxes.size(); ++i) {
        const int idx = static_cast<int>(i);
        if (idx == ctx.tx_host || idx == ctx.rx_host || idx == skip) continue;
        if (segment_hits_box(a, b, ctx.boxes[i])) return false;
    }
    return true;
}

// Turns a geometric path (tx -> waypoints -> rx) into a ray if both
// element patterns cover the end directions. Phase is drawn from the
// seed/tag pair only, so the two bands share it exactly.
bool add_ray(PathContext& ctx, const std::vector<Vec3>& pts, double reflectivity,
             uint64_t tag) {
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) length += (pts[i + 1] - pts[i]).norm();
    if (length <= 0.0) return false;

    const Vec3 dep = (pts[1] - pts[0]).normalized();
    const Vec3 arr = (pts[pts.size() - 2] - pts.back()).normalized();

    const Vec3 tx_bs = az_dir(ctx.tx->boresight_az);
    const Vec3 rx_bs = az_dir(ctx.rx->boresight_az);
    const double off_tx = std::acos(std::clamp(dep.dot(tx_bs), -1.0, 1.0));
    const double off_rx = std::acos(std::clamp(arr.dot(rx_bs), -1.0, 1.0));
    if (!ctx.tx->pattern.covers(off_tx) || !ctx.rx->pattern.covers(off_rx)) return false;

    const double aod = std::asin(std::clamp(dep.dot(az_axis(ctx.tx->boresight_az)), -1.0, 1.0));
    const double aoa = std::asin(std::clamp(arr.dot(az_axis(ctx.rx->boresight_az)), -1.0, 1.0));

    const double amp = ctx.wavelength / (4.0 * kPi * length) * reflectivity *
                       ctx.tx->pattern.gain(off_tx) * ctx.rx->pattern.gain(off_rx);
    Rng rng(derive_seed(ctx.seed, tag));
    const double phase = rng.uniform(0.0, 2.0 * kPi);

    PathCluster cluster;
    cluster.delay_mean = length / kSpeedOfLight;
    cluster.aoa_mean = aoa;
    cluster.aod_mean = aod;
    cluster.rays.push_back({0.0, 0.0, 0.0, std::polar(amp, phase)});
    ctx.out.clusters.push_back(std::move(cluster));
    return true;
}

// Image-source reflection off the plane coord[axis] = offset. Returns the
// reflection point if tx and rx lie on the same side and the mirrored
// segment crosses the plane strictly between the endpoints.
bool reflection_point(const Vec3& tx, const Vec3& rx, int axis, double offset, Vec3& point) {
    const double st = tx[axis] - offset;
    const double sr = rx[axis] - offset;
    if (st * sr <= 0.0 || std::abs(st) < 1e-12) return false;
    Vec3 img = tx;
    img[axis] = 2.0 * offset - tx[axis];
    const double denom = rx[axis] - img[axis];
    if (std::abs(denom) < 1e-15) return false;
    const double t = (offset - img[axis]) / denom;
    if (t <= 0.0 || t >= 1.0) return false;
    point = img + t * (rx - img);
    return true;
}

} // namespace

PathSet synthesize_paths(const DropScenario& drop, const MountPoint& tx, const MountPoint& rx,
                         Band band, uint64_t seed) {
    PathContext ctx;
    ctx.drop = &drop;
    ctx.tx = &tx;
    ctx.rx = &rx;
    ctx.wavelength = kSpeedOfLight / band_carrier_hz(band);
    ctx.seed = seed;
    ctx.boxes.reserve(drop.vehicles.size());
    for (const auto& v : drop.vehicles) ctx.boxes.push_back(vehicle_box(v));
    ctx.tx_host = host_vehicle(ctx.boxes, tx.position);
    ctx.rx_host = host_vehicle(ctx.boxes, rx.position);

    // LOS
    if (path_clear(ctx, tx.position, rx.position))
        ctx.out.los_flag = add_ray(ctx, {tx.position, rx.position}, 1.0, 0);

    // wall bounces
    const auto& cfg = drop.config;
    const std::array<double, 2> walls = {cfg.wall_y_low, cfg.wall_y_high};
    for (std::size_t w = 0; w < walls.size(); ++w) {
        Vec3 p;
        if (!reflection_point(tx.position, rx.position, 1, walls[w], p)) continue;
        if (p.z() < 0.0) continue;
        if (!path_clear(ctx, tx.position, p) || !path_clear(ctx, p, rx.position)) continue;
        add_ray(ctx, {tx.position, p, rx.position}, cfg.wall_reflectivity, 1 + w);
    }

    // single bounces off vehicle boxes: four side faces and the roof
    for (std::size_t vi = 0; vi < ctx.boxes.size(); ++vi) {
        const int idx = static_cast<int>(vi);
        if (idx == ctx.tx_host || idx == ctx.rx_host) continue;
        const Box& b = ctx.boxes[vi];
        const std::array<std::pair<int, double>, 5> faces = {{
            {0, b.hi.x()}, {0, b.lo.x()}, {1, b.hi.y()}, {1, b.lo.y()}, {2, b.hi.z()},
        }};
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const auto [axis, offset] = faces[f];
            // outward side only: for lo faces the mirrored geometry still
            // requires both endpoints beyond the face plane, which
            // reflection_point enforces together with the box check below.
            const bool hi_face = (offset == b.hi[axis]);
            const double side_tx = tx.position[axis] - offset;
            if (hi_face ? side_tx <= 0.0 : side_tx >= 0.0) continue;
            Vec3 p;
            if (!reflection_point(tx.position, rx.position, axis, offset, p)) continue;
            bool on_face = true;
            for (int ax = 0; ax < 3; ++ax) {
                if (ax == axis) continue;
                if (p[ax] < b.lo[ax] || p[ax] > b.hi[ax]) on_face = false;
            }
            if (!on_face) continue;
            if (!path_clear(ctx, tx.position, p, idx) || !path_clear(ctx, p, rx.position, idx))
                continue;
            add_ray(ctx, {tx.position, p, rx.position}, cfg.vehicle_reflectivity,
                    100 + vi * 8 + f);
        }
    }
    return ctx.out;
}

void dump_scenario(std::ostream& os, const DropScenario& drop) {
    os << "# rsulink-drop seed=" << drop.rng_seed << " config=" << std::hex
       << config_hash(drop.config) << std::dec << "\n";
    char line[256];
    for (const auto& v : drop.vehicles) {
        std::snprintf(line, sizeof line,
                      "%d %s %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", v.lane,
                      v.kind == VehicleKind::car ? "car" : "truck", v.center.x(), v.center.y(),
                      v.center.z(), v.dims.length, v.dims.width, v.dims.height, v.speed_kmh);
        os << line;
    }
}

DropScenario load_scenario(std::istream& is, const DropConfig& cfg) {
    DropScenario drop;
    drop.config = cfg;
    std::string header;
    if (!std::getline(is, header) || header.rfind("# rsulink-drop", 0) != 0)
        throw std::runtime_error("scenario dump: missing header line");
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("seed=", 0) == 0) drop.rng_seed = std::stoull(tok.substr(5));
            if (tok.rfind("config=", 0) == 0) {
                if (std::stoull(tok.substr(7), nullptr, 16) != config_hash(cfg))
                    throw std::runtime_error("scenario dump: config hash mismatch");
            }
        }
    }
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        Vehicle v;
        std::string kind;
        ls >> v.lane >> kind >> v.center.x() >> v.center.y() >> v.center.z() >>
            v.dims.length >> v.dims.width >> v.dims.height >> v.speed_kmh;
        if (!ls) throw std::runtime_error("scenario dump: malformed vehicle line");
        v.kind = (kind == "truck") ? VehicleKind::truck : VehicleKind::car;
        drop.vehicles.push_back(v);
    }
    return drop;
}

uint64_t config_hash(const DropConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << cfg.lane_count << ' ' << cfg.lane_width << ' ' << cfg.car_fraction << ' '
       << cfg.road_length << ' ' << cfg.rsu_height << ' ' << cfg.min_gap << ' '
       << cfg.headway_time << ' ' << cfg.fov_deg << ' ' << cfg.wall_y_low << ' '
       << cfg.wall_y_high << ' ' << cfg.wall_reflectivity << ' ' << cfg.vehicle_reflectivity
       << ' ' << cfg.rsu_position.transpose() << ' ' << cfg.car_dims.length << ' '
       << cfg.car_dims.width << ' ' << cfg.car_dims.height << ' ' << cfg.truck_dims.length
       << ' ' << cfg.truck_dims.width << ' ' << cfg.truck_dims.height;
    for (double s : cfg.lane_speeds_kmh) os << ' ' << s;
    uint64_t h = 1469598103934665603ULL;
    for (char c : os.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace rsulink::scenario
