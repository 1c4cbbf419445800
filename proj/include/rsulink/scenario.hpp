// SPDX-License-Identifier: Apache-2.0
//
// rsulink - passive radar aided mmWave V2I link configuration simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef RSULINK_SCENARIO_HPP
#define RSULINK_SCENARIO_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsulink/common.hpp"

namespace rsulink::scenario {

using Vec3 = Eigen::Vector3d;

/// Cosine-shaped element mainlobe pinned at two points: -3 dB (power) at
/// half the 3 dB beamwidth and a hard zero beyond half the first-null
/// beamwidth. Gain is an amplitude factor applied per ray.
struct ElementPattern {
    double bw_3db_deg = 120.0;
    double bw_null_deg = 150.0;

    double gain(double off_boresight_rad) const;
    bool covers(double off_boresight_rad) const;
};

enum class VehicleKind { car, truck };

struct VehicleDims {
    double length = 0.0;
    double width = 0.0;
    double height = 0.0;
};

struct DropConfig {
    int lane_count = 4;
    double lane_width = 3.5;                                // m
    std::vector<double> lane_speeds_kmh = {60, 50, 25, 15}; // one entry per lane
    double car_fraction = 0.8;
    VehicleDims car_dims = {5.0, 2.0, 1.6};
    VehicleDims truck_dims = {13.0, 2.6, 3.0};
    double road_length = 100.0; // m, centred on x = 0
    double rsu_height = 5.0;    // m
    Vec3 rsu_position = {0.0, -5.0, 5.0};
    double min_gap = 2.0;     // m, bumper to bumper
    double headway_time = 2.0; // s, sets the exponential gap mean per lane
    double fov_deg = 120.0;   // RSU field of view used by select_ego

    // Single-bounce reflection environment: two roadside wall planes
    // (y = const) and the vehicle bounding boxes.
    double wall_y_low = -8.0;
    double wall_y_high = 18.0;
    double wall_reflectivity = 0.6;
    double vehicle_reflectivity = 0.8;

    void validate() const; // throws std::invalid_argument
};

struct Vehicle {
    int lane = 0;
    VehicleKind kind = VehicleKind::car;
    Vec3 center = Vec3::Zero(); // box center, z = height/2; heading is +x
    VehicleDims dims;
    double speed_kmh = 0.0;
};

struct DropScenario {
    std::vector<Vehicle> vehicles;
    int ego_index = -1;
    uint64_t rng_seed = 0;
    DropConfig config; // geometry carried along for path synthesis and dump
};

enum class MountKind { comm_array, radar_tx };

struct MountPoint {
    Vec3 position = Vec3::Zero();
    double boresight_az = 0.0; // rad, from +x axis, CCW in the xy plane
    MountKind kind = MountKind::comm_array;
    ElementPattern pattern;
};

/// One propagation ray, stored relative to its cluster means.
struct Ray {
    double delay_rel = 0.0;  // s
    double aoa_shift = 0.0;  // rad, at the rx mount
    double aod_shift = 0.0;  // rad, at the tx mount
    cplx gain = {0.0, 0.0};
};

struct PathCluster {
    double delay_mean = 0.0; // s
    double aoa_mean = 0.0;   // rad, at the rx mount
    double aod_mean = 0.0;   // rad, at the tx mount
    std::vector<Ray> rays;
};

struct PathSet {
    std::vector<PathCluster> clusters;
    bool los_flag = false;

    bool empty() const { return clusters.empty(); }
    std::size_t ray_count() const;
};

/// Fills every lane with vehicles drawn per the 3GPP urban drop rules:
/// kind with probability car_fraction, bumper gaps max(min_gap, X) with X
/// exponential of mean lane_speed * headway_time. Throws EmptyLaneError
/// when the road cannot hold a single vehicle in some lane.
DropScenario generate_drop(const DropConfig& cfg, uint64_t seed);

/// Uniform draw among the vehicles inside the RSU field of view.
/// Throws NoCandidateError when no vehicle qualifies.
int select_ego(const DropScenario& drop, double fov_rad, uint64_t seed);

/// The four communication arrays (side centers, z = 1.6 m) or the four
/// corner radars (z = 0.75 m, front/back pairs rotated 10 deg outward).
/// Order: comm {front, back, left, right}; radar {front-left, front-right,
/// back-left, back-right}.
std::vector<MountPoint> mount_points(const Vehicle& v, MountKind kind);

/// RSU-side mount; the radar array sits 10 cm below the communication one.
MountPoint rsu_mount(const DropConfig& cfg, MountKind kind);

/// Geometric LOS + single-bounce image paths between two mounts.
/// Deterministic in (drop, mounts, band, seed); comm and radar band share
/// ray geometry and differ only in gains. A fully blocked link yields an
/// empty PathSet with los_flag = false.
PathSet synthesize_paths(const DropScenario& drop, const MountPoint& tx,
                         const MountPoint& rx, Band band, uint64_t seed);

// Line-oriented scenario dump: header "# rsulink-drop seed=... config=...",
// then one vehicle per line "lane kind x y z L W H speed_kmh".
void dump_scenario(std::ostream& os, const DropScenario& drop);
DropScenario load_scenario(std::istream& is, const DropConfig& cfg);
uint64_t config_hash(const DropConfig& cfg);

} // namespace rsulink::scenario

#endif
