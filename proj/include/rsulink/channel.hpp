// SPDX-License-Identifier: Apache-2.0
//
// rsulink - passive radar aided mmWave V2I link configuration simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef RSULINK_CHANNEL_HPP
#define RSULINK_CHANNEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "rsulink/covariance.hpp"
#include "rsulink/scenario.hpp"

namespace rsulink::channel {

struct ArrayGeometry {
    int n_elements = 1;
    double spacing = 0.5; // inter-element spacing in wavelengths
    double carrier_hz = kCommCarrierHz;
};

/// Delay-tap MIMO channel: taps[d] is the n_rx x n_tx matrix at delay
/// d * t_c.
struct ChannelTaps {
    std::vector<Eigen::MatrixXcd> taps;
    double t_c = 0.0; // s, signalling interval
    double roll_off = 0.4;
};

/// Per-subcarrier frequency-domain channel, h[k] is n_rx x n_tx.
struct ChannelFreq {
    std::vector<Eigen::MatrixXcd> h;
};

/// ULA response, element n gets phase 2*pi*spacing*n*sin(angle).
Eigen::VectorXcd array_response(const ArrayGeometry& geom, double angle_rad);

/// Raised-cosine pulse with unit peak; the removable singularity at
/// tau = +-t_c/(2*roll_off) is evaluated by its analytic limit.
double pulse(double tau, double t_c, double roll_off);

/// Evaluates the geometric tap model: every cluster/ray contributes
/// gain * pulse(d*t_c - delay) * a_rx(aoa) a_tx(aod)^* per tap.
/// Throws TapWindowError when a path delay falls outside [0, n_taps*t_c).
ChannelTaps build_taps(const scenario::PathSet& paths, const ArrayGeometry& tx_geom,
                       const ArrayGeometry& rx_geom, int n_taps, double t_c,
                       double roll_off = 0.4);

/// DFT across taps, h[k] = sum_d taps[d] * exp(-j*2*pi*k*d/K).
ChannelFreq taps_to_freq(const ChannelTaps& taps, int n_subcarriers);

/// Subcarrier-averaged RSU-side covariance (1/K) sum_k H^*[k] H[k] / n_rx.
CovarianceMatrix comm_covariance(const ChannelFreq& freq);

} // namespace rsulink::channel

#endif
