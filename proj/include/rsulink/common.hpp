// SPDX-License-Identifier: Apache-2.0
//
// rsulink - passive radar aided mmWave V2I link configuration simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef RSULINK_COMMON_HPP
#define RSULINK_COMMON_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace rsulink {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Carrier frequencies of the two co-sited systems.
enum class Band { comm, radar };

inline constexpr double kCommCarrierHz = 73e9;
inline constexpr double kRadarCarrierHz = 76e9;

inline double band_carrier_hz(Band b) {
    return b == Band::comm ? kCommCarrierHz : kRadarCarrierHz;
}

// Domain error types. Contract violations (bad arguments that a caller
// should never pass) use std::invalid_argument instead.
struct EmptyLaneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoCandidateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TapWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChirpWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExtrapolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Streams derived with distinct salts are independent for all practical
// purposes; used to give every drop / link / draw its own seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt ^ 0x6a09e667f3bcc909ULL));
}

// Thin RNG wrapper. Distributions are hand-rolled on top of mt19937_64 so
// that sequences do not depend on the standard library implementation.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // exact integer in [0, n)
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        const uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % static_cast<uint64_t>(n));
        uint64_t v;
        do {
            v = eng_();
        } while (v >= bound);
        return static_cast<int>(v % static_cast<uint64_t>(n));
    }

    double exponential(double mean) { return -mean * std::log(1.0 - uniform01()); }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    // circularly symmetric complex Gaussian with total variance `var`
    cplx cnormal(double var) {
        const double s = std::sqrt(var / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace rsulink

#endif
