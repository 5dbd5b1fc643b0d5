#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ionmotion/dynamics.hpp"
#include "ionmotion/physcore.hpp"
#include "ionmotion/spectroscopy.hpp"

namespace ionmotion {

// Default RNG seed when the config and command line give none.
inline constexpr std::uint64_t kDefaultSeed = 0xCD111;

struct SweepSection {
    double freq_min = 0.0;  // rad/s
    double freq_max = 0.0;  // rad/s
    int points = 0;
    bool log_spacing = true;
    bool present = false;
};

// Fully validated run description, SI units throughout. Parsed from flat
// sectioned key = value text where every dimensionful key names its unit
// (freq_mhz, t_probe_us, d_um, ...).
struct RunConfig {
    IonSpecies ion;
    TrapConfig trap;
    RamanGeometry raman;
    NoiseModel noise;
    ProbeConfig probe;
    CoolingSchedule schedule;
    SweepSection sweep;

    std::uint64_t seed = kDefaultSeed;
    std::vector<double> delays;  // s
};

RunConfig parse_config(const std::filesystem::path& path);

}  // namespace ionmotion
