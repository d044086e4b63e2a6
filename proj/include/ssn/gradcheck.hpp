#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssn/model.hpp"

namespace ssn {

/// |analytic - numeric| / max(|analytic|, |numeric|, floor). The floor keeps
/// entries whose true gradient is ~0 from dividing noise by noise.
inline constexpr double kRelErrorFloor = 1e-6;
double relative_error(double analytic, double numeric, double floor = kRelErrorFloor);

struct BlockCheck {
    std::string name;
    double max_rel_error = 0.0;
};

struct GradCheckReport {
    ModelKind kind = ModelKind::Ssn;
    std::size_t configs = 0;
    double epsilon = 1e-5;
    double tolerance = 1e-4;
    std::vector<BlockCheck> blocks;  // worst case per block over all configs
    double max_rel_error = 0.0;
    /// Dead-zone probe: loss exactly 0 and every analytic and numeric entry 0.
    bool dead_zone_ok = false;

    bool passed() const { return max_rel_error < tolerance && dead_zone_ok; }
};

/// Draws `configs` random small networks (embed_dim <= 6, z_dim <= 5,
/// d_dim <= 3) with inputs pushed outside the hinge dead zone and compares
/// the analytic gradient against central differences.
GradCheckReport grad_check(ModelKind kind, std::size_t configs, std::uint64_t seed, double epsilon = 1e-5,
                           double tolerance = 1e-4);

}  // namespace ssn
