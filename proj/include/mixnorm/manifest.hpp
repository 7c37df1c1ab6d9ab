#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixnorm {

/// Reproducibility record written next to every CLI output.
struct RunManifest {
    std::string command;                  // full argv echo
    std::string config_echo;              // JSON echo of the effective configuration
    std::string version = "mixnorm 1.0.0";
    std::uint64_t seed = 0;
    std::string calibration_path;         // empty when unused
    std::string calibration_hash;         // FNV-1a 64 of the calibration file bytes
    std::vector<std::string> outputs;
    double wall_time_seconds = 0.0;
};

/// FNV-1a 64-bit hash of a file's bytes, hex-encoded.
std::string file_hash(const std::string& path);

void write_manifest(const RunManifest& m, const std::string& path);

/// Reproducible float formatting (%.17g) shared by every CSV/JSON writer.
std::string fmt_g17(double v);

}  // namespace mixnorm
