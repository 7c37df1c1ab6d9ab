#include "mixnorm/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mixnorm/errors.hpp"

namespace mixnorm {

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("file_hash: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= std::uint8_t(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)h);
    return hex;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config"] = m.config_echo.empty() ? nlohmann::json(nullptr)
                                        : nlohmann::json::parse(m.config_echo);
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["calibration"] = {{"path", m.calibration_path}, {"hash", m.calibration_hash}};
    j["outputs"] = m.outputs;
    j["wall_time_seconds"] = m.wall_time_seconds;
    std::ofstream out(path);
    if (!out) throw InvalidInput("write_manifest: cannot open " + path);
    out << j.dump(2) << "\n";
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace mixnorm
