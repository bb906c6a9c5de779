#pragma once

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(SMARTBAND_TEST_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Unique scratch path under the build tree's temp dir.
inline std::string temp_path(const std::string& stem) {
    static std::mt19937_64 rng(std::random_device{}());
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s/sbtest_%s_%016llx",
                  "/tmp", stem.c_str(),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

}  // namespace testutil
