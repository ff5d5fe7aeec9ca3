#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "csign/sweep.hpp"

#ifndef CSIGN_VERSION
#define CSIGN_VERSION "0.0.0"
#endif

namespace csign {

std::string version() { return CSIGN_VERSION; }

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (value == 0.0) return "0";  // folds -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename to " + path + " failed: " + ec.message());
    }
}

}  // namespace csign
