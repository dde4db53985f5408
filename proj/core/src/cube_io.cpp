#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "tonetk/errors.hpp"
#include "tonetk/lut.hpp"

#include <nlohmann/json.hpp>

namespace tonetk {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line_no, const std::string& why) {
    throw InputError("read_cube: " + path + ":" + std::to_string(line_no) + ": " + why);
}

bool parse_triplet(const std::string& line, double out[3]) {
    std::istringstream ss(line);
    if (!(ss >> out[0] >> out[1] >> out[2])) return false;
    std::string rest;
    if (ss >> rest) return false;
    return true;
}

} // namespace

Lut3D read_cube(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("read_cube: cannot open " + path);

    Lut3D lut;
    std::size_t expected = 0;
    std::size_t filled = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        std::string body = line.substr(start, end - start + 1);
        if (body.empty() || body[0] == '#') continue;

        if (body.rfind("TITLE", 0) == 0) {
            if (lut.size != 0) parse_fail(path, line_no, "TITLE after LUT_3D_SIZE");
            continue;
        }
        if (body.rfind("LUT_3D_SIZE", 0) == 0) {
            if (lut.size != 0) parse_fail(path, line_no, "duplicate LUT_3D_SIZE");
            std::istringstream ss(body.substr(11));
            int n = 0;
            if (!(ss >> n) || n < 2) parse_fail(path, line_no, "invalid LUT_3D_SIZE");
            lut.size = n;
            expected = static_cast<std::size_t>(n) * n * n;
            lut.table.assign(expected, Rgb{});
            continue;
        }
        if (body.rfind("DOMAIN_MIN", 0) == 0 || body.rfind("DOMAIN_MAX", 0) == 0) {
            bool is_min = body.rfind("DOMAIN_MIN", 0) == 0;
            double v[3];
            if (!parse_triplet(body.substr(10), v)) parse_fail(path, line_no, "malformed domain line");
            double want = is_min ? 0.0 : 1.0;
            for (int k = 0; k < 3; ++k)
                if (v[k] != want) parse_fail(path, line_no, "only the [0,1] domain is supported");
            continue;
        }

        if (lut.size == 0) parse_fail(path, line_no, "data before LUT_3D_SIZE");
        if (filled >= expected) parse_fail(path, line_no, "extra data line past table size");
        double v[3];
        if (!parse_triplet(body, v)) parse_fail(path, line_no, "expected three decimal values");
        for (int k = 0; k < 3; ++k) {
            if (!(v[k] >= -1e-9 && v[k] <= 1.0 + 1e-9))
                parse_fail(path, line_no, "value outside [0,1]");
            lut.table[filled][k] = std::clamp(v[k], 0.0, 1.0);
        }
        ++filled;
    }
    if (lut.size == 0) throw InputError("read_cube: " + path + ": missing LUT_3D_SIZE header");
    if (filled != expected)
        throw InputError("read_cube: " + path + ": expected " + std::to_string(expected) +
                         " data lines, found " + std::to_string(filled) +
                         " (missing from line " + std::to_string(line_no + 1) + ")");
    return lut;
}

void write_cube(const Lut3D& lut, const std::string& path, const std::string& title) {
    if (lut.size < 2 || lut.table.size() != static_cast<std::size_t>(lut.size) * lut.size * lut.size)
        throw InputError("write_cube: invalid LUT");
    std::ofstream out(path);
    if (!out) throw InputError("write_cube: cannot open " + path);
    if (!title.empty()) out << "TITLE \"" << title << "\"\n";
    out << "LUT_3D_SIZE " << lut.size << "\n";
    char buf[64];
    for (const auto& e : lut.table) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", e.r, e.g, e.b);
        out << buf;
    }
    if (!out) throw InputError("write_cube: write failed for " + path);
}

std::string LutFitReport::to_json() const {
    nlohmann::json j;
    j["data_residual"] = data_residual;
    j["iterations"] = iterations;
    j["unconstrained_vertices"] = unconstrained_vertices;
    j["converged"] = converged;
    return j.dump();
}

} // namespace tonetk
