#include "io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpp {

namespace {

[[noreturn]] void io_fail(const std::string& path, const char* what) {
    throw std::runtime_error(path + ": " + what);
}

void put_u64_le(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

} // namespace

void write_waveform_csv(const Waveform& w, const std::string& path) {
    w.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    out << "time_s,volts\n";
    char line[80];
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const double t = w.origin_time_s + static_cast<double>(i) / w.sample_rate_hz;
        std::snprintf(line, sizeof line, "%.9g,%.17g\n", t, w.samples[i]);
        out << line;
    }
    if (!out) io_fail(path, "write failed");
}

Waveform read_waveform_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) io_fail(path, "cannot open");
    Waveform w;
    std::string line;
    double t0 = 0, t1 = 0;
    bool have_t0 = false, have_t1 = false;
    while (std::getline(in, line)) {
        if (line.empty() || line == "time_s,volts") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) io_fail(path, "expected time_s,volts rows");
        const double t = std::stod(line.substr(0, comma));
        const double v = std::stod(line.substr(comma + 1));
        if (!have_t0) {
            t0 = t;
            have_t0 = true;
        } else if (!have_t1) {
            t1 = t;
            have_t1 = true;
        }
        w.samples.push_back(v);
    }
    if (w.samples.empty()) io_fail(path, "no samples");
    w.origin_time_s = t0;
    w.sample_rate_hz = have_t1 && t1 > t0 ? 1.0 / (t1 - t0) : 0.0;
    return w;
}

void write_waveform_raw(const Waveform& w, const std::string& path) {
    w.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    put_u64_le(out, w.samples.size());
    for (double v : w.samples) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put_u64_le(out, bits);
    }
    if (!out) io_fail(path, "write failed");

    std::ofstream meta(path + ".meta", std::ios::binary);
    if (!meta) io_fail(path + ".meta", "cannot open for writing");
    char buf[128];
    std::snprintf(buf, sizeof buf, "sample_rate_hz=%.17g\norigin_time_s=%.17g\n",
                  w.sample_rate_hz, w.origin_time_s);
    meta << buf;
}

Waveform read_waveform_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    Waveform w;
    const std::uint64_t count = get_u64_le(in);
    w.samples.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t bits = get_u64_le(in);
        std::memcpy(&w.samples[i], &bits, 8);
    }
    if (!in) io_fail(path, "truncated raw waveform");

    std::ifstream meta(path + ".meta");
    if (meta) {
        std::string line;
        while (std::getline(meta, line)) {
            if (line.rfind("sample_rate_hz=", 0) == 0) {
                w.sample_rate_hz = std::stod(line.substr(15));
            } else if (line.rfind("origin_time_s=", 0) == 0) {
                w.origin_time_s = std::stod(line.substr(14));
            }
        }
    }
    return w;
}

std::vector<double> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) io_fail(path, "cannot open");
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            // header or stray text row
            if (!out.empty()) io_fail(path, "malformed sample row");
        }
    }
    if (out.empty()) io_fail(path, "no samples");
    return out;
}

} // namespace mpp
