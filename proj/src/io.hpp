#ifndef MPP_IO_HPP
#define MPP_IO_HPP

#include <string>
#include <vector>

#include "pulse.hpp"

namespace mpp {

/// CSV with header `time_s,volts`.
void write_waveform_csv(const Waveform& w, const std::string& path);
Waveform read_waveform_csv(const std::string& path);

/// Raw format: 8-byte little-endian sample count, then 64-bit IEEE-754
/// little-endian samples. Sample rate and origin go into `<path>.meta`.
void write_waveform_raw(const Waveform& w, const std::string& path);
Waveform read_waveform_raw(const std::string& path);

/// Voltage column reader for fit inputs: accepts `time_s,volts` or a
/// single `volts` column, with or without a header line.
std::vector<double> read_samples_csv(const std::string& path);

} // namespace mpp

#endif // MPP_IO_HPP
