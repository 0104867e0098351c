#ifndef MPP_PULSE_HPP
#define MPP_PULSE_HPP

#include <cstdint>
#include <vector>

#include "codec.hpp"

namespace mpp {

/// Parametric model of the transmit pulse: a damped sinusoid whose first
/// positive lobe is scaled to the positive peak and whose negative lobes
/// are rescaled to the negative peak magnitude.
struct PulseShape {
    double positive_peak_volts = 50.0;
    double negative_peak_volts = 40.0; // magnitude
    double ring_frequency_hz = 5.0e5;
    double decay_time_s = 1.2e-6;
    double duration_s = 3.9e-6;

    void validate() const;
};

struct SlotTiming {
    double slot_duration_s = 3.9e-6;
    std::uint32_t slots_per_packet = 256;
    double sample_rate_hz = 4.1e7;

    std::uint32_t samples_per_slot() const noexcept {
        return static_cast<std::uint32_t>(slot_duration_s * sample_rate_hz);
    }
    void validate() const;
};

/// Uniformly sampled voltage sequence.
struct Waveform {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    double origin_time_s = 0.0;

    double rms() const noexcept;
    void validate() const; // non-empty, finite values only
};

struct TransmissionPlan {
    std::vector<Packet> packets;
    double inter_message_pause_s = 0.050;
    std::uint32_t repetitions = 1;
};

Waveform synthesize_pulse(const PulseShape& shape, double sample_rate_hz);

/// One packet as a waveform: marked slots carry the pulse, others are zero.
Waveform modulate(const Packet& packet, const SlotTiming& timing, const PulseShape& shape);

/// Packets back to back, a pause of zeros, repeated. Segment boundaries
/// land on whole samples (durations are floored), so lengths are exact.
Waveform build_transmission(const TransmissionPlan& plan, const SlotTiming& timing,
                            const PulseShape& shape);

Waveform scale_signal(Waveform waveform, double gain);

} // namespace mpp

#endif // MPP_PULSE_HPP
