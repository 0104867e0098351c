#include "pulse.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mpp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void PulseShape::validate() const {
    if (positive_peak_volts <= 0 || negative_peak_volts <= 0 || ring_frequency_hz <= 0 ||
        decay_time_s <= 0 || duration_s <= 0) {
        throw std::invalid_argument("pulse shape fields must be positive");
    }
    if (duration_s < 1.0 / ring_frequency_hz) {
        throw std::invalid_argument("pulse duration must cover at least one ring period");
    }
}

void SlotTiming::validate() const {
    if (slot_duration_s <= 0 || sample_rate_hz <= 0) {
        throw std::invalid_argument("slot timing fields must be positive");
    }
    if (slots_per_packet < 2) throw std::invalid_argument("slots_per_packet must be >= 2");
    if (sample_rate_hz * slot_duration_s < 16.0) {
        throw std::invalid_argument("need at least 16 samples per slot");
    }
}

double Waveform::rms() const noexcept {
    if (samples.empty()) return 0.0;
    double acc = 0;
    for (double v : samples) acc += v * v;
    return std::sqrt(acc / static_cast<double>(samples.size()));
}

void Waveform::validate() const {
    if (samples.empty()) throw std::invalid_argument("waveform must not be empty");
    for (double v : samples) {
        if (!std::isfinite(v)) throw std::invalid_argument("waveform samples must be finite");
    }
}

Waveform synthesize_pulse(const PulseShape& shape, double sample_rate_hz) {
    shape.validate();
    if (sample_rate_hz <= 0 || sample_rate_hz * shape.duration_s < 16.0) {
        throw std::invalid_argument("sample rate undersamples the pulse");
    }

    const double omega = kTwoPi * shape.ring_frequency_hz;
    const double tau = shape.decay_time_s;
    auto base = [&](double t) { return std::sin(omega * t) * std::exp(-t / tau); };

    // Extrema of sin(wt)e^{-t/tau} lie at wt = atan(w tau) + m*pi. The first
    // (m=0) is the global max, the second (m=1) the global min; both always
    // fall inside one ring period.
    const double phase = std::atan(omega * tau);
    const double peak_pos = base(phase / omega);
    const double peak_neg = base((phase + 3.14159265358979323846) / omega);
    const double amp = shape.positive_peak_volts / peak_pos;
    const double neg_scale = shape.negative_peak_volts / (amp * -peak_neg);

    Waveform w;
    w.sample_rate_hz = sample_rate_hz;
    const std::size_t count = static_cast<std::size_t>(shape.duration_s * sample_rate_hz);
    w.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = amp * base(static_cast<double>(i) / sample_rate_hz);
        if (v < 0) v *= neg_scale;
        w.samples[i] = v;
    }
    return w;
}

Waveform modulate(const Packet& packet, const SlotTiming& timing, const PulseShape& shape) {
    timing.validate();
    if (packet.slots() != timing.slots_per_packet) {
        throw std::invalid_argument("packet slot count must match the timing");
    }
    if (shape.duration_s > timing.slot_duration_s) {
        throw std::invalid_argument("pulse must not be longer than a slot");
    }
    const Waveform pulse = synthesize_pulse(shape, timing.sample_rate_hz);
    const std::uint32_t spslot = timing.samples_per_slot();

    Waveform w;
    w.sample_rate_hz = timing.sample_rate_hz;
    w.samples.assign(static_cast<std::size_t>(packet.slots()) * spslot, 0.0);
    for (std::uint32_t s = 0; s < packet.slots(); ++s) {
        if (!packet.marks[s]) continue;
        std::memcpy(w.samples.data() + static_cast<std::size_t>(s) * spslot,
                    pulse.samples.data(), pulse.samples.size() * sizeof(double));
    }
    return w;
}

Waveform build_transmission(const TransmissionPlan& plan, const SlotTiming& timing,
                            const PulseShape& shape) {
    timing.validate();
    if (plan.packets.empty()) throw std::invalid_argument("transmission plan has no packets");
    if (plan.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (plan.inter_message_pause_s < 0) throw std::invalid_argument("pause must be >= 0");

    std::vector<Waveform> modulated;
    modulated.reserve(plan.packets.size());
    std::size_t active = 0;
    for (const Packet& p : plan.packets) {
        modulated.push_back(modulate(p, timing, shape));
        active += modulated.back().samples.size();
    }
    const std::size_t pause =
        static_cast<std::size_t>(plan.inter_message_pause_s * timing.sample_rate_hz);

    Waveform w;
    w.sample_rate_hz = timing.sample_rate_hz;
    w.samples.assign(plan.repetitions * (active + pause), 0.0);
    std::size_t at = 0;
    for (std::uint32_t r = 0; r < plan.repetitions; ++r) {
        for (const Waveform& m : modulated) {
            std::memcpy(w.samples.data() + at, m.samples.data(),
                        m.samples.size() * sizeof(double));
            at += m.samples.size();
        }
        at += pause;
    }
    return w;
}

Waveform scale_signal(Waveform waveform, double gain) {
    if (gain < 0) throw std::invalid_argument("gain must be >= 0");
    for (double& v : waveform.samples) v *= gain;
    return waveform;
}

} // namespace mpp
