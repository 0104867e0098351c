#ifndef MPP_NOISE_HPP
#define MPP_NOISE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pulse.hpp"
#include "rng.hpp"

namespace mpp {

/// Middleton Class A parameters: `a` is the impulsive index, `gamma` the
/// Gaussian-to-impulsive power ratio. The density is a Poisson-weighted
/// Gaussian mixture truncated to `terms` components and renormalized.
struct MiddletonParams {
    double a = 0.305;
    double gamma = 0.046;
    double sigma_total = 1.0; // volts; 1.0 when normalized
    std::uint32_t terms = 3;

    void validate() const;
};

struct HarmonicNoiseConfig {
    double fundamental_hz = 60.0;
    std::uint32_t lowest_harmonic = 3;
    std::uint32_t highest_harmonic = 16;
    double total_peak_volts = 1.6;
    std::vector<double> phases; // radians per harmonic; empty = all zero

    std::uint32_t harmonic_count() const noexcept { return highest_harmonic - lowest_harmonic + 1; }
    void validate() const;
};

enum class ImpulsePolarity { FixedPositive, Alternating, Random };

struct ImpulseTrainConfig {
    double pulse_rate_hz = 0.0;
    double pulse_width_s = 0.0;
    double amplitude_volts = 0.0;
    bool line_locked = false;
    double burst_on_s = 0.0; // 0 disables burst gating
    double burst_gap_s = 0.0;
    ImpulsePolarity polarity = ImpulsePolarity::FixedPositive;

    /// 7 kHz, 1 us, 2.2 V pulses retriggered on every line cycle.
    static ImpulseTrainConfig line_locked_preset();
    /// 10 kHz, 0.5 us, 3.2 V pulses in 11 ms bursts with 25 ms gaps.
    static ImpulseTrainConfig async_burst_preset();

    void validate() const;
};

struct NoiseConfig {
    std::optional<MiddletonParams> middleton;
    std::optional<HarmonicNoiseConfig> harmonics;
    std::vector<ImpulseTrainConfig> impulse_trains;
    double awgn_rms_volts = 0.0;

    /// All measured components: 1.6 V harmonics, both impulse trains, and a
    /// Middleton floor for the unstructured remainder.
    static NoiseConfig measured_defaults();

    bool any_enabled() const noexcept;
    void validate() const;
};

double middleton_pdf(double x, const MiddletonParams& params);
double middleton_cdf(double x, const MiddletonParams& params);

/// Draw from the untruncated model: m ~ Poisson(a), then N(0, sigma_m^2).
double middleton_sample(const MiddletonParams& params, Rng& rng);

struct MiddletonFit {
    double a = 0.0;
    double gamma = 0.0;
    double residual = 0.0;
};

/// Least-squares fit of the log-density of an amplitude histogram (101 bins
/// over +-8 normalized units) to the truncated Class A model. Samples are
/// shifted to zero mean and scaled to unit rms first.
MiddletonFit fit_middleton(std::span<const double> samples, std::uint32_t terms);

class HarmonicModel {
public:
    explicit HarmonicModel(const HarmonicNoiseConfig& cfg);
    double operator()(double t) const noexcept;
    double scale() const noexcept { return scale_; }
    double analytic_rms() const noexcept;

private:
    HarmonicNoiseConfig cfg_;
    double scale_ = 0.0;
};

double harmonic_noise(double t, const HarmonicNoiseConfig& cfg);

class ImpulseTrainModel {
public:
    ImpulseTrainModel(const ImpulseTrainConfig& cfg, double line_fundamental_hz,
                      std::uint64_t seed);
    double operator()(double t) const noexcept;

private:
    double sign_of(std::int64_t ordinal) const noexcept;

    ImpulseTrainConfig cfg_;
    double fundamental_;
    std::uint64_t seed_;
    double async_phase_ = 0.0;
    double burst_phase_ = 0.0;
};

/// Deterministic noise source: every component is a pure function of the
/// configuration, the seed, and the absolute sample index, so any window
/// can be regenerated independently.
class ChannelModel {
public:
    ChannelModel(const NoiseConfig& cfg, double sample_rate_hz, std::uint64_t seed);

    double noise_at(std::int64_t index) const noexcept;
    void add_to(std::span<double> samples, std::int64_t origin_index) const noexcept;
    Waveform generate(double duration_s, std::int64_t origin_index = 0) const;

private:
    NoiseConfig cfg_;
    double fs_;
    std::uint64_t mid_seed_ = 0;
    std::uint64_t awgn_seed_ = 0;
    std::vector<ImpulseTrainModel> trains_;
    std::vector<double> harmonic_table_; // one line period, linear interp
    double fundamental_ = 60.0;
};

Waveform apply_channel(const Waveform& signal, const NoiseConfig& cfg, std::uint64_t seed);

/// Mean rms over independent trace realizations.
double noise_rms(const NoiseConfig& cfg, double duration_s, double sample_rate_hz,
                 std::uint32_t traces, std::uint64_t seed);

} // namespace mpp

#endif // MPP_NOISE_HPP
