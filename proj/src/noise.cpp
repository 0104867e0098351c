#include "noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599344;
constexpr std::uint64_t kMiddletonTag = 0x6d6964646c65746eULL;
constexpr std::uint64_t kAwgnTag = 0x6177676e00000000ULL;
constexpr std::uint64_t kTrainTag = 0x696d70756c736573ULL;

struct MixtureTerm {
    double weight;
    double variance;
};

// Truncated Poisson weights and per-term variances, renormalized so the
// retained terms integrate to one.
std::vector<MixtureTerm> mixture_terms(const MiddletonParams& p) {
    std::vector<MixtureTerm> terms(p.terms);
    double w = std::exp(-p.a); // m = 0
    double z = 0.0;
    for (std::uint32_t m = 0; m < p.terms; ++m) {
        if (m > 0) w *= p.a / static_cast<double>(m);
        terms[m].weight = w;
        terms[m].variance = p.sigma_total * p.sigma_total *
                            (static_cast<double>(m) / p.a + p.gamma) / (1.0 + p.gamma);
        z += w;
    }
    for (auto& t : terms) t.weight /= z;
    return terms;
}

} // namespace

void MiddletonParams::validate() const {
    if (!(a > 0) || !(gamma > 0) || !(sigma_total > 0)) {
        throw std::invalid_argument("middleton parameters must be positive");
    }
    if (terms < 1) throw std::invalid_argument("middleton terms must be >= 1");
}

void HarmonicNoiseConfig::validate() const {
    if (!(fundamental_hz > 0) || !(total_peak_volts > 0)) {
        throw std::invalid_argument("harmonic noise fields must be positive");
    }
    if (lowest_harmonic < 1 || highest_harmonic < lowest_harmonic) {
        throw std::invalid_argument("harmonic range is invalid");
    }
    if (!phases.empty() && phases.size() != harmonic_count()) {
        throw std::invalid_argument("phase list must match the harmonic count");
    }
}

ImpulseTrainConfig ImpulseTrainConfig::line_locked_preset() {
    ImpulseTrainConfig cfg;
    cfg.pulse_rate_hz = 7000.0;
    cfg.pulse_width_s = 1.0e-6;
    cfg.amplitude_volts = 2.2;
    cfg.line_locked = true;
    return cfg;
}

ImpulseTrainConfig ImpulseTrainConfig::async_burst_preset() {
    ImpulseTrainConfig cfg;
    cfg.pulse_rate_hz = 10000.0;
    cfg.pulse_width_s = 0.5e-6;
    cfg.amplitude_volts = 3.2;
    cfg.burst_on_s = 11.0e-3;
    cfg.burst_gap_s = 25.0e-3;
    return cfg;
}

void ImpulseTrainConfig::validate() const {
    if (!(pulse_rate_hz > 0) || !(pulse_width_s > 0) || !(amplitude_volts > 0)) {
        throw std::invalid_argument("impulse train fields must be positive");
    }
    if (pulse_width_s >= 1.0 / pulse_rate_hz) {
        throw std::invalid_argument("pulse width must be below the pulse period");
    }
    if (burst_on_s < 0 || burst_gap_s < 0) {
        throw std::invalid_argument("burst windows must be >= 0");
    }
}

NoiseConfig NoiseConfig::measured_defaults() {
    NoiseConfig cfg;
    cfg.harmonics = HarmonicNoiseConfig{};
    cfg.impulse_trains = {ImpulseTrainConfig::line_locked_preset(),
                          ImpulseTrainConfig::async_burst_preset()};
    MiddletonParams mid;
    mid.sigma_total = 0.25;
    cfg.middleton = mid;
    return cfg;
}

bool NoiseConfig::any_enabled() const noexcept {
    return middleton.has_value() || harmonics.has_value() || !impulse_trains.empty() ||
           awgn_rms_volts > 0;
}

void NoiseConfig::validate() const {
    if (middleton) middleton->validate();
    if (harmonics) harmonics->validate();
    for (const auto& t : impulse_trains) t.validate();
    if (awgn_rms_volts < 0) throw std::invalid_argument("awgn rms must be >= 0");
}

double middleton_pdf(double x, const MiddletonParams& params) {
    params.validate();
    double p = 0.0;
    for (const MixtureTerm& t : mixture_terms(params)) {
        p += t.weight * kInvSqrt2Pi / std::sqrt(t.variance) *
             std::exp(-0.5 * x * x / t.variance);
    }
    return p;
}

double middleton_cdf(double x, const MiddletonParams& params) {
    params.validate();
    double c = 0.0;
    for (const MixtureTerm& t : mixture_terms(params)) {
        c += t.weight * 0.5 * std::erfc(-x / std::sqrt(2.0 * t.variance));
    }
    return c;
}

double middleton_sample(const MiddletonParams& params, Rng& rng) {
    const std::uint32_t m = rng.poisson(params.a);
    const double variance = params.sigma_total * params.sigma_total *
                            (static_cast<double>(m) / params.a + params.gamma) /
                            (1.0 + params.gamma);
    return rng.normal(std::sqrt(variance));
}

namespace {

struct Histogram {
    std::vector<double> centers;
    std::vector<double> log10_density;
};

Histogram log_histogram(std::span<const double> samples) {
    constexpr int kBins = 101;
    constexpr double kRange = 8.0;
    const double width = 2.0 * kRange / kBins;

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    var /= static_cast<double>(samples.size());
    if (!(var > 0)) throw std::invalid_argument("samples have zero variance");
    const double inv_rms = 1.0 / std::sqrt(var);

    std::vector<std::uint64_t> counts(kBins, 0);
    for (double x : samples) {
        const double z = (x - mean) * inv_rms;
        if (z < -kRange || z >= kRange) continue;
        ++counts[static_cast<std::size_t>((z + kRange) / width)];
    }

    Histogram h;
    const double n = static_cast<double>(samples.size());
    for (int b = 0; b < kBins; ++b) {
        if (counts[b] == 0) continue; // empty bins carry no information
        h.centers.push_back(-kRange + width * (b + 0.5));
        h.log10_density.push_back(std::log10(static_cast<double>(counts[b]) / (n * width)));
    }
    return h;
}

double fit_objective(const Histogram& h, const MiddletonParams& p) {
    double obj = 0.0;
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
        const double density = std::max(middleton_pdf(h.centers[i], p), 1e-300);
        const double d = std::log10(density) - h.log10_density[i];
        obj += d * d;
    }
    return obj;
}

} // namespace

MiddletonFit fit_middleton(std::span<const double> samples, std::uint32_t terms) {
    if (samples.size() < 10000) {
        throw std::invalid_argument("need at least 10^4 samples to fit");
    }
    if (terms < 1) throw std::invalid_argument("terms must be >= 1");
    const Histogram hist = log_histogram(samples);

    constexpr double kLogAMin = -3.0, kLogAMax = 1.0;  // A in [1e-3, 10]
    constexpr double kLogGMin = -4.0, kLogGMax = 0.0;  // Gamma in [1e-4, 1]

    MiddletonParams p;
    p.sigma_total = 1.0;
    p.terms = terms;

    double best_a = 0, best_g = 0, best_obj = 0;
    bool first = true;
    auto scan = [&](double a_lo, double a_hi, double g_lo, double g_hi, int steps) {
        for (int i = 0; i < steps; ++i) {
            const double la = a_lo + (a_hi - a_lo) * i / (steps - 1);
            for (int j = 0; j < steps; ++j) {
                const double lg = g_lo + (g_hi - g_lo) * j / (steps - 1);
                p.a = std::pow(10.0, la);
                p.gamma = std::pow(10.0, lg);
                const double obj = fit_objective(hist, p);
                if (first || obj < best_obj) {
                    first = false;
                    best_obj = obj;
                    best_a = la;
                    best_g = lg;
                }
            }
        }
    };

    scan(kLogAMin, kLogAMax, kLogGMin, kLogGMax, 61);
    double half_a = (kLogAMax - kLogAMin) / 60.0;
    double half_g = (kLogGMax - kLogGMin) / 60.0;
    for (int round = 0; round < 6; ++round) {
        scan(std::max(kLogAMin, best_a - half_a), std::min(kLogAMax, best_a + half_a),
             std::max(kLogGMin, best_g - half_g), std::min(kLogGMax, best_g + half_g), 11);
        half_a *= 0.4;
        half_g *= 0.4;
    }

    return MiddletonFit{std::pow(10.0, best_a), std::pow(10.0, best_g), best_obj};
}

HarmonicModel::HarmonicModel(const HarmonicNoiseConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    scale_ = 1.0;
    // Peak of the unscaled sum over one period: coarse scan then local
    // ternary refinement around the best grid point.
    const double period = 1.0 / cfg_.fundamental_hz;
    const int grid = 1 << 16;
    double peak = 0.0;
    double peak_t = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = period * i / grid;
        const double v = std::abs((*this)(t));
        if (v > peak) {
            peak = v;
            peak_t = t;
        }
    }
    double lo = peak_t - period / grid, hi = peak_t + period / grid;
    for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (std::abs((*this)(m1)) < std::abs((*this)(m2))) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    peak = std::max(peak, std::abs((*this)(0.5 * (lo + hi))));
    scale_ = cfg_.total_peak_volts / peak;
}

double HarmonicModel::operator()(double t) const noexcept {
    double acc = 0.0;
    const std::uint32_t lo = cfg_.lowest_harmonic;
    for (std::uint32_t h = lo; h <= cfg_.highest_harmonic; ++h) {
        const double phase = cfg_.phases.empty() ? 0.0 : cfg_.phases[h - lo];
        acc += std::sin(kTwoPi * h * cfg_.fundamental_hz * t + phase);
    }
    return scale_ * acc;
}

double HarmonicModel::analytic_rms() const noexcept {
    // Distinct harmonics are orthogonal over a full line period.
    return scale_ * std::sqrt(cfg_.harmonic_count() / 2.0);
}

double harmonic_noise(double t, const HarmonicNoiseConfig& cfg) {
    return HarmonicModel(cfg)(t);
}

ImpulseTrainModel::ImpulseTrainModel(const ImpulseTrainConfig& cfg, double line_fundamental_hz,
                                     std::uint64_t seed)
    : cfg_(cfg), fundamental_(line_fundamental_hz), seed_(seed) {
    cfg.validate();
    Rng rng(seed);
    if (!cfg_.line_locked) async_phase_ = rng.uniform() / cfg_.pulse_rate_hz;
    if (cfg_.burst_on_s > 0) {
        burst_phase_ = rng.uniform() * (cfg_.burst_on_s + cfg_.burst_gap_s);
    }
}

double ImpulseTrainModel::sign_of(std::int64_t ordinal) const noexcept {
    switch (cfg_.polarity) {
    case ImpulsePolarity::FixedPositive:
        return 1.0;
    case ImpulsePolarity::Alternating:
        return (ordinal & 1) ? -1.0 : 1.0;
    case ImpulsePolarity::Random:
        return (mix64(seed_ ^ static_cast<std::uint64_t>(ordinal)) & 1) ? -1.0 : 1.0;
    }
    return 1.0;
}

double ImpulseTrainModel::operator()(double t) const noexcept {
    if (cfg_.burst_on_s > 0) {
        const double period = cfg_.burst_on_s + cfg_.burst_gap_s;
        double pos = std::fmod(t - burst_phase_, period);
        if (pos < 0) pos += period;
        if (pos >= cfg_.burst_on_s) return 0.0;
    }
    if (cfg_.line_locked) {
        const double cycle = std::floor(t * fundamental_);
        const double tc = t - cycle / fundamental_;
        const double j = std::floor(tc * cfg_.pulse_rate_hz);
        if (tc - j / cfg_.pulse_rate_hz < cfg_.pulse_width_s) {
            // ordinal restarts each cycle so the train stays line-periodic
            return cfg_.amplitude_volts * sign_of(static_cast<std::int64_t>(j));
        }
        return 0.0;
    }
    const double ta = t - async_phase_;
    if (ta < 0) return 0.0;
    const double j = std::floor(ta * cfg_.pulse_rate_hz);
    if (ta - j / cfg_.pulse_rate_hz < cfg_.pulse_width_s) {
        return cfg_.amplitude_volts * sign_of(static_cast<std::int64_t>(j));
    }
    return 0.0;
}

ChannelModel::ChannelModel(const NoiseConfig& cfg, double sample_rate_hz, std::uint64_t seed)
    : cfg_(cfg), fs_(sample_rate_hz) {
    cfg.validate();
    if (!(sample_rate_hz > 0)) throw std::invalid_argument("sample rate must be positive");
    mid_seed_ = mix64(seed ^ kMiddletonTag);
    awgn_seed_ = mix64(seed ^ kAwgnTag);
    for (std::size_t i = 0; i < cfg_.impulse_trains.size(); ++i) {
        trains_.emplace_back(cfg_.impulse_trains[i], 60.0,
                             derive_subseed(seed ^ kTrainTag, i));
    }
    if (cfg_.harmonics) {
        fundamental_ = cfg_.harmonics->fundamental_hz;
        HarmonicModel model(*cfg_.harmonics);
        const int grid = 1 << 16;
        harmonic_table_.resize(grid + 1);
        const double period = 1.0 / fundamental_;
        for (int i = 0; i < grid; ++i) {
            harmonic_table_[i] = model(period * i / grid);
        }
        harmonic_table_[grid] = harmonic_table_[0];
    }
}

double ChannelModel::noise_at(std::int64_t index) const noexcept {
    const double t = static_cast<double>(index) / fs_;
    double v = 0.0;
    if (!harmonic_table_.empty()) {
        const double cycles = t * fundamental_;
        const double frac = cycles - std::floor(cycles);
        const double pos = frac * (harmonic_table_.size() - 1);
        const std::size_t j = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(j);
        v += harmonic_table_[j] * (1.0 - w) + harmonic_table_[j + 1] * w;
    }
    for (const auto& train : trains_) v += train(t);
    if (cfg_.middleton) {
        Rng rng(mid_seed_ + static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL);
        v += middleton_sample(*cfg_.middleton, rng);
    }
    if (cfg_.awgn_rms_volts > 0) {
        Rng rng(awgn_seed_ + static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL);
        v += rng.normal(cfg_.awgn_rms_volts);
    }
    return v;
}

void ChannelModel::add_to(std::span<double> samples, std::int64_t origin_index) const noexcept {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] += noise_at(origin_index + static_cast<std::int64_t>(i));
    }
}

Waveform ChannelModel::generate(double duration_s, std::int64_t origin_index) const {
    if (!(duration_s > 0)) throw std::invalid_argument("duration must be positive");
    Waveform w;
    w.sample_rate_hz = fs_;
    w.origin_time_s = static_cast<double>(origin_index) / fs_;
    w.samples.assign(static_cast<std::size_t>(duration_s * fs_), 0.0);
    add_to(w.samples, origin_index);
    return w;
}

Waveform apply_channel(const Waveform& signal, const NoiseConfig& cfg, std::uint64_t seed) {
    if (signal.samples.empty()) throw std::invalid_argument("signal must not be empty");
    Waveform out = signal;
    if (!cfg.any_enabled()) return out;
    ChannelModel chan(cfg, signal.sample_rate_hz, seed);
    const auto origin =
        static_cast<std::int64_t>(std::llround(signal.origin_time_s * signal.sample_rate_hz));
    chan.add_to(out.samples, origin);
    return out;
}

double noise_rms(const NoiseConfig& cfg, double duration_s, double sample_rate_hz,
                 std::uint32_t traces, std::uint64_t seed) {
    cfg.validate();
    if (!cfg.any_enabled()) return 0.0;
    if (traces < 1) throw std::invalid_argument("traces must be >= 1");
    if (cfg.harmonics && duration_s * cfg.harmonics->fundamental_hz < 10.0) {
        throw std::invalid_argument("duration must cover at least 10 line cycles");
    }
    double acc = 0.0;
    for (std::uint32_t k = 0; k < traces; ++k) {
        ChannelModel chan(cfg, sample_rate_hz, derive_subseed(seed, k));
        acc += chan.generate(duration_s).rms();
    }
    return acc / static_cast<double>(traces);
}

} // namespace mpp
