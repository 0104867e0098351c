#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "noise.hpp"
#include "rng.hpp"
#include "test_util.hpp"

using namespace mpp;

TEST_CASE("middleton pdf is symmetric, normalized, and sharply peaked") {
    MiddletonParams prm{}; // A=0.305, Gamma=0.046, sigma 1, 3 terms
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.0}) {
        CHECK(middleton_pdf(x, prm) == doctest::Approx(middleton_pdf(-x, prm)).epsilon(1e-15));
    }

    const double integral = test::simpson([&](double x) { return middleton_pdf(x, prm); },
                                          -50.0, 50.0, 200001);
    CHECK(std::abs(integral - 1.0) < 1e-6);

    // Pinned against an independent high-precision evaluation.
    CHECK(middleton_pdf(0.0, prm) == doctest::Approx(1.46355553936868680).epsilon(1e-12));
    CHECK(middleton_pdf(0.0, prm) > 0.3989);
}

TEST_CASE("middleton parameter validation") {
    MiddletonParams bad{};
    bad.a = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = MiddletonParams{};
    bad.gamma = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = MiddletonParams{};
    bad.terms = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("middleton sampler matches the model") {
    MiddletonParams prm{};
    const std::size_t n = 1'000'000;
    Rng rng(404);
    std::vector<double> draws(n);
    double mean = 0;
    for (auto& d : draws) {
        d = middleton_sample(prm, rng);
        mean += d;
    }
    mean /= static_cast<double>(n);
    double var = 0;
    for (double d : draws) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n);

    // Mean within 4 standard errors (sample variance estimates the SE).
    CHECK(std::abs(mean) < 4.0 * std::sqrt(var / static_cast<double>(n)));
    // Total variance identity: sum w_m sigma_m^2 = sigma_total^2.
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    MiddletonParams ref = prm;
    ref.terms = 40;
    const double d = test::ks_distance(draws, [&](double x) { return middleton_cdf(x, ref); });
    CHECK(d < 0.005);
}

TEST_CASE("middleton fit recovers synthetic parameters") {
    MiddletonParams prm{};
    Rng rng(777);
    std::vector<double> draws(1'000'000);
    for (auto& d : draws) d = middleton_sample(prm, rng);

    MiddletonFit fit = fit_middleton(draws, 3);
    CHECK(fit.a == doctest::Approx(0.305).epsilon(0.20));
    CHECK(fit.gamma == doctest::Approx(0.046).epsilon(0.30));
    CHECK(fit.residual >= 0.0);
}

TEST_CASE("middleton fit degenerates toward a Gaussian on Gaussian input") {
    Rng rng(88);
    std::vector<double> draws(1'000'000);
    for (auto& d : draws) d = rng.normal();

    MiddletonFit fit = fit_middleton(draws, 20);
    CHECK(fit.a >= 1.0);

    MiddletonParams fitted{};
    fitted.a = fit.a;
    fitted.gamma = fit.gamma;
    fitted.terms = 20;
    const double inv_sqrt_2pi = 0.3989422804014327;
    for (double x = -2.0; x <= 2.0; x += 0.25) {
        const double normal = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        CHECK(middleton_pdf(x, fitted) == doctest::Approx(normal).epsilon(0.05));
    }
}

TEST_CASE("middleton fit rejects tiny inputs") {
    std::vector<double> few(100, 0.5);
    CHECK_THROWS_AS(fit_middleton(few, 3), std::invalid_argument);
}

TEST_CASE("full channel noise fits worse than pure middleton noise") {
    MiddletonParams mid{};
    Rng rng(31337);
    std::vector<double> pure(200'000);
    for (auto& d : pure) d = middleton_sample(mid, rng);
    const double pure_residual = fit_middleton(pure, 3).residual;

    NoiseConfig cfg = NoiseConfig::measured_defaults();
    ChannelModel chan(cfg, 1.0e6, 99);
    std::vector<double> mixed(200'000);
    for (std::size_t i = 0; i < mixed.size(); ++i) {
        mixed[i] = chan.noise_at(static_cast<std::int64_t>(i));
    }
    const double mixed_residual = fit_middleton(mixed, 3).residual;
    CHECK(mixed_residual > pure_residual);
}

TEST_CASE("harmonic noise is line-periodic with the configured peak") {
    HarmonicNoiseConfig cfg{};
    HarmonicModel model(cfg);
    for (double t : {0.0, 1.23e-3, 7.7e-3, 1.0 / 61.0}) {
        CHECK(model(t + 1.0 / 60.0) == doctest::Approx(model(t)).epsilon(1e-9));
    }

    double peak = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        peak = std::max(peak, std::abs(model(i / (60.0 * n))));
    }
    CHECK(peak == doctest::Approx(1.6).epsilon(0.01));
    CHECK(harmonic_noise(1.0e-3, cfg) == model(1.0e-3));
}

TEST_CASE("harmonic spectrum sits between the 3rd and 16th harmonic") {
    HarmonicNoiseConfig cfg{};
    HarmonicModel model(cfg);
    const int n = 4096;
    const double fs = 60.0 * n;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = model(i / fs);

    for (int h = 0; h <= 40; ++h) {
        std::complex<double> acc = 0;
        for (int i = 0; i < n; ++i) {
            const double ang = -2.0 * 3.14159265358979323846 * h * i / n;
            acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        const double mag = std::abs(acc) / n;
        if (h >= 3 && h <= 16) {
            CHECK(mag > 0.01);
        } else {
            CHECK(mag < 1e-9);
        }
    }
}

TEST_CASE("impulse train presets") {
    ImpulseTrainConfig line = ImpulseTrainConfig::line_locked_preset();
    CHECK(line.pulse_rate_hz == 7000.0);
    CHECK(line.pulse_width_s == 1.0e-6);
    CHECK(line.amplitude_volts == 2.2);
    CHECK(line.line_locked);
    CHECK(line.burst_on_s == 0.0);

    ImpulseTrainConfig burst = ImpulseTrainConfig::async_burst_preset();
    CHECK(burst.pulse_rate_hz == 10000.0);
    CHECK(burst.pulse_width_s == 0.5e-6);
    CHECK(burst.amplitude_volts == 3.2);
    CHECK_FALSE(burst.line_locked);
    CHECK(burst.burst_on_s == 11.0e-3);
    CHECK(burst.burst_gap_s == 25.0e-3);

    ImpulseTrainConfig bad = line;
    bad.pulse_width_s = 1.0; // wider than the pulse period
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("line-locked train repeats every line cycle") {
    ImpulseTrainModel model(ImpulseTrainConfig::line_locked_preset(), 60.0, 5);
    Rng rng(17);
    int checked = 0;
    for (int i = 0; i < 20000 && checked < 5000; ++i) {
        const double t = rng.uniform() / 60.0;
        // stay away from pulse edges; equality there is a rounding artifact
        const double in_cycle = t * 7000.0;
        if (std::abs(in_cycle - std::round(in_cycle)) * (1.0 / 7000.0) < 1e-9) continue;
        CHECK(model(t) == model(t + 1.0 / 60.0));
        CHECK(model(t) == model(t + 2.0 / 60.0));
        ++checked;
    }
    CHECK(checked == 5000);
}

TEST_CASE("async burst train spacing and duty") {
    ImpulseTrainConfig cfg = ImpulseTrainConfig::async_burst_preset();
    ImpulseTrainModel model(cfg, 60.0, 42);
    const double fs = 1.0e7;

    // Pulse rising edges inside a burst sit exactly 100 us apart.
    std::vector<std::int64_t> edges;
    bool prev = false;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(0.011 * fs); ++i) {
        const bool active = model(static_cast<double>(i) / fs) != 0.0;
        if (active && !prev) edges.push_back(i);
        prev = active;
    }
    REQUIRE(edges.size() >= 3);
    for (std::size_t e = 1; e + 1 < edges.size(); ++e) {
        // interior edges; the first burst may start mid-period
        CHECK(edges[e + 1] - edges[e] == static_cast<std::int64_t>(fs / cfg.pulse_rate_hz));
    }

    // Pulse count over one second reflects the 11 ms / 25 ms gating.
    int pulses = 0;
    prev = false;
    const double coarse_fs = 1.0e6;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(coarse_fs); ++i) {
        const bool active = model(static_cast<double>(i) / coarse_fs) != 0.0;
        if (active && !prev) ++pulses;
        prev = active;
    }
    const double expect = cfg.pulse_rate_hz * 11.0 / 36.0;
    CHECK(pulses == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("channel is additive and seed-deterministic") {
    NoiseConfig cfg = NoiseConfig::measured_defaults();
    SlotTiming timing{};
    timing.sample_rate_hz = 8.2e6; // keep the test quick
    PulseShape shape{};
    Packet p(256);
    p.marks[0] = p.marks[77] = p.marks[200] = 1;
    Waveform signal = modulate(p, timing, shape);

    Waveform noisy = apply_channel(signal, cfg, 2024);
    Waveform zero;
    zero.sample_rate_hz = signal.sample_rate_hz;
    zero.samples.assign(signal.samples.size(), 0.0);
    Waveform alone = apply_channel(zero, cfg, 2024);
    REQUIRE(noisy.samples.size() == signal.samples.size());
    for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        CHECK(noisy.samples[i] - signal.samples[i] == alone.samples[i]);
    }

    Waveform again = apply_channel(signal, cfg, 2024);
    CHECK(again.samples == noisy.samples);
    Waveform other = apply_channel(signal, cfg, 2025);
    CHECK(other.samples != noisy.samples);
}

TEST_CASE("channel with nothing enabled returns the signal") {
    NoiseConfig cfg;
    PulseShape shape{};
    Waveform signal = synthesize_pulse(shape, 4.1e7);
    Waveform out = apply_channel(signal, cfg, 1);
    CHECK(out.samples == signal.samples);
}

TEST_CASE("channel noise windows regenerate identically") {
    NoiseConfig cfg = NoiseConfig::measured_defaults();
    ChannelModel chan(cfg, 2.0e6, 7);
    std::vector<double> full(20000);
    for (std::size_t i = 0; i < full.size(); ++i) {
        full[i] = chan.noise_at(static_cast<std::int64_t>(i));
    }
    for (std::size_t i = 5000; i < 6000; ++i) {
        CHECK(chan.noise_at(static_cast<std::int64_t>(i)) == full[i]);
    }
}

TEST_CASE("noise rms") {
    NoiseConfig mid_only;
    mid_only.middleton = MiddletonParams{};
    const double r = noise_rms(mid_only, 0.01, 1.0e6, 100, 3);
    CHECK(r == doctest::Approx(1.0).epsilon(0.02));

    NoiseConfig harm_only;
    harm_only.harmonics = HarmonicNoiseConfig{};
    HarmonicModel model(HarmonicNoiseConfig{});
    const double expect = model.analytic_rms();
    CHECK(noise_rms(harm_only, 10.0 / 60.0, 1.2e6, 4, 3) ==
          doctest::Approx(expect).epsilon(0.01));
    CHECK_THROWS_AS(noise_rms(harm_only, 0.05, 1.2e6, 4, 3), std::invalid_argument);

    NoiseConfig none;
    CHECK(noise_rms(none, 0.01, 1.0e6, 4, 3) == 0.0);
}

TEST_CASE("middleton cdf sanity") {
    MiddletonParams prm{};
    prm.terms = 40;
    CHECK(middleton_cdf(0.0, prm) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(middleton_cdf(50.0, prm) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(middleton_cdf(-50.0, prm) == doctest::Approx(0.0).epsilon(1e-9));
    // CDF consistent with the pdf by quadrature.
    const double q = test::simpson([&](double x) { return middleton_pdf(x, prm); },
                                   -30.0, 1.25, 100001);
    CHECK(middleton_cdf(1.25, prm) == doctest::Approx(q).epsilon(1e-6));
}
