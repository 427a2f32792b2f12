#include "monge2/concavity.hpp"
#include "monge2/errors.hpp"
#include "monge2/random.hpp"

#include <cmath>

namespace monge2 {

LevelSetSampler::LevelSetSampler(const VerifierConfig& config)
    : log_min_(std::log(config.lambda1_min)),
      log_span_(std::log(config.lambda1_max) - std::log(config.lambda1_min)),
      seed_(config.seed) {
    config.validate();
}

std::optional<Spectrum> LevelSetSampler::draw(std::int64_t index) const {
    CounterRng rng(seed_, static_cast<std::uint64_t>(index));
    const double l1 = std::exp(log_min_ + log_span_ * rng.uniform());
    const double l2 = -0.5 * l1 + 1.5 * l1 * rng.uniform();
    if (!(l2 > -0.5 * l1) || !(l2 < l1)) return std::nullopt;

    // With mu = lambda2 + lambda3 the level-set equation reads
    // mu^2 + (l1 - l2) mu - 1/(l1 + l2) = 0; take the positive root in the
    // cancellation-free form 2c / (b + sqrt(b^2 + 4c)).
    const double b = l1 - l2;
    const double c = 1.0 / (l1 + l2);
    const double mu = 2.0 * c / (b + std::sqrt(b * b + 4.0 * c));
    if (!(mu > 0.0) || !std::isfinite(mu)) return std::nullopt;
    const double l3 = mu - l2;
    if (l3 > l2) return std::nullopt;
    if (!(l3 + 0.5 * l1 > 0.0)) return std::nullopt;
    return Spectrum::from_level_set(l1, l2, mu);
}

SampleBatch sample_level_set(const VerifierConfig& config) {
    const LevelSetSampler sampler(config);
    SampleBatch batch;
    batch.draws = config.samples;
    for (std::int64_t i = 0; i < config.samples; ++i) {
        if (auto s = sampler.draw(i))
            batch.spectra.push_back(*s);
        else
            ++batch.rejected;
    }
    return batch;
}

} // namespace monge2
