#include "rydberg/detection.hpp"

#include <cmath>

#include "rydberg/errors.hpp"
#include "rydberg/numerics.hpp"

namespace rydberg {

double DetectionModel::mean_amplitude(int k) const {
    if (k <= 0) return 0.0;
    return single_electron_mean_mV + (k - 1) * per_electron_increment_mV;
}

int classify_amplitude(double amplitude_mV, const DetectionModel& model) {
    if (amplitude_mV < 0.5 * model.single_electron_mean_mV) return 0;
    const double k = 1.0 + std::round((amplitude_mV - model.single_electron_mean_mV) / model.per_electron_increment_mV);
    return std::max(1, static_cast<int>(k));
}

double draw_amplitude(int atoms, const DetectionModel& model, std::mt19937_64& rng, int* detected) {
    if (atoms < 0) throw DomainError("atom count must be non-negative");
    std::bernoulli_distribution hit(model.detection_probability);
    std::normal_distribution<double> noise(0.0, model.single_electron_sigma_mV);
    int k = 0;
    for (int i = 0; i < atoms; ++i)
        if (model.detection_probability >= 1.0 || hit(rng)) ++k;
    double amplitude = 0.0;
    for (int i = 0; i < k; ++i)
        amplitude += (i == 0 ? model.single_electron_mean_mV : model.per_electron_increment_mV) + noise(rng);
    if (detected) *detected = k;
    return amplitude;
}

std::vector<SfiEvent> sfi_counting_sim(const std::vector<int>& true_counts, const DetectionModel& model,
                                       std::uint64_t seed) {
    for (int c : true_counts)
        if (c < 0) throw DomainError("atom count must be non-negative");
    std::vector<SfiEvent> events(true_counts.size());
    const auto n = static_cast<std::ptrdiff_t>(true_counts.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(i)));
        auto& e = events[static_cast<std::size_t>(i)];
        e.event_id = static_cast<std::uint64_t>(i);
        e.true_count = true_counts[static_cast<std::size_t>(i)];
        e.amplitude_mV = draw_amplitude(e.true_count, model, rng, &e.detected_count);
        e.inferred_count = classify_amplitude(e.amplitude_mV, model);
        e.reliable = e.inferred_count <= model.max_resolvable;
    }
    return events;
}

}  // namespace rydberg
