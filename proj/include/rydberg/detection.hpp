#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rydberg {

struct DetectionModel {
    double single_electron_mean_mV = 400.0;
    double single_electron_sigma_mV = 25.0;  // 350-450 mV holds ~95% of pulses
    double per_electron_increment_mV = 400.0;
    double detection_probability = 1.0;
    int max_resolvable = 5;

    // Mean amplitude of a k-electron pulse.
    double mean_amplitude(int k) const;
};

struct SfiEvent {
    std::uint64_t event_id = 0;
    int true_count = 0;
    int detected_count = 0;
    double amplitude_mV = 0.0;
    int inferred_count = 0;
    bool reliable = true;
};

// Nearest multiple of the single-electron mean.
int classify_amplitude(double amplitude_mV, const DetectionModel& model);

// One channeltron pulse for `atoms` ionized atoms.
double draw_amplitude(int atoms, const DetectionModel& model, std::mt19937_64& rng,
                      int* detected = nullptr);

std::vector<SfiEvent> sfi_counting_sim(const std::vector<int>& true_counts,
                                       const DetectionModel& model, std::uint64_t seed);

}  // namespace rydberg
