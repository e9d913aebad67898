#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rydberg {

enum class Execution { serial, parallel };

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// y = prefactor * x^exponent, fitted in log space.
struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// Least squares y = c0 + c1 x + ... ; returns coefficients in increasing order.
std::vector<double> fit_polynomial(std::span<const double> x, std::span<const double> y, int degree);

std::vector<double> linspace(double a, double b, std::size_t count);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

// Independent, reproducible 64-bit seed for substream `index` of `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

// Full width at half maximum around the largest sample, with linear
// interpolation between samples. NaN if either side never drops below half.
double full_width_half_max(std::span<const double> x, std::span<const double> y);

}  // namespace rydberg
