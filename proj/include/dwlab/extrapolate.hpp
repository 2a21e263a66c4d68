#pragma once

#include "dwlab/complex_ext.hpp"

#include <optional>
#include <vector>

namespace dwlab {

// Aitken delta-squared applied to the last three terms. Returns nullopt when
// fewer than three terms are available or the second difference vanishes.
std::optional<Complex> aitken_limit(const std::vector<Complex>& seq);
std::optional<double> aitken_limit(const std::vector<double>& seq);

// Limit estimate for x_n = L + c/n + o(1/n): 2 x_{2m} - x_m with 2m the last
// index. Falls back to the last term when the sequence is too short.
double richardson_ratio_limit(const std::vector<double>& seq);

struct TailEstimate {
    double value = 0.0;
    double error_bar = 0.0; // spread of the tail plus extrapolation gap
};

// Combines the Richardson estimate with the spread of the last 20% of the
// sequence into a limit-with-error-bar.
TailEstimate tail_limit(const std::vector<double>& seq);

// Mean over the last fraction (default 20%) of the sequence.
double tail_average(const std::vector<double>& seq, double fraction = 0.2);

// Least-squares fit of s_n ~ s_inf + c * n^(-beta) over the tail of a step
// sequence, with beta chosen from a fixed grid by residual.
struct PowerTailFit {
    double s_inf = 0.0;
    double coefficient = 0.0;
    double beta = 0.0;
    double rms_residual = 0.0;
};

PowerTailFit fit_power_tail(const std::vector<double>& values, long first_index, long stride);

} // namespace dwlab
