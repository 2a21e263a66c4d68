#include "dwlab/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwlab {

std::optional<Complex> aitken_limit(const std::vector<Complex>& seq) {
    const std::size_t n = seq.size();
    if (n < 3) return std::nullopt;
    const Complex x0 = seq[n - 3], x1 = seq[n - 2], x2 = seq[n - 1];
    const Complex d1 = x1 - x0;
    const Complex d2 = x2 - 2.0 * x1 + x0;
    if (std::abs(d2) == 0.0) return x2;
    return x0 - d1 * d1 / d2;
}

std::optional<double> aitken_limit(const std::vector<double>& seq) {
    const std::size_t n = seq.size();
    if (n < 3) return std::nullopt;
    const double x0 = seq[n - 3], x1 = seq[n - 2], x2 = seq[n - 1];
    const double d2 = x2 - 2.0 * x1 + x0;
    if (d2 == 0.0) return x2;
    return x0 - (x1 - x0) * (x1 - x0) / d2;
}

double richardson_ratio_limit(const std::vector<double>& seq) {
    const std::size_t n = seq.size();
    if (n < 4) return n ? seq.back() : 0.0;
    return 2.0 * seq[n - 1] - seq[(n - 1) / 2];
}

double tail_average(const std::vector<double>& seq, double fraction) {
    if (seq.empty()) return 0.0;
    const std::size_t first = std::size_t(double(seq.size()) * (1.0 - fraction));
    const std::size_t begin = std::min(first, seq.size() - 1);
    double sum = 0.0;
    for (std::size_t i = begin; i < seq.size(); ++i) sum += seq[i];
    return sum / double(seq.size() - begin);
}

TailEstimate tail_limit(const std::vector<double>& seq) {
    TailEstimate est;
    if (seq.empty()) return est;
    const double rich = richardson_ratio_limit(seq);
    const double last = seq.back();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const std::size_t begin = std::size_t(double(seq.size()) * 0.8);
    for (std::size_t i = std::min(begin, seq.size() - 1); i < seq.size(); ++i) {
        lo = std::min(lo, seq[i]);
        hi = std::max(hi, seq[i]);
    }
    est.value = rich;
    est.error_bar = (hi - lo) + std::abs(rich - last);
    return est;
}

PowerTailFit fit_power_tail(const std::vector<double>& values, long first_index, long stride) {
    PowerTailFit best;
    best.rms_residual = std::numeric_limits<double>::infinity();
    if (values.empty()) return best;

    // tail = last half, subsampled to at most 512 points
    const std::size_t begin = values.size() / 2;
    const std::size_t count = values.size() - begin;
    const std::size_t hop = std::max<std::size_t>(1, count / 512);

    std::vector<double> xs, ys;
    for (std::size_t i = begin; i < values.size(); i += hop) {
        xs.push_back(double(first_index + stride * long(i)) + 1.0);
        ys.push_back(values[i]);
    }
    if (xs.size() < 3) {
        best.s_inf = values.back();
        best.rms_residual = 0.0;
        return best;
    }

    for (double beta : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        // linear LS in (s_inf, c) against basis {1, n^-beta}
        double s1 = 0, sb = 0, sbb = 0, sy = 0, sby = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double b = std::pow(xs[i], -beta);
            s1 += 1.0;
            sb += b;
            sbb += b * b;
            sy += ys[i];
            sby += b * ys[i];
        }
        const double det = s1 * sbb - sb * sb;
        if (std::abs(det) < 1e-300) continue;
        const double s_inf = (sy * sbb - sb * sby) / det;
        const double c = (s1 * sby - sb * sy) / det;
        double sse = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (s_inf + c * std::pow(xs[i], -beta));
            sse += r * r;
        }
        const double rms = std::sqrt(sse / double(xs.size()));
        if (rms < best.rms_residual) {
            best.s_inf = s_inf;
            best.coefficient = c;
            best.beta = beta;
            best.rms_residual = rms;
        }
    }
    return best;
}

} // namespace dwlab
