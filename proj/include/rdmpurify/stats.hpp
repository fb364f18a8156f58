#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rdmpurify::stats {

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

/// Normal-approximation 95% confidence half-width for the mean.
inline double ci95_halfwidth(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    return 1.96 * sample_std(v) / std::sqrt(static_cast<double>(v.size()));
}

} // namespace rdmpurify::stats
