#include "robatch/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "robatch/errors.hpp"

namespace robatch {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void check_samples(const std::vector<UtilitySample>& samples) {
    if (samples.empty() || samples.front().batch != 1)
        throw schema_error("scaling fit requires a sample at batch size 1");
    if (samples.front().mean_utility <= 0.0)
        throw schema_error("scaling fit requires positive utility at batch size 1");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].batch <= samples[i - 1].batch)
            throw schema_error("scaling fit samples must be strictly increasing in batch size");
    }
}

} // namespace

double ScalingFn::operator()(std::int32_t batch) const {
    if (batch <= 1) return 1.0;
    switch (kind) {
    case Kind::constant:
        return 1.0;
    case Kind::power_law:
        return clamp01(1.0 - alpha * std::pow(static_cast<double>(batch - 1), beta));
    case Kind::piecewise_linear: {
        // knots[0] is (1, 1); exact at knots, linear between, flat beyond.
        if (knots.empty()) return 1.0;
        if (batch >= knots.back().first) return clamp01(knots.back().second);
        std::size_t hi = 1;
        while (knots[hi].first < batch) ++hi;
        if (knots[hi].first == batch) return clamp01(knots[hi].second);
        const auto& [b0, r0] = knots[hi - 1];
        const auto& [b1, r1] = knots[hi];
        double t = static_cast<double>(batch - b0) / static_cast<double>(b1 - b0);
        return clamp01(r0 + t * (r1 - r0));
    }
    }
    return 1.0;
}

ScalingFn fit_scaling_piecewise(const std::vector<UtilitySample>& samples) {
    check_samples(samples);
    ScalingFn fn;
    fn.kind = ScalingFn::Kind::piecewise_linear;
    double u1 = samples.front().mean_utility;
    fn.knots.reserve(samples.size());
    fn.knots.emplace_back(1, 1.0);
    for (std::size_t i = 1; i < samples.size(); ++i)
        fn.knots.emplace_back(samples[i].batch, samples[i].mean_utility / u1);
    return fn;
}

ScalingFn fit_scaling_power_law(const std::vector<UtilitySample>& samples) {
    check_samples(samples);
    if (samples.size() < 3)
        throw schema_error("power-law scaling fit needs at least 3 samples");
    double u1 = samples.front().mean_utility;

    // log(1 - r) = log(alpha) + beta * log(b - 1), over points with 1 - r > 0.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        double decay = 1.0 - samples[i].mean_utility / u1;
        if (decay > 0.0)
            pts.emplace_back(std::log(static_cast<double>(samples[i].batch - 1)), std::log(decay));
    }

    ScalingFn fn;
    fn.kind = ScalingFn::Kind::power_law;
    if (pts.empty()) {
        fn.alpha = 0.0;
        fn.beta = 1.0;
        return fn;
    }
    if (pts.size() == 1) {
        fn.beta = 1.0;
        fn.alpha = std::exp(pts[0].second - pts[0].first);
        return fn;
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        fn.beta = 1.0;
        fn.alpha = std::exp(my - mx);
    } else {
        fn.beta = sxy / sxx;
        fn.alpha = std::exp(my - fn.beta * mx);
    }
    return fn;
}

} // namespace robatch
