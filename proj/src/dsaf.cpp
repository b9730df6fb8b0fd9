#include "ersr/dsaf.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace ersr {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// 1D squared-distance transform of a sampled function (Felzenszwalb &
// Huttenlocher). f holds squared distances (or kInf); writes lower envelope
// values into out.
void transform_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out,
                  std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] >= kInf) continue;
        double s;
        while (true) {
            const int p = v[static_cast<std::size_t>(k)];
            s = (double(f[static_cast<std::size_t>(q)] + std::int64_t(q) * q) -
                 double(f[static_cast<std::size_t>(p)] + std::int64_t(p) * p)) /
                (2.0 * q - 2.0 * p);
            if (s > z[static_cast<std::size_t>(k)]) break;
            --k;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    int k2 = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k2) + 1] < q) ++k2;
        const int p = v[static_cast<std::size_t>(k2)];
        const std::int64_t fp = f[static_cast<std::size_t>(p)];
        out[static_cast<std::size_t>(q)] =
            fp >= kInf ? kInf : std::int64_t(q - p) * (q - p) + fp;
    }
}

// Squared distance to the nearest feature pixel, exact, for all pixels.
std::vector<std::int64_t> squared_distance_field(const BinaryMask& features) {
    const int h = features.height, w = features.width;
    std::vector<std::int64_t> d(static_cast<std::size_t>(h) * w);
    // column pass: per column, distance along rows
    {
        std::vector<std::int64_t> f(static_cast<std::size_t>(h)), g(static_cast<std::size_t>(h));
        std::vector<int> v;
        std::vector<double> z;
        for (int c = 0; c < w; ++c) {
            for (int r = 0; r < h; ++r)
                f[static_cast<std::size_t>(r)] = features.at(r, c) ? 0 : kInf;
            transform_1d(f, g, v, z);
            for (int r = 0; r < h; ++r) d[static_cast<std::size_t>(r) * w + c] = g[static_cast<std::size_t>(r)];
        }
    }
    // row pass
    {
        std::vector<std::int64_t> f(static_cast<std::size_t>(w)), g(static_cast<std::size_t>(w));
        std::vector<int> v;
        std::vector<double> z;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) f[static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(r) * w + c];
            transform_1d(f, g, v, z);
            for (int c = 0; c < w; ++c) d[static_cast<std::size_t>(r) * w + c] = g[static_cast<std::size_t>(c)];
        }
    }
    return d;
}

} // namespace

double boundary_consistency_score(const FloatGrid& p, double epsilon) {
    const FloatGrid gh = convolve3x3(p, sobel_horizontal());
    const FloatGrid gv = convolve3x3(p, sobel_vertical());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i)
        sum += std::sqrt(gh.data[i] * gh.data[i] + gv.data[i] * gv.data[i] + epsilon);
    return sum / static_cast<double>(p.data.size());
}

FloatGrid distance_to_nearest(const BinaryMask& features) {
    if (features.foreground_count() == 0)
        throw EmptyMaskError("distance_to_nearest: no feature pixels");
    const auto d2 = squared_distance_field(features);
    FloatGrid out(features.height, features.width);
    for (std::size_t i = 0; i < d2.size(); ++i) out.data[i] = std::sqrt(static_cast<double>(d2[i]));
    return out;
}

FloatGrid euclidean_distance_transform(const BinaryMask& m) {
    const int h = m.height, w = m.width;
    BinaryMask background(h, w);
    std::size_t n_bg = 0;
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        background.data[i] = m.data[i] ? 0 : 1;
        n_bg += background.data[i];
    }
    FloatGrid out(h, w);
    if (n_bg == 0) {
        // no background pixel exists; distance is undefined, use the largest
        // possible in-image distance as sentinel
        const double sentinel = std::sqrt(double(h) * h + double(w) * w);
        std::fill(out.data.begin(), out.data.end(), sentinel);
        return out;
    }
    const auto d2 = squared_distance_field(background);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        out.data[i] = m.data[i] ? std::sqrt(static_cast<double>(d2[i])) : 0.0;
    return out;
}

double contour_regularity_score(const BinaryMask& m) {
    const FloatGrid edt = euclidean_distance_transform(m);
    const FloatGrid lap = convolve3x3(edt, laplacian4());
    double sum = 0.0;
    for (double v : lap.data) sum += std::abs(v);
    return sum / static_cast<double>(lap.data.size());
}

GeometricScores combined_score(const FloatGrid& p, double alpha, double tau, double epsilon) {
    GeometricScores s;
    s.boundary = boundary_consistency_score(p, epsilon);
    s.contour = contour_regularity_score(binarize(p, tau));
    s.score = 1.0 - (alpha * s.boundary + (1.0 - alpha) * s.contour);
    return s;
}

double RampSchedule::value(double t) const {
    const double T = static_cast<double>(total_steps);
    if (t >= T) return final_value;
    const double phase = 1.0 - std::max(t, 0.0) / T;
    return initial_value + (final_value - initial_value) * std::exp(-5.0 * phase * phase);
}

void ScoreDictionary::update(const std::string& sample_id, double score, long iteration) {
    std::lock_guard lock(mutex_);
    entries_[sample_id] = Entry{score, iteration};
}

bool ScoreDictionary::contains(const std::string& sample_id) const {
    std::lock_guard lock(mutex_);
    return entries_.count(sample_id) != 0;
}

std::size_t ScoreDictionary::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::map<std::string, ScoreDictionary::Entry> ScoreDictionary::snapshot() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

std::vector<std::string> topk_select(const ScoreDictionary& dict, double ratio,
                                     std::size_t n_unlabeled) {
    const auto entries = dict.snapshot();
    const std::size_t k = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n_unlabeled)));
    if (k == 0 || entries.empty()) return {};

    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(entries.size());
    for (const auto& [id, e] : entries) ranked.emplace_back(id, e.score);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::size_t take = k;
    if (take > ranked.size()) {
        std::cerr << "topk_select: K=" << k << " exceeds dictionary size " << ranked.size()
                  << ", returning all entries\n";
        take = ranked.size();
    }
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(ranked[i].first);
    return out;
}

} // namespace ersr
