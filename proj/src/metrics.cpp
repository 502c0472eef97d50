#include "uscg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace uscg {

namespace {

void check_pair(const Image& a, const Image& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("image shapes differ");
    if (a.rows < 1 || a.cols < 1)
        throw std::invalid_argument("empty image");
}

void check_pair(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("sequence lengths differ");
    if (a.empty())
        throw std::invalid_argument("empty sequence");
}

double reference_range(const Image& ref) {
    auto [lo, hi] = std::minmax_element(ref.v.begin(), ref.v.end());
    const double range = *hi - *lo;
    return range > 0 ? range : 1.0;
}

}  // namespace

double mae(std::span<const double> ref, std::span<const double> test) {
    check_pair(ref, test);
    double acc = 0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        acc += std::abs(ref[i] - test[i]);
    return acc / ref.size();
}

double rmse(std::span<const double> ref, std::span<const double> test) {
    check_pair(ref, test);
    double acc = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = ref[i] - test[i];
        acc += d * d;
    }
    return std::sqrt(acc / ref.size());
}

double mae(const Image& ref, const Image& test) {
    check_pair(ref, test);
    return mae(std::span<const double>(ref.v), std::span<const double>(test.v));
}

double rmse(const Image& ref, const Image& test) {
    check_pair(ref, test);
    return rmse(std::span<const double>(ref.v), std::span<const double>(test.v));
}

double area_average(const Image& image) {
    if (image.v.empty())
        throw std::invalid_argument("empty image");
    double acc = 0;
    for (double x : image.v)
        acc += x;
    return acc / image.v.size();
}

namespace {

double ssim_rows(const Image& ref, const Image& test, double c1, double c2, int r_begin,
                 int r_end) {
    constexpr int kWin = 8;
    constexpr double inv_n = 1.0 / (kWin * kWin);
    double acc = 0;
    for (int r0 = r_begin; r0 < r_end; ++r0) {
        for (int c0 = 0; c0 + kWin <= ref.cols; ++c0) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (int r = r0; r < r0 + kWin; ++r) {
                const double* a = &ref.v[std::size_t(r) * ref.cols + c0];
                const double* b = &test.v[std::size_t(r) * test.cols + c0];
                for (int c = 0; c < kWin; ++c) {
                    sx += a[c];
                    sy += b[c];
                    sxx += a[c] * a[c];
                    syy += b[c] * b[c];
                    sxy += a[c] * b[c];
                }
            }
            const double mx = sx * inv_n;
            const double my = sy * inv_n;
            const double vx = sxx * inv_n - mx * mx;
            const double vy = syy * inv_n - my * my;
            const double cov = sxy * inv_n - mx * my;
            acc += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    }
    return acc;
}

}  // namespace

double ssim(const Image& ref, const Image& test, double dynamic_range, int threads) {
    check_pair(ref, test);
    constexpr int kWin = 8;
    if (ref.rows < kWin || ref.cols < kWin)
        throw std::invalid_argument("image smaller than the 8x8 ssim window");

    const double L = dynamic_range > 0 ? dynamic_range : reference_range(ref);
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);

    const int row_windows = ref.rows - kWin + 1;
    const std::size_t windows = std::size_t(row_windows) * (ref.cols - kWin + 1);

    if (threads <= 1 || row_windows < 2 * threads)
        return ssim_rows(ref, test, c1, c2, 0, row_windows) / windows;

    const int workers = std::min(threads, row_windows);
    std::vector<double> partial(workers, 0.0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = row_windows * w / workers;
        const int hi = row_windows * (w + 1) / workers;
        pool.emplace_back([&, w, lo, hi] { partial[w] = ssim_rows(ref, test, c1, c2, lo, hi); });
    }
    double acc = 0;
    for (int w = 0; w < workers; ++w) {
        pool[w].join();
        acc += partial[w];
    }
    return acc / windows;
}

double sharpness(const Image& image) {
    if (image.rows < 2 || image.cols < 2)
        throw std::invalid_argument("sharpness needs at least a 2x2 image");
    double acc = 0;
    for (int r = 0; r < image.rows; ++r) {
        for (int c = 0; c < image.cols; ++c) {
            const int cl = std::max(c - 1, 0), ch = std::min(c + 1, image.cols - 1);
            const int rl = std::max(r - 1, 0), rh = std::min(r + 1, image.rows - 1);
            const double gx = (image.at(r, ch) - image.at(r, cl)) / (ch - cl);
            const double gy = (image.at(rh, c) - image.at(rl, c)) / (rh - rl);
            acc += std::sqrt(gx * gx + gy * gy);
        }
    }
    return acc / (std::size_t(image.rows) * image.cols);
}

std::vector<double> intensity_profile(const Image& image, int row) {
    if (row < 0 || row >= image.rows)
        throw std::invalid_argument("profile row out of range");
    return {image.v.begin() + std::size_t(row) * image.cols,
            image.v.begin() + std::size_t(row + 1) * image.cols};
}

namespace {

void check_stack(const std::vector<Image>& a, const std::vector<Image>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("volume slice counts differ or are empty");
}

}  // namespace

double mae_volume(const std::vector<Image>& ref, const std::vector<Image>& test) {
    check_stack(ref, test);
    double acc = 0;
    for (std::size_t s = 0; s < ref.size(); ++s)
        acc += mae(ref[s], test[s]);
    return acc / ref.size();
}

double rmse_volume(const std::vector<Image>& ref, const std::vector<Image>& test) {
    check_stack(ref, test);
    double acc = 0;
    for (std::size_t s = 0; s < ref.size(); ++s)
        acc += rmse(ref[s], test[s]);
    return acc / ref.size();
}

double ssim_volume(const std::vector<Image>& ref, const std::vector<Image>& test, int threads) {
    check_stack(ref, test);
    double lo = ref[0].v[0], hi = lo;
    for (const Image& img : ref)
        for (double x : img.v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    const double range = hi - lo > 0 ? hi - lo : 1.0;
    double acc = 0;
    for (std::size_t s = 0; s < ref.size(); ++s)
        acc += ssim(ref[s], test[s], range, threads);
    return acc / ref.size();
}

}  // namespace uscg
