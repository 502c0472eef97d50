#pragma once

#include <span>
#include <vector>

namespace uscg {

/// Real-valued raster, row-major with row 0 at the bottom.
struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    double at(int row, int col) const { return v[std::size_t(row) * cols + col]; }
    double& at(int row, int col) { return v[std::size_t(row) * cols + col]; }
};

double mae(const Image& ref, const Image& test);
double rmse(const Image& ref, const Image& test);
double area_average(const Image& image);

/// Mean local structural similarity over 8x8 sliding windows, stride 1,
/// stabilizers C1 = (0.01 L)^2 and C2 = (0.03 L)^2. With dynamic_range <= 0,
/// L is taken from the reference (max - min, falling back to 1 for constant
/// references). Window rows are split across `threads` when > 1.
double ssim(const Image& ref, const Image& test, double dynamic_range = -1, int threads = 1);

/// Mean gradient magnitude, central differences inside and one-sided at the
/// borders.
double sharpness(const Image& image);

/// Raw values of one row.
std::vector<double> intensity_profile(const Image& image, int row);

// element-wise variants for flat sequences (fields, projections)
double mae(std::span<const double> ref, std::span<const double> test);
double rmse(std::span<const double> ref, std::span<const double> test);

// volume scoring: per-slice metric averaged over slices, ssim with a shared
// dynamic range taken from the whole reference stack
double mae_volume(const std::vector<Image>& ref, const std::vector<Image>& test);
double rmse_volume(const std::vector<Image>& ref, const std::vector<Image>& test);
double ssim_volume(const std::vector<Image>& ref, const std::vector<Image>& test, int threads = 1);

}  // namespace uscg
