#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwf/filters.hpp"

namespace mwf {

using Vec = Eigen::VectorXd;

// r x M matrix, column i is the i-th vector sample.
using VectorSignal = Mat;

// Pairs (x_{ri}, ..., x_{ri+r-1}) mapped through q; q is r x r orthogonal.
VectorSignal prefilter(const Vec& x, const Mat& q);
Vec postfilter(const VectorSignal& v, const Mat& q);

struct TransformTree {
    int r = 1;
    int levels = 0;
    std::vector<Mat> details;  // details[0] is the finest level
    Mat approx;
    std::string bank, prefilter;
    double defect = 0.0;  // orthogonality defect of the bank used

    std::size_t coefficient_count() const;
    double squared_norm() const;
};

// One level of periodic analysis: low_j = sum_k C_k v_{(2j+k) mod M}, high likewise with D_k.
void analysis_step(const VectorSignal& v, const FilterBank& b, Mat& low, Mat& high);
// Adjoint of analysis_step.
VectorSignal synthesis_step(const Mat& low, const Mat& high, const FilterBank& b);

TransformTree analyze(const VectorSignal& v, const FilterBank& b, int levels);
VectorSignal synthesize(const TransformTree& t, const FilterBank& b);

// Separable 2D transform in Mallat layout. The image is h x w (row-major pixels);
// with q given, every row and column is prefiltered once before the first level
// and postfiltered after the last. levels = 0 is the identity.
Mat analyze2d(const Mat& img, const FilterBank& b, int levels, const Mat* q = nullptr);
Mat synthesize2d(const Mat& coeffs, const FilterBank& b, int levels, const Mat* q = nullptr);

// Zeroes each detail vector with norm below sigma sqrt(2 ln N_j), N_j the
// number of scalar detail coefficients at level j.
TransformTree hard_threshold(const TransformTree& t, double sigma);
// 2D form on a Mallat layout; vectors are r consecutive entries along a row.
Mat hard_threshold2d(const Mat& coeffs, int r, int levels, double sigma);
double threshold(double sigma, std::size_t n);

// median |w| / 0.6745 over the scalar entries of the finest details
double estimate_sigma(const TransformTree& t);
double estimate_sigma2d(const Mat& coeffs, int levels);

// 10 log10(255^2 / MSE); +infinity for identical inputs.
double psnr(const Mat& a, const Mat& b);
double mae(const Mat& a, const Mat& b);

// "cusp", "hisine", "losine", "piece-regular", "piece-polynomial" (case-insensitive),
// normalized to unit max-abs.
Vec test_signal(const std::string& name, int n);
const std::vector<std::string>& test_signal_names();

// Smooth ramps, disks and a texture patch, values in [0, 255].
Mat synthetic_image(int width, int height, std::uint64_t seed);
// Adds seeded N(0, sigma^2) noise.
Mat add_noise(const Mat& img, double sigma, std::uint64_t seed);

}  // namespace mwf
