#include "mwf/mwt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mwf/errors.hpp"

namespace mwf {

namespace {

const std::vector<Mat>& high_taps(const FilterBank& b) {
    if (!b.highpass) throw ShapeError("transform: bank '" + b.name + "' has no highpass");
    return b.highpass->taps;
}

// One level on a scalar run of length L viewed as L/r vectors:
// out = [low vectors | high vectors], each flattened.
void forward_flat(Vec& s, const FilterBank& b) {
    const int r = b.r;
    const Eigen::Index m = s.size() / r;
    const Mat v = Eigen::Map<const Mat>(s.data(), r, m);
    Mat low, high;
    analysis_step(v, b, low, high);
    s.head(s.size() / 2) = Eigen::Map<const Vec>(low.data(), low.size());
    s.tail(s.size() / 2) = Eigen::Map<const Vec>(high.data(), high.size());
}

void inverse_flat(Vec& s, const FilterBank& b) {
    const int r = b.r;
    const Eigen::Index half = s.size() / (2 * r);
    const Mat low = Eigen::Map<const Mat>(s.data(), r, half);
    const Mat high = Eigen::Map<const Mat>(s.data() + s.size() / 2, r, half);
    const Mat v = synthesis_step(low, high, b);
    s = Eigen::Map<const Vec>(v.data(), v.size());
}

void map_flat(Vec& s, const Mat& q) {
    const int r = static_cast<int>(q.rows());
    Eigen::Map<Mat> v(s.data(), r, s.size() / r);
    v = q * v;
}

template <class F>
void each_row(Mat& a, Eigen::Index rows, Eigen::Index cols, F f) {
    for (Eigen::Index i = 0; i < rows; ++i) {
        Vec s = a.row(i).head(cols).transpose();
        f(s);
        a.row(i).head(cols) = s.transpose();
    }
}

template <class F>
void each_col(Mat& a, Eigen::Index rows, Eigen::Index cols, F f) {
    for (Eigen::Index j = 0; j < cols; ++j) {
        Vec s = a.col(j).head(rows);
        f(s);
        a.col(j).head(rows) = s;
    }
}

void check_dims(const Mat& img, int r, int levels) {
    if (levels < 0) throw std::invalid_argument("2D transform: levels must be >= 0");
    const long unit = (1L << levels) * r;
    if (img.rows() % unit != 0 || img.cols() % unit != 0)
        throw ShapeError("2D transform: dimensions must be multiples of 2^J r = " + std::to_string(unit));
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
    return m;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

VectorSignal prefilter(const Vec& x, const Mat& q) {
    const int r = static_cast<int>(q.rows());
    if (q.cols() != r) throw ShapeError("prefilter: q must be square");
    if (x.size() % r != 0) throw ShapeError("prefilter: length must be a multiple of " + std::to_string(r));
    return q * Eigen::Map<const Mat>(x.data(), r, x.size() / r);
}

Vec postfilter(const VectorSignal& v, const Mat& q) {
    if (q.rows() != v.rows() || q.cols() != v.rows()) throw ShapeError("postfilter: q does not match the signal");
    const Mat x = q.transpose() * v;
    return Eigen::Map<const Vec>(x.data(), x.size());
}

std::size_t TransformTree::coefficient_count() const {
    std::size_t n = approx.size();
    for (const auto& d : details) n += d.size();
    return n;
}

double TransformTree::squared_norm() const {
    double s = approx.squaredNorm();
    for (const auto& d : details) s += d.squaredNorm();
    return s;
}

void analysis_step(const VectorSignal& v, const FilterBank& b, Mat& low, Mat& high) {
    const auto& c = b.lowpass.taps;
    const auto& d = high_taps(b);
    const Eigen::Index m = v.cols();
    if (v.rows() != b.r) throw ShapeError("analysis_step: vector size does not match the bank");
    if (m % 2 != 0 || m == 0) throw ShapeError("analysis_step: vector length must be even");
    low = Mat::Zero(b.r, m / 2);
    high = Mat::Zero(b.r, m / 2);
    for (Eigen::Index j = 0; j < m / 2; ++j)
        for (size_t k = 0; k < c.size(); ++k) {
            const auto col = v.col((2 * j + static_cast<Eigen::Index>(k)) % m);
            low.col(j) += c[k] * col;
            high.col(j) += d[k] * col;
        }
}

VectorSignal synthesis_step(const Mat& low, const Mat& high, const FilterBank& b) {
    const auto& c = b.lowpass.taps;
    const auto& d = high_taps(b);
    if (low.rows() != b.r || high.rows() != b.r || low.cols() != high.cols())
        throw ShapeError("synthesis_step: band shapes do not match");
    const Eigen::Index m = 2 * low.cols();
    Mat v = Mat::Zero(b.r, m);
    for (Eigen::Index j = 0; j < low.cols(); ++j)
        for (size_t k = 0; k < c.size(); ++k)
            v.col((2 * j + static_cast<Eigen::Index>(k)) % m) +=
                c[k].transpose() * low.col(j) + d[k].transpose() * high.col(j);
    return v;
}

TransformTree analyze(const VectorSignal& v, const FilterBank& b, int levels) {
    if (levels < 1) throw std::invalid_argument("analyze: levels must be >= 1");
    if (v.cols() % (1L << levels) != 0)
        throw ShapeError("analyze: vector length must be divisible by 2^J");
    TransformTree t;
    t.r = b.r;
    t.levels = levels;
    t.bank = b.name;
    t.defect = b.highpass ? orthogonality_defect(b) : 0.0;
    Mat cur = v;
    for (int j = 0; j < levels; ++j) {
        Mat low, high;
        analysis_step(cur, b, low, high);
        t.details.push_back(std::move(high));
        cur = std::move(low);
    }
    t.approx = std::move(cur);
    return t;
}

VectorSignal synthesize(const TransformTree& t, const FilterBank& b) {
    if (static_cast<int>(t.details.size()) != t.levels) throw ShapeError("synthesize: malformed tree");
    Mat cur = t.approx;
    for (int j = t.levels - 1; j >= 0; --j) cur = synthesis_step(cur, t.details[j], b);
    return cur;
}

Mat analyze2d(const Mat& img, const FilterBank& b, int levels, const Mat* q) {
    check_dims(img, b.r, levels);
    Mat a = img;
    if (levels == 0) return a;
    if (q) {
        each_row(a, a.rows(), a.cols(), [&](Vec& s) { map_flat(s, *q); });
        each_col(a, a.rows(), a.cols(), [&](Vec& s) { map_flat(s, *q); });
    }
    Eigen::Index h = a.rows(), w = a.cols();
    for (int j = 0; j < levels; ++j, h /= 2, w /= 2) {
        each_row(a, h, w, [&](Vec& s) { forward_flat(s, b); });
        each_col(a, h, w, [&](Vec& s) { forward_flat(s, b); });
    }
    return a;
}

Mat synthesize2d(const Mat& coeffs, const FilterBank& b, int levels, const Mat* q) {
    check_dims(coeffs, b.r, levels);
    Mat a = coeffs;
    if (levels == 0) return a;
    for (int j = levels - 1; j >= 0; --j) {
        const Eigen::Index h = a.rows() >> j, w = a.cols() >> j;
        each_col(a, h, w, [&](Vec& s) { inverse_flat(s, b); });
        each_row(a, h, w, [&](Vec& s) { inverse_flat(s, b); });
    }
    if (q) {
        const Mat qt = q->transpose();
        each_col(a, a.rows(), a.cols(), [&](Vec& s) { map_flat(s, qt); });
        each_row(a, a.rows(), a.cols(), [&](Vec& s) { map_flat(s, qt); });
    }
    return a;
}

double threshold(double sigma, std::size_t n) {
    if (n < 2) return 0.0;
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

TransformTree hard_threshold(const TransformTree& t, double sigma) {
    if (sigma < 0) throw std::invalid_argument("hard_threshold: sigma must be >= 0");
    TransformTree out = t;
    for (auto& d : out.details) {
        const double lam = threshold(sigma, static_cast<std::size_t>(d.size()));
        for (Eigen::Index i = 0; i < d.cols(); ++i)
            if (d.col(i).norm() < lam) d.col(i).setZero();
    }
    return out;
}

Mat hard_threshold2d(const Mat& coeffs, int r, int levels, double sigma) {
    if (sigma < 0) throw std::invalid_argument("hard_threshold2d: sigma must be >= 0");
    check_dims(coeffs, r, levels);
    Mat a = coeffs;
    for (int j = 0; j < levels; ++j) {
        const Eigen::Index h = a.rows() >> j, w = a.cols() >> j;
        const double lam = threshold(sigma, static_cast<std::size_t>(3 * (h / 2) * (w / 2)));
        for (Eigen::Index y = 0; y < h; ++y)
            for (Eigen::Index x = (y < h / 2 ? w / 2 : 0); x < w; x += r)
                if (a.row(y).segment(x, r).norm() < lam) a.row(y).segment(x, r).setZero();
    }
    return a;
}

double estimate_sigma(const TransformTree& t) {
    if (t.details.empty()) return 0.0;
    const Mat& d = t.details[0];
    std::vector<double> v(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) v[i] = std::abs(d.data()[i]);
    return median(std::move(v)) / 0.6745;
}

double estimate_sigma2d(const Mat& coeffs, int levels) {
    if (levels < 1) return 0.0;
    const Eigen::Index h = coeffs.rows() / 2, w = coeffs.cols() / 2;
    std::vector<double> v;
    v.reserve(h * w);
    for (Eigen::Index y = h; y < 2 * h; ++y)
        for (Eigen::Index x = w; x < 2 * w; ++x) v.push_back(std::abs(coeffs(y, x)));
    return median(std::move(v)) / 0.6745;
}

double psnr(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("psnr: dimension mismatch");
    const double mse = (a - b).squaredNorm() / static_cast<double>(a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double mae(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("mae: dimension mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

const std::vector<std::string>& test_signal_names() {
    static const std::vector<std::string> names = {"cusp", "hisine", "losine", "piece-regular", "piece-polynomial"};
    return names;
}

Vec test_signal(const std::string& name, int n) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("test_signal: n must be a power of 2");
    const std::string key = lower(name);
    const double pi = std::numbers::pi;
    Vec s(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) / n;
        double v;
        if (key == "cusp") {
            v = std::sqrt(std::abs(t - 0.37));
        } else if (key == "hisine") {
            v = std::sin(pi * 0.6902 * n * t);
        } else if (key == "losine") {
            v = std::sin(pi * 0.3333 * n * t);
        } else if (key == "piece-regular") {
            // gaussian bump, a jump to a smooth decay, a plateau, an exponential ramp
            if (t < 0.3)
                v = -70.0 * std::exp(-(t - 0.15) * (t - 0.15) / (2 * 0.05 * 0.05));
            else if (t < 0.5)
                v = 30.0 * std::exp(-8.0 * (t - 0.3));
            else if (t < 0.7)
                v = -25.0;
            else
                v = 40.0 * (std::exp(4.0 * (t - 0.7)) - 1.0) / (std::exp(1.2) - 1.0);
        } else if (key == "piece-polynomial") {
            if (t < 0.2)
                v = 20.0 * t * t;
            else if (t < 0.45)
                v = -10.0 + 60.0 * (t - 0.2) * (0.45 - t) * 8.0;
            else if (t < 0.7)
                v = 12.0 - 30.0 * (t - 0.45);
            else
                v = 200.0 * (t - 0.7) * (t - 0.85) * (t - 1.0) * 10.0 - 5.0;
        } else {
            throw std::invalid_argument("test_signal: unknown signal '" + name + "'");
        }
        s(i) = v;
    }
    const double m = s.cwiseAbs().maxCoeff();
    if (m > 0) s /= m;
    return s;
}

Mat synthetic_image(int width, int height, std::uint64_t seed) {
    if (width < 1 || height < 1) throw std::invalid_argument("synthetic_image: empty size");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Disk {
        double cx, cy, rad, val;
    };
    std::vector<Disk> disks;
    for (int k = 0; k < 6; ++k) disks.push_back({u(rng), u(rng), 0.05 + 0.15 * u(rng), 40 + 180 * u(rng)});
    const double fx = 6 + 10 * u(rng), fy = 6 + 10 * u(rng);
    Mat img(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double px = (x + 0.5) / width, py = (y + 0.5) / height;
            double v = 60.0 + 80.0 * px + 40.0 * py * py;
            for (const auto& d : disks)
                if ((px - d.cx) * (px - d.cx) + (py - d.cy) * (py - d.cy) < d.rad * d.rad) v = d.val;
            if (px > 0.6 && py > 0.6) v += 25.0 * std::sin(2 * std::numbers::pi * (fx * px + fy * py));
            img(y, x) = std::clamp(v, 0.0, 255.0);
        }
    return img;
}

Mat add_noise(const Mat& img, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    Mat out = img;
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += g(rng);
    return out;
}

}  // namespace mwf
