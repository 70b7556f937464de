#include "mwf/lpoly.hpp"

#include <algorithm>
#include <cmath>

#include "mwf/errors.hpp"

namespace mwf {

namespace {

void check_square(const std::vector<Mat>& c, int r, const char* what) {
    if (r < 1) throw ShapeError(std::string(what) + ": multiplicity must be positive");
    if (c.empty()) throw ShapeError(std::string(what) + ": empty coefficient list");
    for (const auto& m : c)
        if (m.rows() != r || m.cols() != r)
            throw ShapeError(std::string(what) + ": coefficient is not " + std::to_string(r) + "x" +
                             std::to_string(r));
}

}  // namespace

MatrixLaurent::MatrixLaurent(int r_, int kmin_, std::vector<Mat> c) : r(r_), kmin(kmin_), coeffs(std::move(c)) {
    check_square(coeffs, r, "MatrixLaurent");
}

Mat MatrixLaurent::coeff(int k) const {
    if (k < kmin || k > kmax()) return Mat::Zero(r, r);
    return coeffs[k - kmin];
}

MatrixLaurent MatrixLaurent::constant(const Mat& a) {
    return MatrixLaurent(static_cast<int>(a.rows()), 0, {a});
}

MatrixLaurent adjoint(const MatrixLaurent& a) {
    std::vector<Mat> c;
    c.reserve(a.coeffs.size());
    for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) c.push_back(it->transpose());
    return MatrixLaurent(a.r, -a.kmax(), std::move(c));
}

MatrixLaurent multiply(const MatrixLaurent& a, const MatrixLaurent& b) {
    if (a.r != b.r) throw ShapeError("multiply: multiplicity mismatch");
    const int na = static_cast<int>(a.coeffs.size());
    const int nb = static_cast<int>(b.coeffs.size());
    std::vector<Mat> c(na + nb - 1, Mat::Zero(a.r, a.r));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) c[i + j].noalias() += a.coeffs[i] * b.coeffs[j];
    return MatrixLaurent(a.r, a.kmin + b.kmin, std::move(c));
}

MatrixLaurent add(const MatrixLaurent& a, const MatrixLaurent& b) {
    if (a.r != b.r) throw ShapeError("add: multiplicity mismatch");
    const int lo = std::min(a.kmin, b.kmin), hi = std::max(a.kmax(), b.kmax());
    std::vector<Mat> c;
    for (int k = lo; k <= hi; ++k) c.push_back(a.coeff(k) + b.coeff(k));
    return MatrixLaurent(a.r, lo, std::move(c));
}

MatrixLaurent trim(const MatrixLaurent& a, double tol) {
    auto small = [tol](const Mat& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() <= tol; };
    int lo = 0, hi = static_cast<int>(a.coeffs.size()) - 1;
    while (lo <= hi && small(a.coeffs[lo])) ++lo;
    while (hi >= lo && small(a.coeffs[hi])) --hi;
    if (lo > hi) return MatrixLaurent(a.r, 0, {Mat::Zero(a.r, a.r)});
    return MatrixLaurent(a.r, a.kmin + lo,
                         std::vector<Mat>(a.coeffs.begin() + lo, a.coeffs.begin() + hi + 1));
}

bool approx_equal(const MatrixLaurent& a, const MatrixLaurent& b, double tol) {
    if (a.r != b.r) return false;
    const int lo = std::min(a.kmin, b.kmin), hi = std::max(a.kmax(), b.kmax());
    for (int k = lo; k <= hi; ++k)
        if ((a.coeff(k) - b.coeff(k)).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

CMat evaluate(const MatrixLaurent& a, double omega) {
    CMat out = CMat::Zero(a.r, a.r);
    for (int j = 0; j < static_cast<int>(a.coeffs.size()); ++j) {
        const std::complex<double> w = std::polar(1.0, (a.kmin + j) * omega);
        out += w * a.coeffs[j].cast<std::complex<double>>();
    }
    return out;
}

CausalFilter::CausalFilter(int r_, std::vector<Mat> t) : r(r_), taps(std::move(t)) {
    check_square(taps, r, "CausalFilter");
}

MatrixLaurent CausalFilter::laurent() const {
    // coefficient of z^-k is C_k, so the window starts at -n
    return MatrixLaurent(r, -degree(), std::vector<Mat>(taps.rbegin(), taps.rend()));
}

ProductFilter::ProductFilter(int r_, std::vector<Mat> h) : r(r_), half(std::move(h)) {
    check_square(half, r, "ProductFilter");
}

Mat ProductFilter::coeff(int k) const {
    const int a = std::abs(k);
    if (a > degree()) return Mat::Zero(r, r);
    return k >= 0 ? half[a] : Mat(half[a].transpose());
}

MatrixLaurent ProductFilter::laurent() const {
    std::vector<Mat> c;
    for (int k = -degree(); k <= degree(); ++k) c.push_back(coeff(k));
    return MatrixLaurent(r, -degree(), std::move(c));
}

ProductFilter product_filter(const CausalFilter& h) {
    const int n = h.degree();
    std::vector<Mat> half(n + 1, Mat::Zero(h.r, h.r));
    // P_k = sum_a C_a C_{a+k}^T
    for (int k = 0; k <= n; ++k)
        for (int a = 0; a + k <= n; ++a) half[k].noalias() += h.taps[a] * h.taps[a + k].transpose();
    return ProductFilter(h.r, std::move(half));
}

bool is_halfband(const ProductFilter& p, double tol) {
    if ((p.half[0] - Mat::Identity(p.r, p.r)).cwiseAbs().maxCoeff() > tol) return false;
    for (int k = 2; k <= p.degree(); k += 2)
        if (p.half[k].cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

}  // namespace mwf
