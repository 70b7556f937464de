#include "mwf/recover.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace mwf {

namespace {

void require_sa4_shape(const CausalFilter& c, const char* who) {
    if (c.r != 2 || c.taps.size() != 4)
        throw ShapeError(std::string(who) + ": needs r = 2 and four taps");
}

// Entry signs of the SA4 lowpass template (identical for every t > 0).
std::vector<Mat> sa4_signs() {
    std::vector<Mat> s = sa4_family(1.0).lowpass.taps;
    for (auto& m : s) m = m.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
    return s;
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

FilterBank make_bank(const std::string& name, CausalFilter low, bool flip = false) {
    FilterBank b;
    b.name = name;
    b.r = low.r;
    b.highpass = flip ? alternating_flip(low) : complete_qr(low);
    b.lowpass = std::move(low);
    return b;
}

void tap_errors(const std::vector<Mat>& a, const std::vector<Mat>& b, double& mae, double& mse,
                std::vector<double>& mae_k, std::vector<double>& mse_k) {
    if (a.size() != b.size()) throw ShapeError("error_report: tap count mismatch");
    double sq = 0;
    size_t count = 0;
    mae = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k].rows() != b[k].rows() || a[k].cols() != b[k].cols()) throw ShapeError("error_report: shape mismatch");
        const Mat d = a[k] - b[k];
        mae_k.push_back(d.cwiseAbs().maxCoeff());
        mse_k.push_back(d.squaredNorm() / static_cast<double>(d.size()));
        mae = std::max(mae, mae_k.back());
        sq += d.squaredNorm();
        count += d.size();
    }
    mse = sq / static_cast<double>(count);
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::Approximate: return "approximate";
        case Method::ExactRotated: return "exact-rotated";
        case Method::ExactAveraged: return "exact-averaged";
    }
    return "?";
}

ErrorReport error_report(const FilterBank& recovered, const FilterBank& reference) {
    ErrorReport e;
    tap_errors(recovered.lowpass.taps, reference.lowpass.taps, e.mae_mf, e.mse_mf, e.mae_mc, e.mse_mc);
    if (recovered.highpass && reference.highpass) {
        e.has_highpass = true;
        tap_errors(recovered.highpass->taps, reference.highpass->taps, e.mae_mwf, e.mse_mwf, e.mae_wc, e.mse_wc);
    }
    return e;
}

AveragedMagnitudes averaged_magnitudes(const Mat& L) {
    if (L.rows() != 2 || L.cols() != 8) throw ShapeError("averaged_magnitudes: flat factor must be 2x8");
    auto avg = [&](int a, int b) {
        return 0.25 * (std::abs(L(0, a)) + std::abs(L(1, a)) + std::abs(L(0, b)) + std::abs(L(1, b)));
    };
    return {avg(0, 6), avg(1, 7), avg(2, 4), avg(3, 5)};
}

RecoveryResult recover_approximate(const SpectralFactor& s) {
    require_sa4_shape(s.taps, "recover_approximate");
    const AveragedMagnitudes m = averaged_magnitudes(s.flat());
    // The factor carries SA4 times a near-antidiagonal orthogonal matrix, so the
    // column-0 averages land in column 1 of the recovered taps and vice versa.
    Mat outer(2, 2), inner(2, 2);
    outer << m.m17, m.m06, m.m17, m.m06;
    inner << m.m35, m.m24, m.m35, m.m24;
    const auto sg = sa4_signs();
    std::vector<Mat> c = {sg[0].cwiseProduct(outer), sg[1].cwiseProduct(inner), sg[2].cwiseProduct(inner),
                          sg[3].cwiseProduct(outer)};
    RecoveryResult out;
    out.method = Method::Approximate;
    out.f = s.f;
    out.bank = make_bank("sa4-approx", CausalFilter(2, std::move(c)), true);
    return out;
}

ExactRecovery recover_exact(const SpectralFactor& s) {
    require_sa4_shape(s.taps, "recover_exact");
    const Mat L = s.flat();
    ExactRecovery out;
    out.even = 0.25 * (std::abs(L(0, 0) + L(0, 4) + L(1, 0) + L(1, 4)) + std::abs(L(0, 2) + L(0, 6) + L(1, 2) + L(1, 6)));
    out.odd = 0.25 * (std::abs(L(0, 1) + L(0, 5) + L(1, 1) + L(1, 5)) + std::abs(L(0, 3) + L(0, 7) + L(1, 3) + L(1, 7)));
    // The averages equal cos(theta)/(2 sqrt2) and sin(theta)/(2 sqrt2) for an SA4 factor.
    const double k = 2.0 * std::sqrt(2.0);
    const double ce = k * out.even, so = k * out.odd;
    if (ce > 1.0 + 1e-12) throw NumericError("recover_exact: acos argument out of range: " + std::to_string(ce));
    if (so > 1.0 + 1e-12) throw NumericError("recover_exact: asin argument out of range: " + std::to_string(so));
    out.theta = 0.5 * (std::acos(std::min(ce, 1.0)) + std::asin(std::min(so, 1.0)));

    const double c = std::cos(out.theta), sn = std::sin(out.theta);
    Mat v(2, 2);
    v << c, sn, sn, -c;  // diag(1,-1) times the rotation by theta
    std::vector<Mat> h2;
    for (const auto& t : s.taps.taps) h2.push_back(t * v);

    std::vector<Mat> h3(4, Mat(2, 2));
    const int pair[4] = {3, 2, 1, 0};
    for (int t = 0; t < 4; ++t)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                h3[t](i, j) = sgn(h2[t](i, j)) * 0.5 * (std::abs(h2[t](i, j)) + std::abs(h2[pair[t]](i, j)));

    out.rotated.method = Method::ExactRotated;
    out.rotated.f = s.f;
    out.rotated.theta = out.theta;
    out.rotated.bank = make_bank("sa4-rotated", CausalFilter(2, std::move(h2)));
    out.averaged.method = Method::ExactAveraged;
    out.averaged.f = s.f;
    out.averaged.theta = out.theta;
    out.averaged.bank = make_bank("sa4-exact", CausalFilter(2, std::move(h3)));
    return out;
}

CausalFilter alternating_flip(const CausalFilter& low) {
    if (low.r != 2) throw ShapeError("alternating_flip: needs r = 2");
    const int n = low.degree();
    Mat swap(2, 2);
    swap << 0, 1, 1, 0;
    std::vector<Mat> d;
    for (int k = 0; k <= n; ++k) d.push_back((k % 2 ? -1.0 : 1.0) * low.taps[n - k] * swap);
    return CausalFilter(2, std::move(d));
}

CausalFilter complete_qr(const CausalFilter& low) {
    const int r = low.r, n = low.degree();
    if (n % 2 == 0) throw ShapeError("complete_qr: needs an even number of taps");
    const int width = r * (n + 1);
    const int half = (n - 1) / 2;
    Mat A = Mat::Zero(width, r * (2 * half + 1));
    int col = 0;
    for (int l = -half; l <= half; ++l, col += r)
        for (int k = 0; k <= n; ++k) {
            const int m = k + 2 * l;
            if (m >= 0 && m <= n) A.block(k * r, col, r, r) = low.taps[m].transpose();
        }
    Eigen::JacobiSVD<Mat> rank(A);
    const auto& sv = rank.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        throw NumericError("complete_qr: shift rows are rank deficient, the complement is not unique");
    Eigen::HouseholderQR<Mat> qr(A);
    const Mat Q = qr.householderQ() * Mat::Identity(width, width);
    Mat B = Q.rightCols(r).transpose();  // r x width, rows are highpass rows

    if (r == 2) {
        Mat S = Mat::Zero(r, r);
        for (int k = 0; k <= n; ++k) S += B.block(0, k * r, r, r);
        Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullU);
        const Mat U = svd.matrixU();
        Mat R(2, 2);
        R.row(0) = U.col(1).transpose();
        R.row(1) = U.col(0).transpose();
        B = R * B;
    }
    for (int i = 0; i < r; ++i) {
        int j = 0;
        while (j < width && std::abs(B(i, j)) < 1e-14) ++j;
        if (j < width && B(i, j) > 0) B.row(i) *= -1.0;
    }
    std::vector<Mat> d;
    for (int k = 0; k <= n; ++k) d.push_back(B.block(0, k * r, r, r));
    return CausalFilter(r, std::move(d));
}

}  // namespace mwf
