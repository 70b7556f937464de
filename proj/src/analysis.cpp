#include "mwf/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "mwf/errors.hpp"
#include "mwf/recover.hpp"

namespace mwf {

namespace {

const std::vector<Mat>& highpass_taps(const FilterBank& b, CausalFilter& scratch) {
    if (b.highpass) return b.highpass->taps;
    scratch = complete_qr(b.lowpass);
    return scratch.taps;
}

CMat mask(const std::vector<Mat>& taps, double omega) {
    const int r = static_cast<int>(taps[0].rows());
    CMat out = CMat::Zero(r, r);
    for (size_t k = 0; k < taps.size(); ++k)
        out += std::polar(1.0, static_cast<double>(k) * omega) * taps[k].cast<std::complex<double>>();
    return out / std::sqrt(2.0);
}

Eigen::VectorXcd evec(int r, double omega) {
    Eigen::VectorXcd e(r);
    for (int m = 0; m < r; ++m) e(m) = std::polar(1.0, -m * omega);
    return e;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double binom(int n, int k) {
    double v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

// (1/sqrt2) sum_k T_k (k/2)^l cos(k w), the l-th derivative moment (up to i^l)
Mat moment(const std::vector<Mat>& taps, int l, double w) {
    Mat out = Mat::Zero(taps[0].rows(), taps[0].cols());
    for (size_t k = 0; k < taps.size(); ++k)
        out += std::pow(0.5 * static_cast<double>(k), l) * std::cos(static_cast<double>(k) * w) * taps[k];
    return out / std::sqrt(2.0);
}

bool sum_rules_solvable(const std::vector<Mat>& c, int p, double rel) {
    const int r = static_cast<int>(c[0].rows());
    Mat K = Mat::Zero(2 * r * p, r * p);
    for (int k = 0; k < p; ++k) {
        for (int l = 0; l <= k; ++l) {
            const double bk = binom(k, l);
            K.block(2 * r * k, r * (k - l), r, r) += bk * moment(c, l, 0.0).transpose();
            K.block(2 * r * k + r, r * (k - l), r, r) += bk * moment(c, l, std::numbers::pi).transpose();
        }
        K.block(2 * r * k, r * k, r, r) -= std::pow(2.0, -k) * Mat::Identity(r, r);
    }
    Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = rel * std::max(1.0, s(0));
    const Mat& V = svd.matrixV();
    for (int i = 0; i < V.cols(); ++i) {
        const double si = i < s.size() ? s(i) : 0.0;
        if (si > tol) continue;
        if (V.col(i).head(r).norm() > rel) return true;
    }
    return false;
}

}  // namespace

CodingGain coding_gain(const FilterBank& b, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("coding_gain: rho must lie in [0, 1)");
    CausalFilter scratch;
    const auto& hp = highpass_taps(b, scratch);
    const int r = b.r;
    const int len = r * b.tap_count();
    Mat R(len, len);
    for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) R(i, j) = std::pow(rho, std::abs(i - j));
    CodingGain out;
    for (const auto* taps : {&b.lowpass.taps, &hp})
        for (int c = 0; c < r; ++c) {
            Eigen::VectorXd a(len);
            for (int k = 0; k < b.tap_count(); ++k)
                for (int j = 0; j < r; ++j) a(r * k + j) = (*taps)[k](c, j);
            out.variances.push_back(a.dot(R * a));
        }
    double mean = 0, logsum = 0;
    for (double v : out.variances) {
        mean += v;
        logsum += std::log(v);
    }
    const double m = static_cast<double>(out.variances.size());
    mean /= m;
    out.ratio = mean / std::exp(logsum / m);
    out.db = 10.0 * std::log10(out.ratio);
    return out;
}

SobolevEstimate sobolev(const FilterBank& b) {
    const auto& c = b.lowpass.taps;
    const int n = b.lowpass.degree();
    if (n < 1) throw std::invalid_argument("sobolev: needs at least two taps");
    const int r = b.r, rr = r * r;
    SobolevEstimate out;
    out.p = std::max(1, approximation_order(b));
    const int M = std::max(n - 1, out.p);
    const int dim = rr * (2 * M + 1);

    Mat T = Mat::Zero(dim, dim);
    for (int j = -M; j <= M; ++j)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l) {
                const int m = 2 * j - k + l;
                if (m < -M || m > M) continue;
                T.block((j + M) * rr, (m + M) * rr, rr, rr) += kron(c[k], c[l]);
            }

    // coefficients of (1 - cos w)^p = ((2 - z - 1/z) / 2)^p
    std::vector<double> poly = {1.0};
    for (int q = 0; q < out.p; ++q) {
        std::vector<double> next(poly.size() + 2, 0.0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i] += -0.5 * poly[i];
            next[i + 1] += poly[i];
            next[i + 2] += -0.5 * poly[i];
        }
        poly = next;
    }
    Eigen::VectorXcd f0 = Eigen::VectorXcd::Zero(dim);
    for (size_t i = 0; i < poly.size(); ++i) {
        const int m = static_cast<int>(i) - out.p;
        for (int a = 0; a < r; ++a) f0((m + M) * rr + a * r + a) = poly[i];
    }

    Eigen::EigenSolver<Mat> right(T), left(Mat(T.transpose()));
    const Eigen::VectorXcd lam = right.eigenvalues(), mu = left.eigenvalues();
    const Eigen::MatrixXcd V = right.eigenvectors(), Y = left.eigenvectors();
    out.rho = 0.0;
    for (int i = 0; i < dim; ++i) {
        const std::complex<double> li = lam(i);
        double coef = 0.0;
        if (std::abs(li) > 1e-10) {
            for (int k = 0; k < dim; ++k) {
                if (std::abs(mu(k) - li) > 1e-6 * std::max(1.0, std::abs(li))) continue;
                const std::complex<double> yv = Y.col(k).transpose() * V.col(i);
                const std::complex<double> yf = Y.col(k).transpose() * f0;
                double ck;
                if (std::abs(yv) > 1e-10 * Y.col(k).norm() * V.col(i).norm())
                    ck = std::abs(yf) * V.col(i).norm() / (std::abs(yv) * f0.norm());
                else
                    ck = std::abs(yf) / (Y.col(k).norm() * f0.norm());
                coef = std::max(coef, ck);
            }
        }
        out.eigenvalues.push_back(li);
        out.excited.push_back(coef > 1e-6);
        if (coef > 1e-6) out.rho = std::max(out.rho, std::abs(li));
    }
    out.s = out.rho > 0 ? -0.5 * std::log2(out.rho) : std::numeric_limits<double>::infinity();
    return out;
}

GmpResiduals gmp_residuals(const FilterBank& b) {
    CausalFilter scratch;
    const auto& hp = highpass_taps(b, scratch);
    const int r = b.r;
    const double pi = std::numbers::pi;
    GmpResiduals g;
    g.lowpass_dc = (mask(b.lowpass.taps, 0.0) * evec(r, 0.0) - evec(r, 0.0)).cwiseAbs().maxCoeff();
    g.lowpass_pi = (mask(b.lowpass.taps, r * pi) * evec(r, pi)).cwiseAbs().maxCoeff();
    g.highpass_dc = (mask(hp, 0.0) * evec(r, 0.0)).cwiseAbs().maxCoeff();
    return g;
}

bool gmp_order_111(const FilterBank& b, double tol) {
    const GmpResiduals g = gmp_residuals(b.r == 2 ? conjugate(b, haar_prefilter()) : b);
    return g.lowpass_dc <= tol && g.lowpass_pi <= tol && g.highpass_dc <= tol;
}

int approximation_order(const FilterBank& b, int p_max, double tol) {
    if (p_max < 1) throw std::invalid_argument("approximation_order: p_max must be >= 1");
    int best = 0;
    for (int p = 1; p <= p_max; ++p) {
        if (!sum_rules_solvable(b.lowpass.taps, p, tol)) break;
        best = p;
    }
    return best;
}

int balance_order(const FilterBank& b, int q_max, double tol) {
    if (q_max < 1) throw std::invalid_argument("balance_order: q_max must be >= 1");
    const int r = b.r, n = b.lowpass.degree();
    const int J = std::max(40, 4 * (n + 1));
    const int nf = r * (2 * J + n + 1);
    Mat L = Mat::Zero(r * J, nf);
    for (int j = 0; j < J; ++j)
        for (int k = 0; k <= n; ++k) L.block(r * j, r * (2 * j + k), r, r) = b.lowpass.taps[k];
    const int lo = r * (n + 1), hi = r * (2 * J - 2);
    int q = 0;
    for (int k = 0; k < q_max; ++k) {
        Eigen::VectorXd uc(r * J), uf(nf);
        for (int i = 0; i < r * J; ++i) uc(i) = std::pow(static_cast<double>(i), k);
        for (int i = 0; i < nf; ++i) uf(i) = std::pow(static_cast<double>(i), k);
        const Eigen::VectorXd y = std::sqrt(2.0) * (L.transpose() * uc);
        const double scale = std::pow(2.0, -k);
        const Eigen::VectorXd d = y.segment(lo, hi - lo) - scale * uf.segment(lo, hi - lo);
        const double norm = std::max(1.0, scale * uf.segment(lo, hi - lo).cwiseAbs().maxCoeff());
        if (d.cwiseAbs().maxCoeff() / norm > tol) break;
        q = k + 1;
    }
    return q;
}

Mat balanced_orthogonality_defect(const CausalFilter& low, const Mat& q) {
    const int r = low.r;
    Mat H(r, r * static_cast<int>(low.taps.size()));
    for (size_t k = 0; k < low.taps.size(); ++k) H.block(0, r * k, r, r) = low.taps[k];
    return Mat::Identity(r, r) - q * H * H.transpose() * q.transpose();
}

std::vector<FrequencyRow> frequency_response(const FilterBank& b, int grid) {
    if (grid < 2) throw std::invalid_argument("frequency_response: grid must be >= 2");
    std::vector<FrequencyRow> rows;
    for (int j = 0; j < grid; ++j) {
        const double w = std::numbers::pi * j / (grid - 1);
        FrequencyRow row;
        row.omega = w;
        row.h = mask(b.lowpass.taps, w).cwiseAbs();
        if (b.highpass) row.g = mask(b.highpass->taps, w).cwiseAbs();
        rows.push_back(std::move(row));
    }
    return rows;
}

SymmetryInfo symmetry(const FilterBank& b) {
    const auto& c = b.lowpass.taps;
    const int r = b.r, n = b.lowpass.degree();
    double scale = 0;
    for (const auto& m : c) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    const double tol = 1e-10 * std::max(scale, 1e-300);
    auto tap = [&](int m, int a, int bb) { return (m >= 0 && m <= n) ? c[m](a, bb) : 0.0; };

    std::vector<int> e(r, 0), s(r, 1);
    const long combos_e = static_cast<long>(std::pow(n + 1, r));
    const long combos_s = 1L << (r - 1);
    for (long ie = 0; ie < combos_e; ++ie) {
        long v = ie;
        for (int a = 0; a < r; ++a) {
            e[a] = static_cast<int>(v % (n + 1));
            v /= (n + 1);
        }
        for (long is = 0; is < combos_s; ++is) {
            s[0] = 1;
            for (int a = 1; a < r; ++a) s[a] = ((is >> (a - 1)) & 1) ? -1 : 1;
            bool ok = true;
            for (int a = 0; a < r && ok; ++a)
                for (int bb = 0; bb < r && ok; ++bb)
                    for (int m = -2 * n; m <= 3 * n && ok; ++m)
                        if (std::abs(tap(m, a, bb) - s[a] * s[bb] * tap(2 * e[a] - e[bb] - m, a, bb)) > tol) ok = false;
            if (ok) return {true, e, s};
        }
    }
    return {};
}

bool symmetry_class(const FilterBank& b) { return symmetry(b).symmetric; }

MetricsReport metrics(const FilterBank& b, double rho) {
    MetricsReport m;
    m.coding_gain = coding_gain(b, rho);
    m.sobolev = sobolev(b);
    m.gmp_111 = gmp_order_111(b);
    m.approx_order = approximation_order(b);
    m.balance_order = balance_order(b);
    m.symmetric = symmetry_class(b);
    return m;
}

}  // namespace mwf
