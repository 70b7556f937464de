#include "mwf/bauer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <deque>

namespace mwf {

Precision parse_precision(const std::string& s) {
    if (s == "double") return Precision::Double;
    if (s == "extended") return Precision::Extended;
    if (s == "quad") return Precision::Quad;
    throw std::invalid_argument("unknown precision: " + s);
}

std::string to_string(Precision p) {
    switch (p) {
        case Precision::Double: return "double";
        case Precision::Extended: return "extended";
        case Precision::Quad: return "quad";
    }
    return "?";
}

NotPositiveDefinite::NotPositiveDefinite(int row_, double min_eig_)
    : NumericError("block row " + std::to_string(row_) + " is not positive definite (smallest eigenvalue " +
                   std::to_string(min_eig_) + ")"),
      row(row_),
      min_eig(min_eig_) {}

namespace {

template <class S>
S s_sqrt(S x) {
    return std::sqrt(x);
}

template <>
__float128 s_sqrt<__float128>(__float128 x) {
    if (x <= 0) return 0;
    __float128 y = std::sqrt(static_cast<double>(x));
    y = (y + x / y) / 2;
    y = (y + x / y) / 2;
    return y;
}

template <class S>
S s_abs(S x) {
    return x < 0 ? -x : x;
}

// Row-major r x r block.
template <class S>
using Block = std::vector<S>;

template <class S>
struct Core {
    int r, n;
    std::vector<Block<S>> P;
    std::deque<std::vector<Block<S>>> ring;  // rows i-n..i-1
    std::vector<Block<S>> current;
    int count = 0;

    explicit Core(const ProductFilter& p) : r(p.r), n(p.degree()) {
        for (const auto& m : p.half) {
            Block<S> b(r * r);
            for (int a = 0; a < r; ++a)
                for (int c = 0; c < r; ++c) b[a * r + c] = static_cast<S>(m(a, c));
            P.push_back(std::move(b));
        }
    }

    // s -= x * y^T
    void sub_xyt(Block<S>& s, const Block<S>& x, const Block<S>& y) const {
        for (int a = 0; a < r; ++a)
            for (int c = 0; c < r; ++c) {
                S acc = 0;
                for (int e = 0; e < r; ++e) acc += x[a * r + e] * y[c * r + e];
                s[a * r + c] -= acc;
            }
    }

    void advance() {
        const int i = count;
        const int w = std::min(i, n);
        std::vector<Block<S>> row(w + 1, Block<S>(r * r, S(0)));
        for (int d = w; d >= 1; --d) {
            const int j = i - d;
            const auto& rj = ring[ring.size() - d];
            Block<S> s(r * r);
            for (int a = 0; a < r; ++a)
                for (int c = 0; c < r; ++c) s[a * r + c] = P[d][c * r + a];  // P_{-d} = P_d^T
            for (int m = std::max(0, i - n); m < j; ++m) sub_xyt(s, row[i - m], rj[j - m]);
            // X L_jj^T = s, forward substitution row by row
            const auto& ljj = rj[0];
            Block<S>& x = row[d];
            for (int a = 0; a < r; ++a)
                for (int c = 0; c < r; ++c) {
                    S v = s[a * r + c];
                    for (int e = 0; e < c; ++e) v -= ljj[c * r + e] * x[a * r + e];
                    x[a * r + c] = v / ljj[c * r + c];
                }
        }
        Block<S> s = P[0];
        for (int d = 1; d <= w; ++d) sub_xyt(s, row[d], row[d]);
        S scale = 0;
        for (const S& v : s) scale = std::max(scale, s_abs(v));
        const S tol = static_cast<S>(1e-13) * scale;
        Block<S>& l = row[0];
        for (int c = 0; c < r; ++c) {
            S v = s[c * r + c];
            for (int e = 0; e < c; ++e) v -= l[c * r + e] * l[c * r + e];
            if (!(v > tol)) throw_not_pd(i, s);
            l[c * r + c] = s_sqrt(v);
            for (int a = c + 1; a < r; ++a) {
                S u = s[a * r + c];
                for (int e = 0; e < c; ++e) u -= l[a * r + e] * l[c * r + e];
                l[a * r + c] = u / l[c * r + c];
            }
        }
        ring.push_back(row);
        if (static_cast<int>(ring.size()) > n) ring.pop_front();
        current = std::move(row);
        ++count;
    }

    [[noreturn]] void throw_not_pd(int i, const Block<S>& s) const {
        Mat m(r, r);
        for (int a = 0; a < r; ++a)
            for (int c = 0; c < r; ++c) m(a, c) = static_cast<double>(s[a * r + c]);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
        throw NotPositiveDefinite(i, es.eigenvalues().minCoeff());
    }

    Mat to_mat(const Block<S>& b) const {
        Mat m(r, r);
        for (int a = 0; a < r; ++a)
            for (int c = 0; c < r; ++c) m(a, c) = static_cast<double>(b[a * r + c]);
        return m;
    }
};

struct CoreVariant {
    virtual ~CoreVariant() = default;
    virtual void advance() = 0;
    virtual int size() const = 0;
    virtual BlockRow last_row() const = 0;
};

template <class S>
struct CoreHolder final : CoreVariant {
    Core<S> core;
    explicit CoreHolder(const ProductFilter& p) : core(p) {}
    void advance() override { core.advance(); }
    int size() const override { return core.count; }
    BlockRow last_row() const override {
        BlockRow out;
        for (const auto& b : core.current) out.push_back(core.to_mat(b));
        return out;
    }
};

}  // namespace

struct BauerRecursion::Impl {
    int r, n;
    std::unique_ptr<CoreVariant> core;
};

BauerRecursion::BauerRecursion(const ProductFilter& p, Precision prec) : impl_(std::make_unique<Impl>()) {
    impl_->r = p.r;
    impl_->n = p.degree();
    switch (prec) {
        case Precision::Double: impl_->core = std::make_unique<CoreHolder<double>>(p); break;
        case Precision::Extended: impl_->core = std::make_unique<CoreHolder<long double>>(p); break;
        case Precision::Quad: impl_->core = std::make_unique<CoreHolder<__float128>>(p); break;
    }
}

BauerRecursion::~BauerRecursion() = default;
BauerRecursion::BauerRecursion(BauerRecursion&&) noexcept = default;
BauerRecursion& BauerRecursion::operator=(BauerRecursion&&) noexcept = default;

void BauerRecursion::advance() { impl_->core->advance(); }
int BauerRecursion::size() const { return impl_->core->size(); }
BlockRow BauerRecursion::last_row() const { return impl_->core->last_row(); }

CausalFilter BauerRecursion::taps() const {
    const BlockRow row = last_row();
    std::vector<Mat> t(impl_->n + 1, Mat::Zero(impl_->r, impl_->r));
    for (int k = 0; k < static_cast<int>(row.size()); ++k) t[k] = row[k];
    return CausalFilter(impl_->r, std::move(t));
}

std::vector<BlockRow> cholesky_banded(const ProductFilter& p, int f, Precision prec) {
    BauerRecursion rec(p, prec);
    std::vector<BlockRow> rows;
    for (int i = 0; i < f; ++i) {
        rec.advance();
        rows.push_back(rec.last_row());
    }
    return rows;
}

Mat SpectralFactor::flat() const {
    const int r = taps.r;
    Mat out(r, r * static_cast<int>(taps.taps.size()));
    for (int k = 0; k < static_cast<int>(taps.taps.size()); ++k) out.block(0, k * r, r, r) = taps.taps[k];
    return out;
}

double residual(const ProductFilter& p, const CausalFilter& taps) {
    if (p.r != taps.r) throw ShapeError("residual: multiplicity mismatch");
    const ProductFilter q = product_filter(taps);
    const int deg = std::max(p.degree(), q.degree());
    double worst = 0.0;
    for (int k = 0; k <= deg; ++k) worst = std::max(worst, (p.coeff(k) - q.coeff(k)).cwiseAbs().maxCoeff());
    return worst;
}

SpectralFactor spectral_factor(const ProductFilter& p, int f, Precision prec) {
    if (f < p.degree() + 1) throw std::invalid_argument("spectral_factor: f must be at least n+1");
    BauerRecursion rec(p, prec);
    for (int i = 0; i < f; ++i) rec.advance();
    SpectralFactor s;
    s.f = f;
    s.taps = rec.taps();
    s.residual = residual(p, s.taps);
    return s;
}

void sweep_all(const ProductFilter& p, int f_max, Precision prec,
               const std::function<void(int, const CausalFilter&)>& visit) {
    BauerRecursion rec(p, prec);
    for (int f = 1; f <= f_max; ++f) {
        rec.advance();
        visit(f, rec.taps());
    }
}

std::vector<SweepRecord> sweep(const ProductFilter& p, const std::vector<int>& f_values, Precision prec) {
    std::vector<SweepRecord> out(f_values.size());
    if (f_values.empty()) return out;
    std::vector<size_t> order(f_values.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return f_values[a] < f_values[b]; });
    BauerRecursion rec(p, prec);
    std::string failure;
    for (size_t idx : order) {
        const int f = f_values[idx];
        SweepRecord& rcd = out[idx];
        rcd.f = f;
        if (f < p.degree() + 1) {
            rcd.error = "f must be at least n+1";
            continue;
        }
        try {
            while (failure.empty() && rec.size() < f) rec.advance();
        } catch (const NumericError& e) {
            failure = e.what();
        }
        if (!failure.empty()) {
            rcd.error = failure;
            continue;
        }
        rcd.ok = true;
        rcd.factor.f = f;
        rcd.factor.taps = rec.taps();
        rcd.factor.residual = residual(p, rcd.factor.taps);
    }
    return out;
}

Mat toeplitz_dense(const ProductFilter& p, int f) {
    const int r = p.r;
    Mat t = Mat::Zero(r * f, r * f);
    for (int i = 0; i < f; ++i)
        for (int j = std::max(0, i - p.degree()); j <= std::min(f - 1, i + p.degree()); ++j)
            t.block(i * r, j * r, r, r) = p.coeff(j - i);
    return t;
}

std::vector<double> toeplitz_singular_values(const ProductFilter& p, int f) {
    if (f < 1 || p.r * f > 4096) throw std::invalid_argument("toeplitz_singular_values: size guard r*f <= 4096");
    Eigen::JacobiSVD<Mat> svd(toeplitz_dense(p, f));
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

}  // namespace mwf
