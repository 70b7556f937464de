#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mwf {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Laurent polynomial with r x r real coefficients. coeffs[j] multiplies z^(kmin + j).
struct MatrixLaurent {
    int r = 1;
    int kmin = 0;
    std::vector<Mat> coeffs;

    MatrixLaurent() = default;
    MatrixLaurent(int r_, int kmin_, std::vector<Mat> c);

    int kmax() const { return kmin + static_cast<int>(coeffs.size()) - 1; }
    Mat coeff(int k) const;  // zero outside [kmin, kmax]

    static MatrixLaurent constant(const Mat& a);
};

MatrixLaurent adjoint(const MatrixLaurent& a);
MatrixLaurent multiply(const MatrixLaurent& a, const MatrixLaurent& b);
MatrixLaurent add(const MatrixLaurent& a, const MatrixLaurent& b);
// Drops leading/trailing coefficients whose entries are all <= tol in magnitude.
// The zero polynomial trims to a single zero coefficient at degree 0.
MatrixLaurent trim(const MatrixLaurent& a, double tol = 0.0);
bool approx_equal(const MatrixLaurent& a, const MatrixLaurent& b, double tol = 1e-12);
// sum_k A_k e^{i k omega}
CMat evaluate(const MatrixLaurent& a, double omega);

// H(z) = C_0 + C_1 z^-1 + ... + C_n z^-n
struct CausalFilter {
    int r = 1;
    std::vector<Mat> taps;

    CausalFilter() = default;
    CausalFilter(int r_, std::vector<Mat> t);

    int degree() const { return static_cast<int>(taps.size()) - 1; }
    MatrixLaurent laurent() const;
};

// Nonnegative half P_0..P_n of P(z) = H(z) H*(z); P_{-k} = P_k^T.
struct ProductFilter {
    int r = 1;
    std::vector<Mat> half;

    ProductFilter() = default;
    ProductFilter(int r_, std::vector<Mat> h);

    int degree() const { return static_cast<int>(half.size()) - 1; }
    Mat coeff(int k) const;
    MatrixLaurent laurent() const;
};

ProductFilter product_filter(const CausalFilter& h);
bool is_halfband(const ProductFilter& p, double tol = 1e-12);

}  // namespace mwf
