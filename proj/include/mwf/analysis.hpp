#pragma once

#include <complex>
#include <vector>

#include "mwf/filters.hpp"

namespace mwf {

struct CodingGain {
    double ratio = 1.0;
    double db = 0.0;
    std::vector<double> variances;  // lowpass channels first, then highpass
};

// One analysis level, 2r scalar channels. Channel c of tap set X has impulse
// response a[r k + j] = X_k(c, j); variance a^T R a with R_jk = rho^|j-k|.
CodingGain coding_gain(const FilterBank& b, double rho = 0.95);

struct SobolevEstimate {
    double s = 0.0;
    double rho = 0.0;  // spectral radius on the excited part
    int p = 0;         // order of the (1 - cos w)^p start factor
    std::vector<std::complex<double>> eigenvalues;
    std::vector<bool> excited;
};

// Transition operator (T A)_j = sum_{k,l} C_k A_{2j-k+l} C_l^T on the window |m| <= M,
// M = max(n-1, p), p = approximation order (at least 1). The start vector
// (1 - cos w)^p I is expanded in T's eigenbasis through left eigenvectors; rho is
// the largest |lambda| whose mode is excited, and S = -log2(rho) / 2.
SobolevEstimate sobolev(const FilterBank& b);

// The three GMP(1,1,1) mask conditions, evaluated on the taps as given.
struct GmpResiduals {
    double lowpass_dc, lowpass_pi, highpass_dc;
};
GmpResiduals gmp_residuals(const FilterBank& b);
// r = 2 banks are tested in Haar-balanced form (conjugated by haar_prefilter()),
// other r on the taps as given.
bool gmp_order_111(const FilterBank& b, double tol = 1e-8);

// Sum-rule system on D^l H(0), D^l H(pi): largest p <= p_max whose homogeneous
// system admits u_0 != 0 (tol relative to the largest singular value).
int approximation_order(const FilterBank& b, int p_max = 6, double tol = 1e-8);

// sqrt2 L^T u_k = 2^-k u_k on a finite section, checked away from the edges.
int balance_order(const FilterBank& b, int q_max = 3, double tol = 1e-8);

// Orthogonality error of the balanced lowpass: I - Q H H^T Q^T, H = [C_0 ... C_n].
Mat balanced_orthogonality_defect(const CausalFilter& low, const Mat& q);

struct FrequencyRow {
    double omega;
    Mat h;  // entrywise |H(e^{i omega})|
    Mat g;  // entrywise |G(e^{i omega})|, empty without highpass
};
// Masks (1/sqrt2) sum_k C_k e^{i k omega} on omega_j = pi j / (grid - 1).
std::vector<FrequencyRow> frequency_response(const FilterBank& b, int grid);

struct SymmetryInfo {
    bool symmetric = false;
    std::vector<int> centers;  // e_a: component a symmetric about e_a / 2
    std::vector<int> signs;    // +1 symmetric, -1 antisymmetric
};
// Searches e_a in {0..n}, s_a = +-1 with C_m(a,b) = s_a s_b C_{2 e_a - e_b - m}(a,b).
SymmetryInfo symmetry(const FilterBank& b);
bool symmetry_class(const FilterBank& b);

struct MetricsReport {
    CodingGain coding_gain;
    SobolevEstimate sobolev;
    bool gmp_111 = false;
    int approx_order = 0;
    int balance_order = 0;
    bool symmetric = false;
};
MetricsReport metrics(const FilterBank& b, double rho = 0.95);

}  // namespace mwf
