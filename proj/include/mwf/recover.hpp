#pragma once

#include <optional>
#include <vector>

#include "mwf/bauer.hpp"
#include "mwf/filters.hpp"

namespace mwf {

// MAE = max-abs entry error, MSE = mean of squared entry errors.
struct ErrorReport {
    double mae_mf = 0, mse_mf = 0;
    double mae_mwf = 0, mse_mwf = 0;
    bool has_highpass = false;
    std::vector<double> mae_mc, mse_mc;  // per lowpass tap
    std::vector<double> mae_wc, mse_wc;  // per highpass tap
};

ErrorReport error_report(const FilterBank& recovered, const FilterBank& reference);

enum class Method { Approximate, ExactRotated, ExactAveraged };
const char* to_string(Method m);

struct RecoveryResult {
    Method method = Method::Approximate;
    FilterBank bank;  // lowpass recovered plus a completed highpass
    std::optional<double> theta;
    int f = 0;
};

// Averaged magnitudes of the flattened factor, named by their column pairs.
struct AveragedMagnitudes {
    double m06, m17, m24, m35;
};
AveragedMagnitudes averaged_magnitudes(const Mat& flat);

// Highpass from the alternating flip D_k = (-1)^k C_{n-k} J, J = [[0, 1], [1, 0]].
RecoveryResult recover_approximate(const SpectralFactor& s);

struct ExactRecovery {
    double even = 0, odd = 0, theta = 0;
    RecoveryResult rotated;   // H^(2)
    RecoveryResult averaged;  // H^(3)
};
// Throws NumericError when 2 sqrt2 even or 2 sqrt2 odd leaves [-1, 1].
ExactRecovery recover_exact(const SpectralFactor& s);

// Highpass completing a 2-tap-pair lowpass (odd degree n) to an orthogonal bank.
// Rows of [D_0 ... D_n] span the orthogonal complement of all even shifts of
// [C_0 ... C_n]; the basis comes from a Householder QR of the shift rows.
// For r = 2 the basis is rotated so the first highpass row has zero tap sum,
// and each row is signed so that (D_0)_{i0} <= 0.
// Throws NumericError when the shift rows are rank deficient (complement not unique).
CausalFilter complete_qr(const CausalFilter& lowpass);

// D_k = (-1)^k C_{n-k} J for r = 2. Equals complete_qr on an orthogonal SA4 lowpass.
CausalFilter alternating_flip(const CausalFilter& lowpass);

}  // namespace mwf
