#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mwf/errors.hpp"
#include "mwf/lpoly.hpp"

namespace mwf {

// Arithmetic used inside the block recursion. Inputs and outputs are double.
enum class Precision { Double, Extended, Quad };

Precision parse_precision(const std::string& s);
std::string to_string(Precision p);

struct NotPositiveDefinite : NumericError {
    int row;         // failing block row (0-based)
    double min_eig;  // smallest eigenvalue of the offending Schur block
    NotPositiveDefinite(int row_, double min_eig_);
};

// Block row i of L holds L_{i,i-d}, d = 0..min(i, n).
using BlockRow = std::vector<Mat>;

// Forward banded block Cholesky of T^(f), T_ij = P_{j-i}. T^(f) is the leading
// principal part of T^(f+1), so one pass yields the factor for every f.
// Only the trailing n+1 block rows are retained.
class BauerRecursion {
public:
    explicit BauerRecursion(const ProductFilter& p, Precision prec = Precision::Quad);
    ~BauerRecursion();
    BauerRecursion(BauerRecursion&&) noexcept;
    BauerRecursion& operator=(BauerRecursion&&) noexcept;

    void advance();   // factors the next block row; throws NotPositiveDefinite
    int size() const;  // block rows factored so far
    BlockRow last_row() const;
    // C_k^(f) = L_{f-1, f-1-k}, k = 0..n (zero where f-1-k < 0)
    CausalFilter taps() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// All block rows for a small f (test and diagnostic use).
std::vector<BlockRow> cholesky_banded(const ProductFilter& p, int f, Precision prec = Precision::Quad);

struct SpectralFactor {
    int f = 0;
    CausalFilter taps;
    double residual = 0.0;

    // r x r(n+1) block [C_0 | C_1 | ... | C_n]
    Mat flat() const;
};

double residual(const ProductFilter& p, const CausalFilter& taps);
SpectralFactor spectral_factor(const ProductFilter& p, int f, Precision prec = Precision::Quad);

struct SweepRecord {
    int f = 0;
    bool ok = false;
    std::string error;
    SpectralFactor factor;
};

// Results in input order; each entry equals an independent spectral_factor call.
std::vector<SweepRecord> sweep(const ProductFilter& p, const std::vector<int>& f_values,
                               Precision prec = Precision::Quad);
// Streaming form: visits every f in 1..f_max in increasing order.
void sweep_all(const ProductFilter& p, int f_max, Precision prec,
               const std::function<void(int, const CausalFilter&)>& visit);

Mat toeplitz_dense(const ProductFilter& p, int f);
// Descending; guarded to r*f <= 4096.
std::vector<double> toeplitz_singular_values(const ProductFilter& p, int f);

}  // namespace mwf
