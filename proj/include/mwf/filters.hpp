#pragma once

#include <optional>
#include <string>

#include "mwf/lpoly.hpp"

namespace mwf {

struct FilterBank {
    std::string name;
    int r = 1;
    CausalFilter lowpass;
    std::optional<CausalFilter> highpass;

    int tap_count() const { return static_cast<int>(lowpass.taps.size()); }
    // Throws ShapeError unless the highpass (if any) matches r and tap count.
    void validate() const;
};

// SA4 family: 4 taps, r = 2, alpha = 1/(sqrt2 (1 + t^2)).
FilterBank sa4_family(double t);
// "sa4", "ghm", "cl", "haar-scalar"
FilterBank builtin(const std::string& name);

// Largest deviation over the shift-orthogonality sums of the bank
// (lowpass/lowpass, highpass/highpass, lowpass/highpass, all even shifts).
double orthogonality_defect(const FilterBank& b);
bool is_orthogonal(const FilterBank& b, double tol = 1e-12);

// Haar balancing prefilter (1/sqrt2)[[1, 1], [-1, 1]].
Mat haar_prefilter();
// Taps replaced by q^T C_k q (and q^T D_k q): the bank seen through
// prefilter q and postfilter q^T.
FilterBank conjugate(const FilterBank& b, const Mat& q);

// Structured-text documents (JSON). Doubles are written in shortest round-trip form.
std::string serialize(const FilterBank& b);
FilterBank deserialize_bank(const std::string& text);
std::string serialize(const ProductFilter& p);
ProductFilter deserialize_product(const std::string& text);

}  // namespace mwf
