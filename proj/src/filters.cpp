#include "mwf/filters.hpp"

#include <cmath>
#include <json.hpp>

#include "mwf/errors.hpp"

namespace mwf {

using json = nlohmann::json;

namespace {

Mat m2(double a, double b, double c, double d) {
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

std::vector<Mat> scaled(std::vector<Mat> v, double s) {
    for (auto& m : v) m *= s;
    return v;
}

// max |sum_k A_k B_{k+2l}^T - delta_{0l} c I| over all l
double shift_defect(const std::vector<Mat>& a, const std::vector<Mat>& b, bool identity) {
    const int n = static_cast<int>(a.size());
    const int r = static_cast<int>(a[0].rows());
    double worst = 0.0;
    for (int l = -(n / 2 + 1); l <= n / 2 + 1; ++l) {
        Mat s = Mat::Zero(r, r);
        for (int k = 0; k < n; ++k) {
            const int m = k + 2 * l;
            if (m >= 0 && m < n) s.noalias() += a[k] * b[m].transpose();
        }
        if (identity && l == 0) s -= Mat::Identity(r, r);
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
    }
    return worst;
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const json& j, int r) {
    if (!j.is_array() || static_cast<int>(j.size()) != r) throw ShapeError("matrix must have " + std::to_string(r) + " rows");
    Mat m(r, r);
    for (int i = 0; i < r; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != r)
            throw ShapeError("matrix row " + std::to_string(i) + " must have " + std::to_string(r) + " entries");
        for (int k = 0; k < r; ++k) {
            if (!row[k].is_number()) throw ShapeError("matrix entry is not a number");
            m(i, k) = row[k].get<double>();
        }
    }
    return m;
}

std::vector<Mat> taps_from_json(const json& j, int r) {
    if (!j.is_array() || j.empty()) throw ShapeError("tap list must be a non-empty array");
    std::vector<Mat> out;
    for (const auto& t : j) out.push_back(mat_from_json(t, r));
    return out;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ShapeError(std::string("malformed document: ") + e.what());
    }
}

}  // namespace

void FilterBank::validate() const {
    if (lowpass.r != r) throw ShapeError("bank: lowpass multiplicity differs from r");
    if (highpass) {
        if (highpass->r != r) throw ShapeError("bank: highpass multiplicity differs from r");
        if (highpass->taps.size() != lowpass.taps.size()) throw ShapeError("bank: highpass tap count differs");
    }
}

FilterBank sa4_family(double t) {
    if (t == 0.0 || !std::isfinite(t)) throw std::invalid_argument("sa4_family: t must be finite and nonzero");
    const double a = 1.0 / (std::sqrt(2.0) * (1.0 + t * t));
    const double t2 = t * t;
    std::vector<Mat> c = {m2(1, t, 1, -t), m2(t2, t, -t2, t), m2(t2, -t, t2, t), m2(1, -t, -1, -t)};
    std::vector<Mat> d = {m2(-t, 1, -t, -1), m2(t, -t2, -t, -t2), m2(t, t2, t, -t2), m2(-t, -1, t, -1)};
    FilterBank b;
    b.name = "sa4";
    b.r = 2;
    b.lowpass = CausalFilter(2, scaled(c, a));
    b.highpass = CausalFilter(2, scaled(d, a));
    return b;
}

FilterBank builtin(const std::string& name) {
    const double s2 = std::sqrt(2.0);
    FilterBank b;
    b.name = name;
    if (name == "sa4") return sa4_family(4.0 + std::sqrt(15.0));
    if (name == "haar-scalar") {
        b.r = 1;
        Mat h(1, 1);
        h << 1.0 / s2;
        b.lowpass = CausalFilter(1, {h, h});
        b.highpass = CausalFilter(1, {h, Mat(-h)});
        return b;
    }
    if (name == "ghm") {
        // H normalization with sum H_k having eigenvalue 2; taps are H_k / sqrt2
        const double u = 1.0 / (10.0 * s2);
        std::vector<Mat> h = {m2(0.6, 0.8 * s2, -u, -0.3), m2(0.6, 0, 9 * u, 1), m2(0, 0, 9 * u, -0.3),
                              m2(0, 0, -u, 0)};
        std::vector<Mat> g = {m2(-u, -0.3, 0.1, 0.3 * s2), m2(9 * u, -1, -0.9, 0), m2(9 * u, -0.3, 0.9, -0.3 * s2),
                              m2(-u, 0, -0.1, 0)};
        b.r = 2;
        b.lowpass = CausalFilter(2, scaled(h, 1.0 / s2));
        b.highpass = CausalFilter(2, scaled(g, 1.0 / s2));
        return b;
    }
    if (name == "cl") {
        const double q = std::sqrt(7.0) / 4.0;
        std::vector<Mat> h = {m2(0.5, -0.5, q, -q), m2(1, 0, 0, 0.5), m2(0.5, 0.5, -q, -q)};
        std::vector<Mat> g = {m2(0.5, -0.5, 0.25, -0.25), m2(-1, 0, 0, -2 * q), m2(0.5, 0.5, -0.25, -0.25)};
        b.r = 2;
        b.lowpass = CausalFilter(2, scaled(h, 1.0 / s2));
        b.highpass = CausalFilter(2, scaled(g, 1.0 / s2));
        return b;
    }
    throw std::invalid_argument("unknown bank name: " + name);
}

double orthogonality_defect(const FilterBank& b) {
    b.validate();
    double d = shift_defect(b.lowpass.taps, b.lowpass.taps, true);
    if (b.highpass) {
        d = std::max(d, shift_defect(b.highpass->taps, b.highpass->taps, true));
        d = std::max(d, shift_defect(b.lowpass.taps, b.highpass->taps, false));
    }
    return d;
}

bool is_orthogonal(const FilterBank& b, double tol) { return orthogonality_defect(b) <= tol; }

Mat haar_prefilter() { return m2(1, 1, -1, 1) / std::sqrt(2.0); }

FilterBank conjugate(const FilterBank& b, const Mat& q) {
    if (q.rows() != b.r || q.cols() != b.r) throw ShapeError("conjugate: prefilter size differs from r");
    FilterBank out = b;
    for (auto& c : out.lowpass.taps) c = q.transpose() * c * q;
    if (out.highpass)
        for (auto& d : out.highpass->taps) d = q.transpose() * d * q;
    return out;
}

std::string serialize(const FilterBank& b) {
    b.validate();
    json doc;
    doc["kind"] = "filterbank";
    doc["name"] = b.name;
    doc["multiplicity"] = b.r;
    doc["lowpass"] = json::array();
    for (const auto& c : b.lowpass.taps) doc["lowpass"].push_back(mat_to_json(c));
    if (b.highpass) {
        doc["highpass"] = json::array();
        for (const auto& d : b.highpass->taps) doc["highpass"].push_back(mat_to_json(d));
    }
    return doc.dump(2) + "\n";
}

FilterBank deserialize_bank(const std::string& text) {
    const json doc = parse(text);
    if (!doc.is_object() || !doc.contains("multiplicity") || !doc.contains("lowpass"))
        throw ShapeError("filter-bank document needs multiplicity and lowpass");
    if (!doc["multiplicity"].is_number_integer() || doc["multiplicity"].get<int>() < 1)
        throw ShapeError("multiplicity must be a positive integer");
    FilterBank b;
    b.r = doc["multiplicity"].get<int>();
    b.name = doc.value("name", std::string("unnamed"));
    b.lowpass = CausalFilter(b.r, taps_from_json(doc["lowpass"], b.r));
    if (doc.contains("highpass") && !doc["highpass"].is_null())
        b.highpass = CausalFilter(b.r, taps_from_json(doc["highpass"], b.r));
    b.validate();
    return b;
}

std::string serialize(const ProductFilter& p) {
    json doc;
    doc["kind"] = "product";
    doc["multiplicity"] = p.r;
    doc["half"] = json::array();
    for (const auto& m : p.half) doc["half"].push_back(mat_to_json(m));
    return doc.dump(2) + "\n";
}

ProductFilter deserialize_product(const std::string& text) {
    const json doc = parse(text);
    if (!doc.is_object() || !doc.contains("multiplicity") || !doc.contains("half"))
        throw ShapeError("product document needs multiplicity and half");
    if (!doc["multiplicity"].is_number_integer() || doc["multiplicity"].get<int>() < 1)
        throw ShapeError("multiplicity must be a positive integer");
    const int r = doc["multiplicity"].get<int>();
    return ProductFilter(r, taps_from_json(doc["half"], r));
}

}  // namespace mwf
