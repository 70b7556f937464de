#include "mwf/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mwf/errors.hpp"

namespace mwf {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

// next header token, skipping whitespace and # comments
std::string token(std::istream& in, const std::string& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw IoError("truncated PGM header: " + path);
    return tok;
}

int to_int(const std::string& s, const std::string& path) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("bad PGM field '" + s + "' in " + path);
    }
}

}  // namespace

Mat read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    const std::string magic = token(in, path);
    if (magic != "P2" && magic != "P5") throw IoError("not a P2/P5 PGM: " + path);
    const int w = to_int(token(in, path), path);
    const int h = to_int(token(in, path), path);
    const int maxval = to_int(token(in, path), path);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) throw IoError("unsupported PGM geometry in " + path);
    Mat img(h, w);
    if (magic == "P5") {
        std::vector<unsigned char> buf(static_cast<size_t>(w) * h);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw IoError("truncated PGM data: " + path);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) img(y, x) = buf[static_cast<size_t>(y) * w + x];
    } else {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int v;
                if (!(in >> v) || v < 0 || v > maxval) throw IoError("bad PGM sample in " + path);
                img(y, x) = v;
            }
    }
    return img;
}

void write_pgm(const std::string& path, const Mat& img, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << (binary ? "P5" : "P2") << "\n" << img.cols() << " " << img.rows() << "\n255\n";
    auto px = [&](Eigen::Index y, Eigen::Index x) {
        return static_cast<int>(std::clamp(std::round(img(y, x)), 0.0, 255.0));
    };
    for (Eigen::Index y = 0; y < img.rows(); ++y) {
        for (Eigen::Index x = 0; x < img.cols(); ++x) {
            if (binary)
                out.put(static_cast<char>(px(y, x)));
            else
                out << px(y, x) << (x + 1 == img.cols() ? "\n" : " ");
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

Eigen::VectorXd read_signal_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        line.erase(0, line.find_first_not_of(" \t\r"));
        if (line.empty() || line[0] == '#') continue;
        const std::string field = line.substr(0, line.find(','));
        try {
            size_t pos = 0;
            v.push_back(std::stod(field, &pos));
        } catch (const std::exception&) {
            if (v.empty()) continue;  // header line
            throw IoError("bad CSV value '" + field + "' in " + path);
        }
    }
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_signal_csv(const std::string& path, const Eigen::VectorXd& x) {
    std::string s;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += fmt(x(i)) + "\n";
    write_text_file(path, s);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace mwf
