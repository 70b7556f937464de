#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "mwf/io.hpp"
#include "mwf/mwt.hpp"
#include "tables.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Tmp {
    fs::path dir;
    Tmp() {
        dir = fs::temp_directory_path() / ("mwf_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Tmp() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

const Tmp& tmp() {
    static Tmp t;
    return t;
}

int run(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
    const std::string o = tmp()("stdout.txt"), e = tmp()("stderr.txt");
    const std::string cmd = std::string(MWF_CLI_PATH) + " " + args + " >" + o + " 2>" + e;
    const int status = std::system(cmd.c_str());
    if (out) *out = mwf::read_text_file(o);
    if (err) *err = mwf::read_text_file(e);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<mwf::Mat> taps_of(const json& arr) {
    std::vector<mwf::Mat> out;
    for (const auto& m : arr) {
        mwf::Mat x(m.size(), m[0].size());
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = 0; j < m[i].size(); ++j) x(i, j) = m[i][j].get<double>();
        out.push_back(x);
    }
    return out;
}

json load(const std::string& path) { return json::parse(mwf::read_text_file(path)); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

void setup_sa4() {
    static bool done = false;
    if (done) return;
    REQUIRE(run("gen --family sa4 --t 7.872983346207417 -o " + tmp()("sa4.json")) == 0);
    REQUIRE(run("product --bank " + tmp()("sa4.json") + " -o " + tmp()("p.json")) == 0);
    done = true;
}

}  // namespace

TEST_CASE("gen") {
    setup_sa4();
    const json b = load(tmp()("sa4.json"));
    CHECK(b["multiplicity"] == 2);
    CHECK(tables::max_diff(taps_of(b["lowpass"]), tables::sa4_c()) < 1e-15);
    CHECK(tables::max_diff(taps_of(b["highpass"]), tables::sa4_d()) < 1e-15);
    std::string out;
    CHECK(run("gen --name haar-scalar", &out) == 0);
    CHECK(json::parse(out)["lowpass"].size() == 2);
    CHECK(run("gen --family sa4 --t 0") == 1);
    CHECK(run("gen --name nope") == 1);
    CHECK(run("gen") == 1);
    CHECK(run("frobnicate") == 1);
}

TEST_CASE("product") {
    setup_sa4();
    const auto p = taps_of(load(tmp()("p.json"))["half"]);
    CHECK(tables::max_diff(p, tables::product_p()) < 1e-12);
    mwf::write_text_file(tmp()("id.json"), R"({"multiplicity": 2, "lowpass": [[[1, 0], [0, 1]]]})");
    std::string out;
    CHECK(run("product --bank " + tmp()("id.json"), &out) == 0);
    const auto q = taps_of(json::parse(out)["half"]);
    CHECK(q.size() == 1);
    CHECK(q[0] == mwf::Mat::Identity(2, 2));
    mwf::write_text_file(tmp()("bad.json"), R"({"multiplicity": 2, "lowpass": [[[1, 0, 0], [0, 1, 0]]]})");
    std::string err;
    CHECK(run("product --bank " + tmp()("bad.json"), nullptr, &err) == 1);
    CHECK(err.find("shape") != std::string::npos);
    CHECK(run("product --bank " + tmp()("missing.json")) == 3);
}

TEST_CASE("factorize") {
    setup_sa4();
    std::string err;
    CHECK(run("factorize --product " + tmp()("p.json") + " --size 81 --report-residual -o " + tmp()("f81.json"), nullptr,
              &err) == 0);
    CHECK(tables::max_diff(taps_of(load(tmp()("f81.json"))["lowpass"]), tables::factor81()) < 1e-6);
    CHECK(json::parse(err)["residual"].get<double>() > 0);
    std::string out;
    CHECK(run("factorize --product " + tmp()("p.json") + " --size 20 --singular-values", &out) == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 41);
    CHECK(std::abs(std::stod(rows[20][1]) - 1.0) < 1e-8);
    CHECK(std::abs(std::stod(rows[21][1]) - 1.0) < 1e-8);
    mwf::write_text_file(tmp()("indef.json"),
                         R"({"kind": "product", "multiplicity": 2, "half": [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]})");
    CHECK(run("factorize --product " + tmp()("indef.json") + " --size 2", nullptr, &err) == 2);
    CHECK(err.find("block row 1") != std::string::npos);
    CHECK(run("factorize --product " + tmp()("p.json") + " --size 81 --precision half") == 1);
}

TEST_CASE("sweep") {
    setup_sa4();
    std::string out;
    CHECK(run("sweep --product " + tmp()("p.json") + " --sizes 10..100 --recover approx --reference " + tmp()("sa4.json"),
              &out) == 0);
    auto rows = csv_rows(out);
    REQUIRE(rows.size() == 92);
    CHECK(rows[0][0] == "f");
    int best = 0;
    double best_mae = 1e9;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double m = std::stod(rows[i][2]);
        if (m < best_mae) {
            best_mae = m;
            best = std::stoi(rows[i][0]);
        }
    }
    CHECK(best == 21);
    CHECK(std::abs(best_mae - 4.2797e-3) < 1e-6);
    CHECK(run("sweep --product " + tmp()("p.json") + " --sizes \"\"", &out) == 0);
    CHECK(out == "f,residual,mae_mf,mse_mf,mae_mwf,mse_mwf,theta,error\n");
    CHECK(run("sweep --product " + tmp()("p.json") + " --sizes 1,x") == 1);
    CHECK(run("sweep --product " + tmp()("p.json") + " --sizes 2,500:100", &out) == 1);
    CHECK(run("sweep --product " + tmp()("p.json") + " --sizes 100..300:100 --recover exact", &out) == 0);
    rows = csv_rows(out);
    REQUIRE(rows.size() == 4);
    CHECK(std::abs(std::stod(rows[3][6]) - 1.4446) < 1e-2);
}

TEST_CASE("recover") {
    setup_sa4();
    CHECK(run("recover --product " + tmp()("p.json") + " --size 21 --method approx -o " + tmp()("a21.json") +
              " --report " + tmp()("a21r.json") + " --reference " + tmp()("sa4.json")) == 0);
    const json a = load(tmp()("a21.json"));
    CHECK(tables::max_diff(taps_of(a["lowpass"]), tables::approx21_c()) < 1e-10);
    CHECK(tables::max_diff(taps_of(a["highpass"]), tables::approx21_d()) < 1e-10);
    const json ar = load(tmp()("a21r.json"));
    CHECK(std::abs(ar["errors"]["mae_mf"].get<double>() - 4.2797e-3) < 1e-6);

    CHECK(run("recover --product " + tmp()("p.json") + " --size 12042 --method exact -o " + tmp()("e.json") +
              " --report " + tmp()("er.json")) == 0);
    const json er = load(tmp()("er.json"));
    CHECK(std::abs(er["theta"].get<double>() - tables::exact12042_theta) < 1e-5);
    CHECK(tables::max_diff(taps_of(load(tmp()("e.json"))["lowpass"]), tables::exact12042_c()) < 1e-7);

    // a GHM product does not have the SA4 shape that exact recovery assumes
    CHECK(run("product --bank ghm -o " + tmp()("pg.json")) == 0);
    std::string err;
    const int rc = run("recover --product " + tmp()("pg.json") + " --size 30 --method exact", nullptr, &err);
    CHECK(rc == 2);
    CHECK(err.find("out of range") != std::string::npos);
}

TEST_CASE("analyze") {
    std::string out;
    CHECK(run("analyze --bank ghm --metrics cg,sobolev,gmp,order", &out) == 0);
    json r = json::parse(out);
    CHECK(std::abs(r["cg"]["db"].get<double>() - 4.41) < 0.1);
    CHECK(std::abs(r["sobolev"]["s"].get<double>() - 1.5) < 0.05);
    CHECK(r["gmp"]["gmp_111"] == false);
    CHECK(r["approximation_order"] == 2);
    CHECK(run("analyze --bank sa4 --metrics cg,sobolev,gmp,freq,symmetry,balance,defect --grid 9", &out) == 0);
    r = json::parse(out);
    CHECK(std::abs(r["cg"]["db"].get<double>() - 3.73) < 0.1);
    CHECK(std::abs(r["sobolev"]["s"].get<double>() - 0.99) < 0.05);
    CHECK(r["gmp"]["gmp_111"] == true);
    CHECK(r["frequency_response"].size() == 9);
    CHECK(r["symmetry"]["symmetric"] == true);
    CHECK(run("analyze --bank sa4 --metrics cg,bogus") == 1);
}

TEST_CASE("transform and denoise") {
    const mwf::Vec cusp = mwf::test_signal("cusp", 128);
    mwf::write_signal_csv(tmp()("cusp128.csv"), cusp);
    std::string out;
    CHECK(run("transform --input " + tmp()("cusp128.csv") + " --bank sa4-approx --levels 6 --balanced", &out) == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 7);
    for (size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) > std::stod(rows[i - 1][1]));
    CHECK(run("transform --input " + tmp()("cusp128.csv") + " --bank sa4 --levels 3 --balanced", &out) == 0);
    for (size_t i = 1; i < csv_rows(out).size(); ++i) CHECK(std::stod(csv_rows(out)[i][1]) < 1e-12);

    mwf::write_pgm(tmp()("synth.pgm"), mwf::synthetic_image(256, 256, 1));
    CHECK(run("transform --input " + tmp()("synth.pgm") + " --levels 0 -o " + tmp()("same.pgm")) == 0);
    CHECK(mwf::read_text_file(tmp()("same.pgm")) == mwf::read_text_file(tmp()("synth.pgm")));
    CHECK(run("transform --input " + tmp()("synth.pgm") + " --levels 2 --balanced -o " + tmp()("rt.pgm")) == 0);
    CHECK(mwf::read_pgm(tmp()("rt.pgm")) == mwf::read_pgm(tmp()("synth.pgm")));

    CHECK(run("denoise --input " + tmp()("synth.pgm") +
              " --sigma 10 --seed 1 --levels 3 --bank sa4-exact --balanced -o " + tmp()("den.pgm") + " --report " +
              tmp()("den.json")) == 0);
    const json r = load(tmp()("den.json"));
    CHECK(r["seed"] == 1);
    CHECK(r["psnr_denoised"].get<double>() > r["psnr_noisy"].get<double>() + 1.0);
    // deterministic reports
    CHECK(run("denoise --input " + tmp()("synth.pgm") +
              " --sigma 10 --seed 1 --levels 3 --bank sa4-exact --balanced -o " + tmp()("den2.pgm") + " --report " +
              tmp()("den2.json")) == 0);
    CHECK(mwf::read_text_file(tmp()("den.json")) == mwf::read_text_file(tmp()("den2.json")));
    CHECK(mwf::read_text_file(tmp()("den.pgm")) == mwf::read_text_file(tmp()("den2.pgm")));
    CHECK(run("denoise --input " + tmp()("nothere.pgm") + " -o " + tmp()("x.pgm")) == 3);
}

TEST_CASE("golden comparison") {
    setup_sa4();
    CHECK(run("product --bank sa4 --compare " + tmp()("p.json")) == 0);
    mwf::write_text_file(tmp()("gold.json"),
                         R"({"kind": "product", "multiplicity": 2, "half": [[[1, 0], [0, 1]], [[0.5, 0.5], [-0.5, -0.5]],
                         [[0, 0], [0, 0]], [[0, 0], [0, 0]]]})");
    CHECK(run("product --bank sa4 --compare " + tmp()("gold.json") + " --tol 1e-3") == 2);
    CHECK(run("product --bank sa4 --compare " + tmp()("gold.json") + " --tol 0.1") == 0);
}

TEST_CASE("pipeline through files") {
    setup_sa4();
    CHECK(run("recover --product " + tmp()("p.json") + " --size 12042 --method exact -o " + tmp()("ex.json") +
              " --report " + tmp()("exr.json")) == 0);
    std::string out;
    CHECK(run("analyze --bank " + tmp()("ex.json") + " --metrics cg,sobolev,gmp --metric-tol 1e-6", &out) == 0);
    const json r = json::parse(out);
    CHECK(std::abs(r["cg"]["db"].get<double>() - 3.73) < 0.1);
    CHECK(std::abs(r["sobolev"]["s"].get<double>() - 0.99) < 0.05);
    CHECK(r["gmp"]["gmp_111"] == true);
}
