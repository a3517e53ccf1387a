#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kptau/commands.hpp"
#include "kptau/config.hpp"
#include "kptau/model.hpp"

using namespace kptau;

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("kptau_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "kptau");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    std::string out() const { return out_.str(); }
    std::string err() const { return err_.str(); }
    fs::path dir_;

private:
    std::ostringstream out_, err_;
};

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

const char* rational_11 = R"({"family": "rational", "backend": "exact", "n": 1, "k": 1, "C": [[3, 5]]})";

TEST(Config, RoundTripIsLossless) {
    const std::string text = R"({
      "family": "generic-jordan", "backend": "exact", "K": 4,
      "B": [["3/10", 2], [[-1, "2/7"], 1]],
      "D": [[-2, 1], [0.125, 1]],
      "C": [[1, 0.3, "123456789012345678901234567890"], [0, 1, -1e-3]],
      "F": [[1, 0], [[0, 1], 1]],
      "tolerances": {"plucker": 1e-11}
    })";
    const FamilyConfig a = parse_config(text);
    EXPECT_EQ(a.C[0][1], GaussianRational(Rational(3, 10)));
    EXPECT_EQ(a.C[1][2], GaussianRational(Rational(-1, 1000)));
    EXPECT_EQ(a.B[1].eigenvalue, GaussianRational(Rational(-1), Rational(2, 7)));
    EXPECT_FALSE(a.is_real());
    const FamilyConfig b = parse_config(dump_config(a));
    EXPECT_EQ(a, b);
    EXPECT_EQ(dump_config(a), dump_config(b));

    const auto sa = build_system<GaussianRational>(a);
    const auto sb = build_system<GaussianRational>(b);
    EXPECT_EQ((sa.A - sb.A).is_zero(), true);
    EXPECT_EQ((sa.C - sb.C).is_zero(), true);
    EXPECT_EQ((sa.F - sb.F).is_zero(), true);
    EXPECT_EQ(sa.g, sb.g);
    EXPECT_EQ(a.tol("plucker", 1.0), 1e-11);
    EXPECT_EQ(a.tol("hg", 1.0), 1.0);
}

TEST(Config, FloatValuesRoundTripBitExact) {
    const FamilyConfig a = parse_config(R"({"family": "soliton", "betas": [0.1, -0.7, 1e-20], "C": [[1, 2.5, 0.30000000000000004]]})");
    const FamilyConfig b = parse_config(dump_config(a));
    EXPECT_EQ(a, b);
    const auto sa = build_system<Complex>(a);
    const auto sb = build_system<Complex>(b);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(sa.C(0, j), sb.C(0, j));
    EXPECT_EQ(sa.C(0, 2), Complex(0.30000000000000004));
}

TEST(Config, SchemaDiagnostics) {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message(R"({"family": "rational", "n": 1, "k": 1, "C": [[1, 2]], "extra": 0})").find("extra"), std::string::npos);
    EXPECT_NE(message(R"({"family": "rational", "n": 1, "k": 1, "C": [[1, 2, 3]]})").find("C"), std::string::npos);
    EXPECT_NE(message(R"({"family": "soliton", "betas": [1, 2], "C": [[1, 2], [3]]})").find("C[1]"), std::string::npos);
    EXPECT_NE(message(R"({"family": "soliton", "betas": [1, "x/y"], "C": [[1, 2]]})").find("betas[1]"), std::string::npos);
    EXPECT_NE(message(R"({"family": "widget"})").find("family"), std::string::npos);
    EXPECT_NE(message(R"({"family": "soliton", "backend": "gpu", "betas": [1, 2], "C": [[1, 2]]})").find("backend"),
              std::string::npos);
    EXPECT_NE(message(R"({"family": "generic-jordan", "B": [[1, 0]], "D": [[2, 1]], "C": [[1]]})").find("B[0][1]"),
              std::string::npos);
    EXPECT_NE(message("{\n \"family\": \"soliton\",\n").find("line"), std::string::npos);
    EXPECT_NE(message(R"({"family": "soliton", "betas": [1, 2], "C": [[1, 2]], "tolerances": {"speed": 1}})").find("speed"),
              std::string::npos);
    EXPECT_THROW(parse_config(R"({"family": "soliton", "betas": [0.5, 0.5], "C": [[1, 1]]})"), EigenvalueCollision);
    EXPECT_THROW(parse_config(R"({"family": "generic-jordan", "B": [[1, 1]], "D": [[1, 1]], "C": [[1]]})"),
                 EigenvalueCollision);
}

TEST(Config, ScalarText) {
    EXPECT_EQ(parse_scalar_text("-1/2"), GaussianRational(Rational(-1, 2)));
    EXPECT_EQ(parse_scalar_text("0.25,-3"), GaussianRational(Rational(1, 4), Rational(-3)));
    EXPECT_THROW(parse_scalar_text("abc"), ConfigError);
}

TEST_F(CliTest, BuildRationalIsExact) {
    EXPECT_EQ(run({"build", write("c.json", rational_11)}), exit_pass);
    EXPECT_NE(out().find("rank-1 residual: 0 (exact)"), std::string::npos);
}

TEST_F(CliTest, BuildDuplicateBetaIsInputError) {
    EXPECT_EQ(run({"build", write("c.json", R"({"family": "soliton", "betas": [0.5, 0.5], "C": [[1, 1]]})")}),
              exit_input_error);
    EXPECT_NE(err().find("repeated"), std::string::npos);
}

TEST_F(CliTest, BuildGenericJordanListsIdentities) {
    const auto cfg = write("c.json", R"({"family": "generic-jordan", "B": [[0.3, 2], [[-0.2, 0.4], 1]],
        "D": [[-0.5, 1], [0.1, 1]], "C": [[1, 2, 0.5], [0, 1, -1]], "F": [[1, 0.5], [0.2, 1]]})");
    EXPECT_EQ(run({"build", cfg}), exit_pass);
    for (const char* name : {"A0 B - D^T A0", "A(B,D) B - D^T A(B,D)", "A(B,D) = A0(B,D) r_D(B)", "A(B) = K(D) A(B,D)",
                             "Lambda^T K = K D^T - e1 k^T", "K f_D = e1"})
        EXPECT_NE(out().find(name), std::string::npos) << name;
    EXPECT_EQ(out().find("FAIL"), std::string::npos);
}

TEST_F(CliTest, TauValues) {
    const auto cfg = write("c.json", rational_11);
    EXPECT_EQ(run({"tau", cfg, "--t", "2"}), exit_pass);
    EXPECT_EQ(out(), "tau = 13\n");
    EXPECT_EQ(run({"tau", cfg}), exit_pass);
    EXPECT_EQ(out(), "tau = 3\n");  // det(F A C^T)
    EXPECT_EQ(run({"tau", cfg, "--t", "1", "2", "3", "4"}), exit_input_error);
    EXPECT_EQ(run({"tau", cfg, "--t", "2", "--all-forms"}), exit_pass);
    const auto l = lines(out());
    ASSERT_EQ(l.size(), 6u);
    EXPECT_EQ(l[2], "det(A(B,D) E C^T)       = 13");
    EXPECT_EQ(l[5], "max pairwise relative difference: 0");
}

TEST_F(CliTest, TauExactBackendNeedsPolynomialFlow) {
    const auto cfg = write("c.json", R"({"family": "soliton", "betas": [1, -1], "C": [[1, 1]]})");
    EXPECT_EQ(run({"tau", cfg, "--backend", "exact", "--t", "1/2"}), exit_input_error);
    EXPECT_EQ(run({"tau", cfg, "--backend", "exact"}), exit_pass);
    EXPECT_EQ(out(), "tau = 2\n");
    EXPECT_EQ(run({"tau", cfg, "--t", "0.5"}), exit_pass);
    const double expected = std::exp(0.5) + std::exp(-0.5);
    EXPECT_NEAR(std::stod(out().substr(6)), expected, 1e-14);
}

TEST_F(CliTest, ExpandRational) {
    const auto cfg = write("c.json", rational_11);
    EXPECT_EQ(run({"expand", cfg}), exit_pass);
    const auto l = lines(out());
    ASSERT_EQ(l.size(), 4u);
    EXPECT_EQ(l[0], "lambda\tfrobenius\tcoefficient\tunnormalized");
    EXPECT_EQ(l[1], "()\t(|)\t1\t3");
    EXPECT_EQ(l[2], "(1)\t(0|0)\t5/3\t5");
    EXPECT_EQ(l[3], "# EXACT (finite)");
    EXPECT_EQ(run({"expand", cfg, "--max-weight", "0"}), exit_pass);
    EXPECT_EQ(lines(out()).size(), 2u);
    EXPECT_EQ(run({"expand", cfg, "--max-weight", "3", "--all", "--format", "csv"}), exit_pass);
    EXPECT_EQ(lines(out()).size(), 1u + 7u + 1u);  // partitions of weight <= 3, then the marker
}

TEST_F(CliTest, ExpandSolitonThirteenRows) {
    const auto cfg = write("c.json", R"({"family": "soliton", "betas": [0.5, -0.3], "C": [[1, 2]]})");
    EXPECT_EQ(run({"expand", cfg, "--max-weight", "12"}), exit_pass);
    const auto l = lines(out());
    ASSERT_EQ(l.size(), 14u);
    // normalized one-row coefficients are (beta1^j + 2 beta2^j) / 3, bounded by 0.5^j
    for (std::size_t i = 1; i < l.size(); ++i) {
        const auto f = l[i].find('\t', l[i].find('\t') + 1);
        const double c = std::abs(std::stod(l[i].substr(f + 1, l[i].find('\t', f + 1) - f - 1)));
        EXPECT_LE(c, std::pow(0.5, static_cast<int>(i - 1)) + 1e-15);
    }
}

TEST_F(CliTest, ExpandSingularOriginIsDegenerate) {
    EXPECT_EQ(run({"expand", write("c.json", R"({"family": "rational", "n": 1, "k": 1, "C": [[0, 1]]})")}), exit_degenerate);
}

TEST_F(CliTest, VerifyExactRational) {
    const auto cfg = write("c.json", R"({"family": "rational", "backend": "exact", "n": 2, "k": 2,
                                         "C": [[1, 2, 0, 3], [4, 1, 1, 1]]})");
    EXPECT_EQ(run({"verify", cfg, "--samples", "30"}), exit_pass);
    EXPECT_NE(out().find("Plücker relation: EXACT ZERO"), std::string::npos);
    const auto summary = nlohmann::json::parse(lines(out()).back());
    EXPECT_TRUE(summary["pass"].get<bool>());
    EXPECT_EQ(summary["samples"].get<int>(), 30);
}

TEST_F(CliTest, VerifyIsDeterministicAndSeedSensitive) {
    const auto cfg = write("c.json", R"({"family": "cauchy", "betas": [0.9, 0.2, -0.4], "deltas": [-1.5, 1.2],
                                         "C": [[1, 0.5, 0.3], [0, 1, 2]]})");
    EXPECT_EQ(run({"verify", cfg, "--samples", "20", "--seed", "7"}), exit_pass);
    const std::string first = out();
    EXPECT_EQ(run({"verify", cfg, "--samples", "20", "--seed", "7"}), exit_pass);
    EXPECT_EQ(out(), first);
    EXPECT_EQ(run({"verify", cfg, "--samples", "20", "--seed", "8"}), exit_pass);
    EXPECT_NE(out(), first);
}

TEST_F(CliTest, VerifyCorruptedIsDetected) {
    const auto cfg = write("c.json", R"({"family": "soliton", "betas": [0.5, -0.5], "C": [[1, 1]]})");
    EXPECT_EQ(run({"verify", cfg, "--samples", "10"}), exit_pass);
    EXPECT_EQ(run({"verify", cfg, "--samples", "10", "--corrupt"}), exit_property_failure);
    EXPECT_NE(out().find("FAIL  rank-1: system A B - D^T A = f g^T"), std::string::npos);
}

TEST_F(CliTest, VerifyWritesSummaryFile) {
    const auto cfg = write("c.json", rational_11);
    const auto path = (dir_ / "summary.json").string();
    EXPECT_EQ(run({"verify", cfg, "--samples", "5", "--out", path}), exit_pass);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["family"], "rational");
    EXPECT_TRUE(j["pass"].get<bool>());
}

TEST_F(CliTest, GridSolitonPeak) {
    const auto cfg = write("c.json", R"({"family": "soliton", "betas": [0.7, -0.4], "C": [[1, 1]]})");
    const auto path = (dir_ / "g.csv").string();
    EXPECT_EQ(run({"grid", cfg, "--x", "-10:10:2001", "--y", "-1:1:3", "--out", path}), exit_pass);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "x,y,t,u,flag");
    double peak = 0.0;
    int rows = 0;
    for (std::string l; std::getline(in, l); ++rows) {
        const auto parts = lines([&] {
            std::string s = l;
            std::replace(s.begin(), s.end(), ',', '\n');
            return s;
        }());
        peak = std::max(peak, std::stod(parts[3]));
        EXPECT_EQ(parts[4], "0");
    }
    EXPECT_EQ(rows, 2001 * 3);
    EXPECT_NEAR(peak, 1.1 * 1.1 / 2, 1e-6);
}

TEST(Grid, ConstantTauGivesZeroField) {
    const FamilyConfig cfg = parse_config(R"({"family": "rational", "n": 1, "k": 0, "C": [[4]]})");
    GridRequest req;
    req.x = {-1, 1, 11};
    req.y = {-1, 1, 3};
    for (Backend b : {Backend::float_complex, Backend::exact_rational})
        for (const auto& r : evaluate_grid(cfg, b, req)) {
            EXPECT_EQ(r.u, 0.0);
            EXPECT_FALSE(r.flagged);
        }
}

TEST(Grid, CalogeroMoserPoleMovesLinearly) {
    const FamilyConfig cfg = parse_config(R"({"family": "calogero-moser", "betas": [0.5], "xis": [2]})");
    std::vector<double> poles;
    for (double time : {0.0, 1.0, 2.0}) {
        GridRequest req;
        req.x = {-10, 10, 4001};
        req.t = {time, time, 1};
        const auto rows = evaluate_grid(cfg, Backend::float_complex, req);
        double best = -1.0, where = 0.0;
        for (const auto& r : rows) {
            const double mag = r.flagged ? 1e300 : std::abs(r.u);
            if (mag > best) {
                best = mag;
                where = r.x;
            }
        }
        poles.push_back(where);
    }
    EXPECT_NEAR(poles[1] - poles[0], -0.75, 0.011);
    EXPECT_NEAR(poles[2] - poles[1], -0.75, 0.011);
}

TEST(Grid, RequestValidation) {
    GridRequest req;
    req.flows = {1, 1, 3};
    EXPECT_THROW(req.validate(), ConfigError);
    req.flows = {1, 2, 3};
    req.x.steps = 0;
    EXPECT_THROW(req.validate(), ConfigError);
}

TEST_F(CliTest, ExitCodesThroughBinary) {
    const auto good = write("good.json", rational_11);
    const auto bad = write("bad.json", "{ nope");
    const std::string cli = KPTAU_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    EXPECT_EQ(status("build " + good), 0);
    EXPECT_EQ(status("verify " + good + " --samples 5 --corrupt"), 1);
    EXPECT_EQ(status("build " + bad), 2);
    EXPECT_EQ(status("build " + (dir_ / "missing.json").string()), 2);
    EXPECT_EQ(status("frobnicate"), 2);
    EXPECT_EQ(status("expand " + write("s.json", R"({"family": "rational", "n": 1, "k": 1, "C": [[0, 1]]})")), 3);
}

}  // namespace
