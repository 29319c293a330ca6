#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "tfmodel/config.hpp"
#include "tfmodel/io.hpp"

using namespace tfmodel;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("tfmodel_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }
    fs::path dir;
};

} // namespace

TEST(Format, SeventeenDigitsRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23})
        EXPECT_EQ(std::stod(fmt17(v)), v);
    EXPECT_EQ(fmt_short(0.123456789), "0.123457");
}

TEST_F(TempDir, HalflineRoundTrip)
{
    const log_grid g(-3.0, 2.0, 33);
    const auto x = cplx(1.0, -0.25) * gaussian_eta_bump(0.5, 1.0, g);
    const auto p = dir / "x.csv";
    save_halfline(x, p);
    EXPECT_TRUE(fs::exists(dir / "x.json"));
    const auto y = load_halfline(p);
    EXPECT_EQ(y.grid(), g);
    for (std::size_t k = 0; k < g.size(); ++k)
        EXPECT_EQ(y[k], x[k]);
}

TEST_F(TempDir, ModelElementRoundTrip)
{
    const mu_grid g(4.0, 9);
    std::vector<cplx> p(9), m(9);
    for (std::size_t j = 0; j < 9; ++j) {
        p[j] = cplx(0.1 * j, 1.0 / (j + 1.0));
        m[j] = cplx(-1.0 / 3.0, 0.0);
    }
    save_model_element(model_element(g, p, m), dir / "phi.csv");
    const auto q = load_model_element(dir / "phi.csv");
    for (std::size_t j = 0; j < 9; ++j) {
        EXPECT_EQ(q.plus()[j], p[j]);
        EXPECT_EQ(q.minus()[j], m[j]);
    }
}

TEST_F(TempDir, LoadRejectsBadInput)
{
    const log_grid g(-1.0, 1.0, 3);
    save_halfline(exp_fn(1.0, g), dir / "ok.csv");
    EXPECT_THROW(load_halfline(dir / "missing.csv"), io_error);

    fs::copy(dir / "ok.json", dir / "hdr.json");
    write(dir / "hdr.csv", "x,re,im\n1,0,0\n");
    EXPECT_THROW(load_halfline(dir / "hdr.csv"), io_error);

    fs::copy(dir / "ok.json", dir / "rows.json");
    write(dir / "rows.csv", "xi,re,im\n1,0,0\n");
    EXPECT_THROW(load_halfline(dir / "rows.csv"), io_error);

    fs::copy(dir / "ok.json", dir / "num.json");
    write(dir / "num.csv", "xi,re,im\n0.36787944117144233,0,0\n1,abc,0\n2.7182818284590451,0,0\n");
    EXPECT_THROW(load_halfline(dir / "num.csv"), io_error);

    fs::copy(dir / "ok.json", dir / "xi.json");
    write(dir / "xi.csv", "xi,re,im\n0.5,0,0\n1,0,0\n2.7182818284590451,0,0\n");
    EXPECT_THROW(load_halfline(dir / "xi.csv"), io_error);

    write(dir / "side.json", "{\"eta_min\": -1}");
    fs::copy(dir / "ok.csv", dir / "side.csv");
    EXPECT_THROW(load_halfline(dir / "side.csv"), io_error);
}

TEST_F(TempDir, AtomicWriteReplaces)
{
    const auto p = dir / "a.txt";
    write_atomic(p, "one");
    write_atomic(p, "two");
    std::ifstream is(p);
    std::string s;
    is >> s;
    EXPECT_EQ(s, "two");
    EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
    EXPECT_THROW(write_atomic(dir / "no" / "such" / "f.txt", "x"), io_error);
}

TEST(Csv, Formats)
{
    const mu_grid g(1.0, 3);
    const auto e = eigencurve_csv(g);
    EXPECT_EQ(e.rfind("mu,re_zeta_plus,im_zeta_plus,re_zeta_minus,im_zeta_minus\n# endpoint_plus=", 0), 0u);
    EXPECT_NE(model_sweep_csv(g).find("\n0,0.5,0.49999999999999989,0.5,0.49999999999999989,0.70710678118654746\n"), std::string::npos);
    witness_table t;
    t.rows.push_back({0.1, 0.1, 2.0, 0.2});
    t.slope = -2.0;
    EXPECT_EQ(witness_csv(t), "delta,dist,resolvent,product\n# loglog_slope=-2\n0.10000000000000001,0.10000000000000001,2,0.20000000000000001\n");
    resolvent_bounds b{cplx(1.0, 0.0), 0.5, 1.5, std::nullopt};
    EXPECT_EQ(resolvent_csv({b}), "re_z,im_z,lower,upper,numeric\n1,0,0.5,1.5,nan\n");
}

TEST(Config, DefaultsValidateAndRoundTrip)
{
    const run_config c;
    EXPECT_NO_THROW(validate(c));
    const auto j = config_to_json(c);
    const auto d = config_from_json(j);
    EXPECT_EQ(config_to_json(d), j);
    EXPECT_EQ(c.grid().size(), 4096u);
    EXPECT_EQ(c.mus().size(), 4096u);
}

TEST(Config, StrictParsing)
{
    using nlohmann::json;
    EXPECT_THROW(config_from_json(json::array()), argument_error);
    EXPECT_THROW(config_from_json({{"bogus", 1}}), argument_error);
    EXPECT_THROW(config_from_json({{"n", -5}}), argument_error);
    EXPECT_THROW(config_from_json({{"n", 1}}), argument_error);
    EXPECT_THROW(config_from_json({{"n", 2.5}}), argument_error);
    EXPECT_THROW(config_from_json({{"eta_min", 5.0}, {"eta_max", 1.0}}), argument_error);
    EXPECT_THROW(config_from_json({{"amplitudes", json::array()}}), argument_error);
    EXPECT_THROW(config_from_json({{"amplitudes", {1.0, -2.0}}}), argument_error);
    EXPECT_THROW(config_from_json({{"witness_deltas", {0.1, 0.2}}}), argument_error);
    EXPECT_THROW(config_from_json({{"z_grid", {{"steps", 0}}}}), argument_error);
    EXPECT_THROW(config_from_json({{"z_grid", {{"foo", 0}}}}), argument_error);
    EXPECT_THROW(config_from_json({{"tolerances", {{"parseval", -1.0}}}}), argument_error);
    EXPECT_THROW(config_from_json({{"mu_max", "big"}}), argument_error);
    const auto c = config_from_json({{"n", 512}, {"tolerances", {{"slope", 0.1}}}});
    EXPECT_EQ(c.n, 512u);
    EXPECT_EQ(c.tol.slope, 0.1);
    EXPECT_EQ(c.m, 4096u);
}

TEST(Config, LoadFromFile)
{
    const auto p = fs::temp_directory_path() / "tfmodel_cfg_test.json";
    std::ofstream(p) << "{\"n\": 1024, \"mu_max\": 10}";
    const auto c = load_config(p);
    EXPECT_EQ(c.n, 1024u);
    EXPECT_EQ(c.mu_max, 10.0);
    std::ofstream(p) << "{not json";
    EXPECT_THROW(load_config(p), argument_error);
    fs::remove(p);
    EXPECT_THROW(load_config(p), argument_error);
}
