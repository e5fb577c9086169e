#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "heislab/dispatch.hpp"
#include "heislab/report.hpp"

using namespace heis;

namespace {

std::string csv(const Report& r) {
    std::ostringstream s;
    emit_csv(r, s);
    return s.str();
}

std::string json(const Report& r) {
    std::ostringstream s;
    emit_json(r, s);
    return s.str();
}

RunSpec spec(std::string cmd) {
    RunSpec s;
    s.subcommand = std::move(cmd);
    return s;
}

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

std::filesystem::path write_config(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(Format, FixedInsideRangeScientificOutside) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(0.5333), "0.5333");
    EXPECT_EQ(format_number(1e-4), "0.0001");
    EXPECT_EQ(format_number(999999.5), "999999.5");
    EXPECT_EQ(format_number(1e6), "1e+06");
    EXPECT_EQ(format_number(9.9e-5), "9.9e-05");
    EXPECT_EQ(format_number(-2.5e-7), "-2.5e-07");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-HUGE_VAL), "-inf");
}

TEST(Format, CsvTextRoundTripsEveryDouble) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> expo(-12.0, 12.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = (i % 2 ? -1.0 : 1.0) * std::pow(10.0, expo(rng));
        EXPECT_EQ(bits(std::strtod(format_number(v).c_str(), nullptr)), bits(v)) << v;
    }
}

TEST(Csv, EmptyRowsGiveHeaderOnly) {
    Report r;
    r.columns = {"a", "b"};
    EXPECT_EQ(csv(r), "a,b\n");
}

TEST(Csv, QuotesFieldsWithSeparators) {
    Report r;
    r.columns = {"name", "v"};
    r.add_row({std::string("x,y \"z\""), std::int64_t{3}});
    EXPECT_EQ(csv(r), "name,v\n\"x,y \"\"z\"\"\",3\n");
    EXPECT_THROW(r.add_row({1.0}), DimensionError);
}

TEST(Csv, SummaryGoesToNotesStream) {
    Report r;
    r.command = "verdict";
    r.columns = {"x"};
    r.summary = {{"statement", "SubcriticalBlowup, q_c = 2"}, {"pass", true}};
    std::ostringstream out, notes;
    emit_csv(r, out, &notes);
    EXPECT_EQ(out.str(), "x\n");
    EXPECT_EQ(notes.str(), "# command: verdict\n# statement: SubcriticalBlowup, q_c = 2\n# pass: true\n");
}

TEST(Json, RoundTripIsBitExact) {
    Report r;
    r.command = "demo";
    r.meta.seed = 7;
    r.meta.timestamp = "1970-01-01T00:00:00Z";
    r.columns = {"i", "v", "s", "b"};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> expo(-300.0, 300.0);
    for (int i = 0; i < 500; ++i)
        r.add_row({std::int64_t{i}, std::pow(10.0, expo(rng)) * (i % 3 ? 1.0 : -1.0), std::to_string(i), i % 2 == 0});
    r.add_row({std::int64_t{-1}, 2.0, std::string("two"), false});
    r.summary = {{"slope", -1.9999999999999996}};
    const Report back = from_json(Json::parse(json(r)));
    ASSERT_EQ(back.rows.size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(std::get<std::int64_t>(back.rows[i][0]), std::get<std::int64_t>(r.rows[i][0]));
        EXPECT_EQ(bits(std::get<double>(back.rows[i][1])), bits(std::get<double>(r.rows[i][1])));
        EXPECT_EQ(std::get<std::string>(back.rows[i][2]), std::get<std::string>(r.rows[i][2]));
        EXPECT_EQ(std::get<bool>(back.rows[i][3]), std::get<bool>(r.rows[i][3]));
    }
    EXPECT_EQ(bits(back.summary["slope"].get<double>()), bits(-1.9999999999999996));
    EXPECT_EQ(json(back), json(r));
}

TEST(Json, HasMetaRowsSummary) {
    const Json j = Json::parse(json(dispatch(spec("verdict"))));
    EXPECT_TRUE(j.contains("meta"));
    EXPECT_TRUE(j.contains("rows"));
    EXPECT_TRUE(j.contains("summary"));
    EXPECT_EQ(j["meta"]["version"], std::string(version));
}

TEST(Timestamp, FollowsSourceDateEpoch) {
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    EXPECT_EQ(report_timestamp(), "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    EXPECT_EQ(report_timestamp(), "1970-01-01T00:00:00Z");
}

TEST(Dispatch, Lemma1SchemaAndValues) {
    RunSpec s = spec("lemma1");
    s.q = "2";
    s.ell = 4.0;
    s.T = std::vector<double>{10.0};
    const Report r = dispatch(s);
    ASSERT_EQ(r.columns, (std::vector<std::string>{"integral", "name", "T", "value", "closed_form", "rel_err"}));
    ASSERT_EQ(r.rows.size(), 3u);
    // T / (ell + 1), (q-1) ell^q' T^{1-q'} / (ell(q-1) - 1), (q-1) (ell(ell-1))^q' T^{1-2q'} / (ell(q-1) - q - 1)
    const double expected[] = {2.0, 16.0 / 3.0 / 10.0, 144.0 / 1000.0};
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(std::get<std::string>(r.rows[k][0]), "I" + std::to_string(k + 1));
        EXPECT_NEAR(std::get<double>(r.rows[k][3]), expected[k], 1e-12 * expected[k]);
    }
}

TEST(Dispatch, RowCountsMatchGrids) {
    RunSpec s = spec("lemma1");
    s.T = std::vector<double>{1.0, 2.0, 3.0};
    EXPECT_EQ(dispatch(s).rows.size(), 9u);
    s = spec("bound-parabolic");
    s.q = "1.5";
    s.T = std::vector<double>{1.0, 2.0};
    s.R = std::vector<double>{8.0, 16.0, 32.0};
    s.samples = 20'000;
    EXPECT_EQ(dispatch(s).rows.size(), 6u);
}

TEST(Dispatch, VerdictStatement) {
    RunSpec s = spec("verdict");
    s.q = "1.5";
    const Report r = dispatch(s);
    EXPECT_EQ(r.summary["statement"], "SubcriticalBlowup, q_c = 2");
    s.n = 3;
    s.q = "4/3";
    EXPECT_EQ(dispatch(s).summary["statement"], "CriticalBlowup, q_c = 4/3");
}

TEST(Dispatch, ScalingSlopeCarriesResidual) {
    RunSpec s = spec("scaling");
    s.q = "1.5";
    s.R = std::vector<double>{8.0, 16.0, 32.0, 64.0};
    s.samples = 20'000;
    const Report r = dispatch(s);
    EXPECT_NEAR(r.summary["fit"]["slope"].get<double>(), -2.0, 1e-4);
    EXPECT_TRUE(r.summary["fit"].contains("max_relative_residual"));
    EXPECT_EQ(r.columns.back(), "residual");
}

TEST(Dispatch, ParameterErrorsNameTheConstraint) {
    RunSpec s = spec("lemma1");
    s.ell = 2.0;
    try {
        dispatch(s);
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("ell must exceed (q+1)/(q-1)"), std::string::npos);
    }
    EXPECT_THROW(dispatch(spec("nonsense")), ParameterError);
    s = spec("scaling");
    s.target = "I9";
    EXPECT_THROW(dispatch(s), ParameterError);
    s = spec("lemma1");
    s.q = "1";
    EXPECT_THROW(dispatch(s), ParameterError);
    s = spec("bound-parabolic");
    s.R = std::vector<double>{-1.0};
    EXPECT_THROW(dispatch(s), ParameterError);
}

TEST(Dispatch, SeededRunsAreByteIdentical) {
    for (const char* cmd : {"lemma2", "identities", "residual"}) {
        RunSpec s = spec(cmd);
        s.q = "1.5";
        s.samples = 20'000;
        s.seed = 9;
        EXPECT_EQ(json(dispatch(s)), json(dispatch(s))) << cmd;
        EXPECT_EQ(csv(dispatch(s)), csv(dispatch(s))) << cmd;
    }
}

TEST(Simulate, ConfigKeysAreLowerSnakeCase) {
    const Json j = Json::parse(R"({"equation":"hyperbolic","q":3,"nonlinear":false,"dt":0.01,"steps":5,
        "half_width":[1,1,2],"nodes":[9,9,9],"u0":{"width":0.4,"amplitude":2},"u1":{"amplitude":0},
        "solver_tol":1e-9,"max_iter":500,"threshold":100,"epsilon":0})");
    const fd::SimConfig c = detail::sim_config_from_json(j);
    EXPECT_EQ(c.equation, fd::Equation::hyperbolic);
    EXPECT_EQ(c.q, 3.0);
    EXPECT_FALSE(c.nonlinear);
    EXPECT_EQ(c.steps, 5u);
    EXPECT_EQ(c.half_width[2], 2.0);
    EXPECT_EQ(c.u0.amplitude, 2.0);
    EXPECT_EQ(c.max_iter, 500u);
    EXPECT_THROW(detail::sim_config_from_json(Json::parse(R"({"timeStep":1})")), ParameterError);
    EXPECT_THROW(detail::sim_config_from_json(Json::parse(R"({"n":2})")), ParameterError);
    EXPECT_THROW(detail::sim_config_from_json(Json::parse(R"({"dt":"x"})")), ParameterError);
}

TEST(Simulate, ExitCodesFollowStatus) {
    RunSpec s = spec("simulate");
    s.config = write_config("heislab_ok.json", R"({"steps":3,"nodes":[9,9,9]})").string();
    Report r = dispatch(s);
    EXPECT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(exit_code(r), 0);

    s.config = write_config("heislab_blow.json", R"({"steps":50,"nodes":[9,9,9],"threshold":0.5})").string();
    r = dispatch(s);
    EXPECT_EQ(r.summary["status"], "blowup");
    EXPECT_EQ(exit_code(r), 0);

    s.config = write_config("heislab_fail.json", R"({"steps":3,"nodes":[9,9,9],"max_iter":1})").string();
    r = dispatch(s);
    EXPECT_EQ(r.summary["status"], "solver_failure");
    EXPECT_EQ(exit_code(r), 3);

    s.config = "/nonexistent/heislab.json";
    EXPECT_THROW(dispatch(s), IoError);
}
